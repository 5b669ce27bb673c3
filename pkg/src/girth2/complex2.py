"""Two-dimensional simplicial complexes with Z/2 chain arithmetic.

A :class:`Complex2` lives on vertices ``0..n-1``.  Faces and edges are stored
sorted and densely indexed; chains are plain ints whose bit ``i`` marks face
(respectively edge, vertex) ``i``.  Boundary maps become XORs of precomputed
incidence masks, which keeps rank computation and cycle enumeration
popcount-bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import InvalidInputError
from .gf2 import gf2_rank

Face = tuple[int, int, int]
Edge = tuple[int, int]


class Complex2:
    """A downward-closed 2-complex on the vertex set {0, ..., n-1}."""

    __slots__ = (
        "n",
        "faces",
        "edges",
        "face_index",
        "edge_index",
        "face_edge_masks",
        "face_vertex_masks",
        "edge_vertex_masks",
    )

    def __init__(self, n: int, faces: Iterable[Sequence[int]], extra_edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise InvalidInputError("vertex count must be nonnegative")
        self.n = n
        seen: set[Face] = set()
        face_list: list[Face] = []
        for face in faces:
            if len(face) != 3 or len(set(face)) != 3:
                raise InvalidInputError(f"face {tuple(face)} must have 3 distinct vertices")
            tri = tuple(sorted(face))
            if any(v < 0 or v >= n for v in tri):
                raise InvalidInputError(f"face {tri} has a vertex index outside [0, {n})")
            if tri in seen:
                raise InvalidInputError(f"duplicate face {tri}")
            seen.add(tri)
            face_list.append(tri)  # type: ignore[arg-type]
        face_list.sort()
        self.faces: tuple[Face, ...] = tuple(face_list)

        edge_set: set[Edge] = set()
        for a, b, c in self.faces:
            edge_set.update(((a, b), (a, c), (b, c)))
        for edge in extra_edges:
            if len(edge) != 2 or edge[0] == edge[1]:
                raise InvalidInputError(f"edge {tuple(edge)} must have 2 distinct vertices")
            u, v = sorted(edge)
            if u < 0 or v >= n:
                raise InvalidInputError(f"edge {(u, v)} has a vertex index outside [0, {n})")
            edge_set.add((u, v))
        self.edges: tuple[Edge, ...] = tuple(sorted(edge_set))

        self.face_index = {f: i for i, f in enumerate(self.faces)}
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.face_edge_masks = tuple(
            (1 << self.edge_index[(a, b)]) | (1 << self.edge_index[(a, c)]) | (1 << self.edge_index[(b, c)])
            for a, b, c in self.faces
        )
        self.face_vertex_masks = tuple((1 << a) | (1 << b) | (1 << c) for a, b, c in self.faces)
        self.edge_vertex_masks = tuple((1 << u) | (1 << v) for u, v in self.edges)

    # -- basic counts -----------------------------------------------------

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def has_complete_skeleton(self) -> bool:
        return self.num_edges == self.n * (self.n - 1) // 2

    def __repr__(self) -> str:
        return f"Complex2(n={self.n}, edges={self.num_edges}, faces={self.num_faces})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex2):
            return NotImplemented
        return self.n == other.n and self.faces == other.faces and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.faces, self.edges))

    # -- chains ------------------------------------------------------------

    def chain_from_faces(self, triples: Iterable[Sequence[int]]) -> int:
        bits = 0
        for tri in triples:
            key = tuple(sorted(tri))
            if key not in self.face_index:
                raise InvalidInputError(f"face {key} not in complex")
            bits |= 1 << self.face_index[key]
        return bits

    def faces_of_chain(self, bits: int) -> list[Face]:
        return [self.faces[i] for i in bit_indices(bits)]

    def chain_from_edges(self, pairs: Iterable[Sequence[int]]) -> int:
        bits = 0
        for pair in pairs:
            key = tuple(sorted(pair))
            if key not in self.edge_index:
                raise InvalidInputError(f"edge {key} not in complex")
            bits |= 1 << self.edge_index[key]
        return bits

    def edges_of_chain(self, bits: int) -> list[Edge]:
        return [self.edges[i] for i in bit_indices(bits)]

    def all_faces_chain(self) -> int:
        return (1 << self.num_faces) - 1

    def triangle_cycle(self, a: int, b: int, c: int) -> int:
        """The 1-cycle running around vertices a, b, c (edges must exist)."""
        return self.chain_from_edges(((a, b), (a, c), (b, c)))

    def vertex_support_bits(self, face_bits: int) -> int:
        support = 0
        for i in bit_indices(face_bits):
            support |= self.face_vertex_masks[i]
        return support

    def vertex_support(self, face_bits: int) -> tuple[int, ...]:
        return tuple(bit_indices(self.vertex_support_bits(face_bits)))

    # -- boundary maps -----------------------------------------------------

    def boundary_of_faces(self, face_bits: int) -> int:
        if face_bits < 0 or face_bits.bit_length() > self.num_faces:
            raise InvalidInputError("2-chain does not match this complex's face index space")
        out = 0
        for i in bit_indices(face_bits):
            out ^= self.face_edge_masks[i]
        return out

    def boundary_of_edges(self, edge_bits: int) -> int:
        if edge_bits < 0 or edge_bits.bit_length() > self.num_edges:
            raise InvalidInputError("1-chain does not match this complex's edge index space")
        out = 0
        for i in bit_indices(edge_bits):
            out ^= self.edge_vertex_masks[i]
        return out

    def is_cycle(self, face_bits: int) -> bool:
        return self.boundary_of_faces(face_bits) == 0

    # -- derived complexes ---------------------------------------------------

    def without_faces(self, face_bits: int) -> "Complex2":
        """Same vertices and edges, with the marked faces removed."""
        kept = [f for i, f in enumerate(self.faces) if not (face_bits >> i) & 1]
        return Complex2(self.n, kept, extra_edges=self.edges)

    def induced(self, vertices: Sequence[int]) -> tuple["Complex2", tuple[int, ...]]:
        """Induced subcomplex on the given vertices, relabeled densely.

        Returns the subcomplex and the old labels in new-label order.
        """
        chosen = tuple(sorted(set(vertices)))
        relabel = {v: i for i, v in enumerate(chosen)}
        mask = 0
        for v in chosen:
            mask |= 1 << v
        faces = [
            tuple(relabel[v] for v in f)
            for f, fm in zip(self.faces, self.face_vertex_masks)
            if fm & ~mask == 0
        ]
        edges = [
            (relabel[u], relabel[v])
            for (u, v), em in zip(self.edges, self.edge_vertex_masks)
            if em & ~mask == 0
        ]
        return Complex2(len(chosen), faces, extra_edges=edges), chosen

    def support_subcomplex(self, face_bits: int) -> "Complex2":
        """The closure of the marked faces, relabeled to its own vertex set."""
        vertices = self.vertex_support(face_bits)
        relabel = {v: i for i, v in enumerate(vertices)}
        faces = [tuple(relabel[v] for v in self.faces[i]) for i in bit_indices(face_bits)]
        return Complex2(len(vertices), faces)


def bit_indices(bits: int):
    """Indices of set bits, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


# -- spec-level operations --------------------------------------------------


def boundary2(chain: int, complex2: Complex2) -> int:
    """Z/2 boundary of a 2-chain: XOR of the three edges of each set face."""
    return complex2.boundary_of_faces(chain)


def is_cycle2(chain: int, complex2: Complex2) -> bool:
    return complex2.boundary_of_faces(chain) == 0


@dataclass(frozen=True)
class HomologySummary:
    dim_Z2: int
    dim_B1: int
    dim_H1: int
    dim_H2: int
    beta0: int
    beta1: int
    beta2: int


def homology_ranks(complex2: Complex2) -> HomologySummary:
    """Betti numbers over Z/2 by Gaussian elimination of both boundary maps."""
    rank2 = gf2_rank(complex2.face_edge_masks)
    rank1 = gf2_rank(complex2.edge_vertex_masks)
    dim_z2 = complex2.num_faces - rank2
    dim_z1 = complex2.num_edges - rank1
    dim_h1 = dim_z1 - rank2
    beta0 = complex2.n - rank1
    return HomologySummary(
        dim_Z2=dim_z2,
        dim_B1=rank2,
        dim_H1=dim_h1,
        dim_H2=dim_z2,
        beta0=beta0,
        beta1=dim_h1,
        beta2=dim_z2,
    )


def euler_characteristic(complex2: Complex2, support_only: bool = False) -> int:
    """v - e + f.

    With ``support_only`` the vertex count includes only vertices incident to
    some edge or face, which is the right convention when the complex is the
    support of a cycle; the default counts all n vertices.
    """
    if support_only:
        incident = 0
        for mask in complex2.edge_vertex_masks:
            incident |= mask
        for mask in complex2.face_vertex_masks:
            incident |= mask
        v = incident.bit_count()
    else:
        v = complex2.n
    return v - complex2.num_edges + complex2.num_faces


# -- serialization ------------------------------------------------------------


def parse_complex(text: str) -> Complex2:
    """Parse the {"n": ..., "faces": [[i,j,k], ...]} interchange format.

    Downward closure is completed automatically.  An optional "edges" list
    carries edges beyond the closure (a complete 1-skeleton, for instance).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "faces" not in doc:
        raise InvalidInputError('complex document needs "n" and "faces" keys')
    n = doc["n"]
    if not isinstance(n, int):
        raise InvalidInputError('"n" must be an integer')
    faces = doc["faces"]
    extra = doc.get("edges", ())
    return Complex2(n, faces, extra_edges=extra)


def complex_to_dict(complex2: Complex2) -> dict:
    doc: dict = {"n": complex2.n, "faces": [list(f) for f in complex2.faces]}
    implied: set[Edge] = set()
    for a, b, c in complex2.faces:
        implied.update(((a, b), (a, c), (b, c)))
    extra = [list(e) for e in complex2.edges if e not in implied]
    if extra:
        doc["edges"] = extra
    return doc


def complex_to_json(complex2: Complex2) -> str:
    return json.dumps(complex_to_dict(complex2), separators=(",", ":"), sort_keys=True)


# -- canned complexes ----------------------------------------------------------


def complete_2_skeleton(n: int) -> Complex2:
    """All C(n,3) faces on n vertices."""
    return Complex2(n, combinations(range(n), 3))


def tetrahedron_boundary() -> Complex2:
    return complete_2_skeleton(4)


def octahedron() -> Complex2:
    """Antipodal pairs (0,5), (1,4), (2,3); faces avoid antipodal pairs."""
    antipode = {0: 5, 5: 0, 1: 4, 4: 1, 2: 3, 3: 2}
    faces = [
        f for f in combinations(range(6), 3)
        if not any(antipode[a] in f for a in f)
    ]
    return Complex2(6, faces)


def triangle_bipyramid() -> Complex2:
    """Equator 0,1,2 with poles 3 and 4."""
    faces = []
    for pole in (3, 4):
        for u, v in ((0, 1), (0, 2), (1, 2)):
            faces.append((u, v, pole))
    return Complex2(5, faces)

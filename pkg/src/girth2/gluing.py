"""Pseudomanifolds-with-boundary built by gluing triangle edges in pairs.

Start from f disjoint triangles and repeatedly identify two boundary edges by
one of the two simplicial isomorphisms between them.  After 3f/2 gluings the
result is a closed 2-pseudomanifold; the intermediate states have boundaries
that are disjoint unions of edge loops.

Encoding.  Triangle t has sides 3t, 3t+1, 3t+2; side s = 3t+j runs from its
tail corner 3t+j to its head corner 3t+(j+1)%3.  A gluing of sides (a, b)
identifies tail(a)~head(b), head(a)~tail(b) when flip is False (the
orientation-reversing map, the usual one for surfaces), or tail~tail,
head~head when flip is True.  Vertex classes are corner classes under these
identifications; boundary loops are recovered by rotating around corners
through matched sides, so no incremental loop bookkeeping can drift: every
query recomputes from the union-find and the matching.

The potential of a state is  internal_vertices - closed_components + B,
where B sums beta(loop length) over boundary loops, skipping each component's
longest loop, and beta(l) = max(0, 1 - delta*log10(l)).  Two boundary edges
are D-near when a chain of at most D vertex-sharing steps links them.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InvalidInputError, NotASurfaceError, PropertyViolationError

_TOL = 1e-9


def _corner(side: int, slot: int) -> int:
    base = side - side % 3
    return side if slot == 0 else base + (side % 3 + 1) % 3


def _pivot(side: int, slot: int) -> tuple[int, int]:
    """The other side of the same triangle at the corner (side, slot)."""
    base = side - side % 3
    j = side % 3
    if slot == 0:
        return base + (j - 1) % 3, 1
    return base + (j + 1) % 3, 0


class _RollbackDsu:
    """Union-find without path compression, with an undo log."""

    __slots__ = ("parent", "size", "log")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.log: list[int] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self.log.append(-1)
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.log.append(rb)

    def rollback(self, length: int) -> None:
        while len(self.log) > length:
            child = self.log.pop()
            if child >= 0:
                self.size[self.parent[child]] -= self.size[child]
                self.parent[child] = child

    def copy(self) -> "_RollbackDsu":
        dup = _RollbackDsu.__new__(_RollbackDsu)
        dup.parent = self.parent[:]
        dup.size = self.size[:]
        dup.log = []
        return dup


@dataclass(frozen=True)
class GluingMove:
    """Identify boundary side a with boundary side b (see module docstring)."""

    a: int
    b: int
    flip: bool = False

    def to_doc(self) -> dict:
        return {"a": [self.a // 3, self.a % 3], "b": [self.b // 3, self.b % 3], "flip": self.flip}

    @classmethod
    def from_doc(cls, doc: dict) -> "GluingMove":
        (ta, ja), (tb, jb) = doc["a"], doc["b"]
        return cls(a=3 * ta + ja, b=3 * tb + jb, flip=bool(doc["flip"]))


class GluingState:
    """A pseudomanifold with boundary, mid-gluing.

    ``apply_gluing`` is copy-on-apply; the private _apply_inplace/_undo pair
    exists for enumeration, which may not retain references across calls.
    """

    __slots__ = ("f", "_corners", "_tris", "_partner", "_flip")

    def __init__(self, f: int):
        if f < 2 or f % 2 != 0:
            raise InvalidInputError("triangle count must be even and at least 2")
        self.f = f
        self._corners = _RollbackDsu(3 * f)
        self._tris = _RollbackDsu(f)
        self._partner = [-1] * (3 * f)
        self._flip = [False] * (3 * f)

    # -- copying ---------------------------------------------------------

    def copy(self) -> "GluingState":
        dup = GluingState.__new__(GluingState)
        dup.f = self.f
        dup._corners = self._corners.copy()
        dup._tris = self._tris.copy()
        dup._partner = self._partner[:]
        dup._flip = self._flip[:]
        return dup

    # -- mutation ----------------------------------------------------------

    def _check_move(self, a: int, b: int) -> None:
        if not (0 <= a < 3 * self.f and 0 <= b < 3 * self.f):
            raise InvalidInputError("side index out of range")
        if a == b:
            raise InvalidInputError("an edge cannot be glued to itself")
        if self._partner[a] != -1 or self._partner[b] != -1:
            raise InvalidInputError("both edges must be unmatched boundary edges")

    def _apply_inplace(self, move: GluingMove) -> tuple[int, int]:
        a, b, flip = move.a, move.b, move.flip
        self._check_move(a, b)
        token = (len(self._corners.log), len(self._tris.log))
        self._partner[a] = b
        self._partner[b] = a
        self._flip[a] = self._flip[b] = flip
        if flip:
            self._corners.union(_corner(a, 0), _corner(b, 0))
            self._corners.union(_corner(a, 1), _corner(b, 1))
        else:
            self._corners.union(_corner(a, 0), _corner(b, 1))
            self._corners.union(_corner(a, 1), _corner(b, 0))
        self._tris.union(a // 3, b // 3)
        return token

    def _undo(self, move: GluingMove, token: tuple[int, int]) -> None:
        self._partner[move.a] = -1
        self._partner[move.b] = -1
        self._corners.rollback(token[0])
        self._tris.rollback(token[1])

    def apply_gluing(self, move: GluingMove) -> "GluingState":
        dup = self.copy()
        dup._apply_inplace(move)
        return dup

    # -- structure queries ----------------------------------------------------

    def boundary_sides(self) -> list[int]:
        return [s for s in range(3 * self.f) if self._partner[s] == -1]

    @property
    def is_closed(self) -> bool:
        return all(p != -1 for p in self._partner)

    def matched_count(self) -> int:
        return sum(1 for p in self._partner if p != -1) // 2

    def _cross(self, side: int, slot: int) -> tuple[int, int]:
        partner = self._partner[side]
        return partner, (slot if self._flip[side] else 1 - slot)

    def _next_boundary(self, side: int, slot: int) -> tuple[int, int]:
        s, sl = _pivot(side, slot)
        while self._partner[s] != -1:
            s, sl = self._cross(s, sl)
            s, sl = _pivot(s, sl)
        return s, sl

    def boundary_loops(self) -> list[list[int]]:
        """Boundary components as side lists, each traced around its loop."""
        loops = []
        seen: set[int] = set()
        for start in range(3 * self.f):
            if self._partner[start] != -1 or start in seen:
                continue
            loop = []
            side, out_slot = start, 1
            while True:
                loop.append(side)
                seen.add(side)
                nxt, in_slot = self._next_boundary(side, out_slot)
                side, out_slot = nxt, 1 - in_slot
                if side == start:
                    break
            loops.append(loop)
        return loops

    def vertex_classes(self) -> list[int]:
        roots = {self._corners.find(c) for c in range(3 * self.f)}
        return sorted(roots)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_classes())

    @property
    def num_components(self) -> int:
        return len({self._tris.find(t) for t in range(self.f)})

    def side_endpoints(self, side: int) -> tuple[int, int]:
        return self._corners.find(_corner(side, 0)), self._corners.find(_corner(side, 1))

    def internal_vertex_count(self) -> int:
        on_boundary = set()
        for s in range(3 * self.f):
            if self._partner[s] == -1:
                on_boundary.update(self.side_endpoints(s))
        return self.num_vertices - len(on_boundary)

    def closed_component_count(self) -> int:
        with_boundary = {self._tris.find(s // 3) for s in range(3 * self.f) if self._partner[s] == -1}
        return self.num_components - len(with_boundary)

    @property
    def is_connected(self) -> bool:
        return self.num_components == 1

    def face_class_triples(self) -> list[tuple[int, ...]]:
        out = []
        for t in range(self.f):
            out.append(tuple(sorted(self._corners.find(3 * t + j) for j in range(3))))
        return out

    # -- move classification -----------------------------------------------------

    def classify_move(self, a: int, b: int) -> str:
        """'A', 'B', or 'C' by how many vertex classes the two edges share."""
        self._check_move(a, b)
        shared = len(set(self.side_endpoints(a)) & set(self.side_endpoints(b)))
        return "ABC"[shared]

    def d_near(self, a: int, b: int, limit: int) -> bool:
        """Chain of at most ``limit`` vertex-sharing steps from a to b?"""
        self._check_move(a, b)
        incidence: dict[int, list[int]] = {}
        for s in range(3 * self.f):
            if self._partner[s] == -1:
                for cls in self.side_endpoints(s):
                    incidence.setdefault(cls, []).append(s)
        dist = {a: 0}
        queue = deque([a])
        while queue:
            s = queue.popleft()
            if dist[s] >= limit:
                continue
            for cls in self.side_endpoints(s):
                for s2 in incidence[cls]:
                    if s2 not in dist:
                        dist[s2] = dist[s] + 1
                        if s2 == b:
                            return True
                        queue.append(s2)
        return b in dist and dist[b] <= limit


# -- the potential -----------------------------------------------------------------


@dataclass(frozen=True)
class PotentialParams:
    delta: float

    @property
    def near_limit(self) -> int:
        return math.ceil(10.0 ** (1.0 / self.delta))

    def beta(self, length: int) -> float:
        return max(0.0, 1.0 - self.delta * math.log10(length))


def loop_summary(state: GluingState) -> dict[int, list[int]]:
    """Boundary loop lengths grouped by component root."""
    by_component: dict[int, list[int]] = {}
    for loop in state.boundary_loops():
        root = state._tris.find(loop[0] // 3)
        by_component.setdefault(root, []).append(len(loop))
    return by_component


def potential(state: GluingState, params: PotentialParams) -> float:
    """internal vertices - closed components + boundary term."""
    return potential_from_parts(
        state.internal_vertex_count(),
        state.closed_component_count(),
        [sorted(v) for v in loop_summary(state).values()],
        params,
    )


def potential_from_parts(
    internal_vertices: int,
    closed_components: int,
    loops_per_component: Iterable[Sequence[int]],
    params: PotentialParams,
) -> float:
    boundary_term = 0.0
    for lengths in loops_per_component:
        if not lengths:
            continue
        boundary_term += sum(params.beta(l) for l in lengths) - params.beta(max(lengths))
    return internal_vertices - closed_components + boundary_term


# -- surface recognition --------------------------------------------------------------


def has_degenerate_boundary(state: GluingState) -> bool:
    """Length-1 boundary loops or edge classes with identical endpoints.

    States on the way to a triangulated surface never show either: every
    edge keeps two distinct endpoints and every boundary loop has at least
    two edges.  The potential's step bounds are only guaranteed on
    nondegenerate states (merging a length-1 loop into a length-2 loop can
    raise the boundary term on a far move).
    """
    for loop in state.boundary_loops():
        if len(loop) == 1:
            return True
    for s in range(3 * state.f):
        partner = state._partner[s]
        if partner != -1 and partner < s:
            continue
        u, v = state.side_endpoints(s)
        if u == v:
            return True
    return False


def is_triangulated_surface(state: GluingState) -> bool:
    """A closed state is a triangulated surface iff it is a simplicial complex
    whose vertex links are single cycles.
    """
    if not state.is_closed:
        raise InvalidInputError("surface recognition needs a closed state")
    triples = state.face_class_triples()
    for tri in triples:
        if len(set(tri)) != 3:
            return False
    if len(set(triples)) != len(triples):
        return False
    edge_pairs = []
    for s in range(3 * state.f):
        if s < state._partner[s]:
            u, v = state.side_endpoints(s)
            if u == v:
                return False
            edge_pairs.append((min(u, v), max(u, v)))
    if len(set(edge_pairs)) != len(edge_pairs):
        return False
    return _links_are_single_cycles(state)


def _corner_neighbors(state: GluingState, corner: int) -> list[int]:
    t = corner // 3
    i = corner % 3
    incident = ((3 * t + i, 0), (3 * t + (i - 1) % 3, 1))
    out = []
    for side, slot in incident:
        if state._partner[side] != -1:
            ps, psl = state._cross(side, slot)
            out.append(_corner(ps, psl))
    return out


def _links_are_single_cycles(state: GluingState) -> bool:
    # closed state: the corner-adjacency graph is 2-regular; the link of a
    # vertex class is one cycle iff the class's corners are one walk-component
    members: dict[int, list[int]] = {}
    for c in range(3 * state.f):
        members.setdefault(state._corners.find(c), []).append(c)
    for corners in members.values():
        start = corners[0]
        prev, cur = None, start
        visited = 1
        while True:
            nbrs = _corner_neighbors(state, cur)
            nxt = nbrs[0] if nbrs[0] != prev else nbrs[1]
            # a 2-cycle in the walk (prev==nxt) is legitimate: step back
            if nxt == start:
                break
            prev, cur = cur, nxt
            visited += 1
            if visited > len(corners):
                return False
        if visited != len(corners):
            return False
    return True


def state_from_surface(faces: Sequence[Sequence[int]]) -> GluingState:
    """Build the gluing state of a closed triangulated surface given as faces.

    Each edge must lie in exactly two faces.  Corner j of triangle t carries
    the j-th smallest vertex of face t; flips follow from the shared labels.
    """
    tris = [tuple(sorted(face)) for face in faces]
    if len(tris) % 2 != 0:
        raise InvalidInputError("a closed surface has an even number of faces")
    # side j of triangle t runs tail=corner j to head=corner j+1:
    # corner 0 -> a, corner 1 -> b, corner 2 -> c
    side_of_edge: dict[tuple[int, int], list[int]] = {}
    for t, (a, b, c) in enumerate(tris):
        for j, pair in enumerate(((a, b), (b, c), (c, a))):
            key = (min(pair), max(pair))
            side_of_edge.setdefault(key, []).append(3 * t + j)
    state = GluingState(len(tris))
    vertex_at = {}
    for t, (a, b, c) in enumerate(tris):
        vertex_at[3 * t + 0] = a
        vertex_at[3 * t + 1] = b
        vertex_at[3 * t + 2] = c
    for key, sides in sorted(side_of_edge.items()):
        if len(sides) != 2:
            raise InvalidInputError(f"edge {key} lies in {len(sides)} faces, needs exactly 2")
        s1, s2 = sides
        tail1 = vertex_at[_corner(s1, 0)]
        tail2 = vertex_at[_corner(s2, 0)]
        state._apply_inplace(GluingMove(a=s1, b=s2, flip=tail1 == tail2))
    return state


# -- stories -----------------------------------------------------------------------


@dataclass(frozen=True)
class GluingStory:
    f: int
    moves: tuple[GluingMove, ...]

    def __post_init__(self):
        if len(self.moves) != 3 * self.f // 2:
            raise InvalidInputError(f"a story on {self.f} triangles needs {3 * self.f // 2} moves")
        used = [s for m in self.moves for s in (m.a, m.b)]
        if sorted(used) != list(range(3 * self.f)):
            raise InvalidInputError("every triangle edge must appear in exactly one move")

    def to_json(self) -> str:
        return json.dumps({"f": self.f, "moves": [m.to_doc() for m in self.moves]})

    @classmethod
    def from_json(cls, text: str) -> "GluingStory":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"not valid JSON: {exc}") from exc
        return cls(f=doc["f"], moves=tuple(GluingMove.from_doc(m) for m in doc["moves"]))


@dataclass(frozen=True)
class StepRecord:
    index: int
    move: GluingMove
    move_type: str
    near: bool
    internal_delta: int
    potential: float
    loop_lengths: tuple[int, ...]
    degenerate: bool
    bound_ok: bool


@dataclass(frozen=True)
class StoryReport:
    f: int
    delta: float
    steps: tuple[StepRecord, ...]
    closed: bool
    surface: bool
    num_vertices: int
    num_components: int
    near_moves: int

    @property
    def degenerate_steps(self) -> int:
        return sum(1 for s in self.steps if s.degenerate)

    @property
    def degenerate_bound_failures(self) -> int:
        return sum(1 for s in self.steps if s.degenerate and not s.bound_ok)

    def to_json_lines(self) -> str:
        lines = []
        for s in self.steps:
            lines.append(
                json.dumps(
                    {
                        "step": s.index,
                        "move": s.move.to_doc(),
                        "type": s.move_type,
                        "near": s.near,
                        "potential": s.potential,
                        "loops": list(s.loop_lengths),
                        "degenerate": s.degenerate,
                        "bound_ok": s.bound_ok,
                    }
                )
            )
        lines.append(
            json.dumps(
                {
                    "final": True,
                    "closed": self.closed,
                    "surface": self.surface,
                    "vertices": self.num_vertices,
                    "components": self.num_components,
                    "near_moves": self.near_moves,
                }
            )
        )
        return "\n".join(lines)


def run_story(story: GluingStory, params: PotentialParams) -> StoryReport:
    """Apply a story step by step, verifying the potential along the way.

    Hard checks (PropertyViolationError): the starting potential is zero;
    B and C moves are 1-near; every nondegenerate near step raises the
    potential by at most 1 + delta and every nondegenerate far step does not
    raise it; the final potential equals vertices - components; vertices <=
    (1 + delta) * near_moves + components; and a story ending in a surface
    never passes a degenerate state.  Steps touching degenerate states
    (length-1 loops, self-loop edges) are outside the step bounds' scope:
    they are recorded with their bound outcome instead of raising.
    """
    state = GluingState(story.f)
    limit = params.near_limit
    prev = potential(state, params)
    if abs(prev) > _TOL:
        raise PropertyViolationError(f"initial potential {prev} != 0")
    steps = []
    near_count = 0
    pre_degenerate = has_degenerate_boundary(state)
    for k, move in enumerate(story.moves):
        move_type = state.classify_move(move.a, move.b)
        near = state.d_near(move.a, move.b, limit)
        if move_type in ("B", "C"):
            if not state.d_near(move.a, move.b, 1):
                raise PropertyViolationError("B/C moves share a vertex, so they must be 1-near")
            if not near:
                raise PropertyViolationError("B/C moves must be near for any limit >= 1")
        before_internal = state.internal_vertex_count()
        state = state.apply_gluing(move)
        boundary = len(state.boundary_sides())
        if boundary != 3 * story.f - 2 * (k + 1):
            raise PropertyViolationError("boundary edge count must be 3f - 2k")
        post_degenerate = has_degenerate_boundary(state)
        degenerate = pre_degenerate or post_degenerate
        cur = potential(state, params)
        allowed = prev + (1 + params.delta if near else 0.0) + _TOL
        bound_ok = cur <= allowed
        if not bound_ok and not degenerate:
            raise PropertyViolationError(
                f"step {k}: potential rose from {prev:.6f} to {cur:.6f} on a "
                f"nondegenerate {'near' if near else 'far'} {move_type} move"
            )
        if near:
            near_count += 1
        steps.append(
            StepRecord(
                index=k,
                move=move,
                move_type=move_type,
                near=near,
                internal_delta=state.internal_vertex_count() - before_internal,
                potential=cur,
                loop_lengths=tuple(sorted(len(l) for l in state.boundary_loops())),
                degenerate=degenerate,
                bound_ok=bound_ok,
            )
        )
        prev = cur
        pre_degenerate = post_degenerate
    vertices = state.num_vertices
    components = state.num_components
    if abs(prev - (vertices - components)) > _TOL:
        raise PropertyViolationError("final potential must equal vertices - components")
    if vertices > (1 + params.delta) * near_count + components + _TOL:
        raise PropertyViolationError(
            f"vertices {vertices} > (1+delta)*near {near_count} + components {components}"
        )
    surface = is_triangulated_surface(state)
    if surface and any(s.degenerate for s in steps):
        raise PropertyViolationError("a surface story passed through a degenerate state")
    return StoryReport(
        f=story.f,
        delta=params.delta,
        steps=tuple(steps),
        closed=state.is_closed,
        surface=surface,
        num_vertices=vertices,
        num_components=components,
        near_moves=near_count,
    )


def final_state(story: GluingStory) -> GluingState:
    state = GluingState(story.f)
    for move in story.moves:
        state._apply_inplace(move)
    return state


# -- canned stories ----------------------------------------------------------------


def tetrahedron_story(base: int = 0) -> list[GluingMove]:
    """Attach three triangles around a center, then close the hat."""
    o = 3 * base
    return [
        GluingMove(o + 0, o + 3, False),
        GluingMove(o + 1, o + 6, False),
        GluingMove(o + 2, o + 9, False),
        GluingMove(o + 4, o + 11, False),
        GluingMove(o + 5, o + 7, False),
        GluingMove(o + 8, o + 10, False),
    ]


def disjoint_tetrahedra_story(count: int) -> GluingStory:
    moves: list[GluingMove] = []
    for i in range(count):
        moves.extend(tetrahedron_story(base=4 * i))
    return GluingStory(f=4 * count, moves=tuple(moves))


def pillow_story() -> GluingStory:
    moves = (GluingMove(0, 3, True), GluingMove(1, 4, True), GluingMove(2, 5, True))
    return GluingStory(f=2, moves=moves)

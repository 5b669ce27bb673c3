"""Short 2-cycles in dense complexes via link-intersection graphs.

The chain of reasoning implemented here: a dense complex has many pairs of
faces sharing an edge, so some pair of vertices (a, b) has a rich common-link
graph; a rich graph contains a short cycle; suspending that cycle over the two
poles yields an explicit small 2-cycle.  Plus the general graph-girth
utilities those steps need.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .complex2 import Complex2
from .errors import InvalidInputError


class SimpleGraph:
    """Undirected graph on 0..n-1 with sorted adjacency lists.

    ``labels`` optionally maps the dense vertex ids back to some host naming
    (link-intersection graphs keep the host complex's vertex names there).
    """

    __slots__ = ("n", "adj", "labels")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), labels: Optional[Sequence[int]] = None):
        self.n = n
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InvalidInputError(f"loop edge at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u},{v}) out of range")
            adj[u].add(v)
            adj[v].add(u)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in adj)
        self.labels: tuple[int, ...] = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n:
            raise InvalidInputError("labels must cover every vertex")

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, edges={self.num_edges})"


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, combinations(range(n), 2))


def min_degree_subgraph(graph: SimpleGraph, d: int) -> SimpleGraph:
    """Maximal subgraph of minimum degree >= d, by iterative stripping."""
    alive = [True] * graph.n
    degree = [graph.degree(v) for v in range(graph.n)]
    stack = [v for v in range(graph.n) if degree[v] < d]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for w in graph.adj[v]:
            if alive[w]:
                degree[w] -= 1
                if degree[w] < d:
                    stack.append(w)
    kept = [v for v in range(graph.n) if alive[v]]
    relabel = {v: i for i, v in enumerate(kept)}
    edges = [(relabel[u], relabel[v]) for u, v in graph.edges() if alive[u] and alive[v]]
    return SimpleGraph(len(kept), edges, labels=[graph.labels[v] for v in kept])


def shortest_cycle(graph: SimpleGraph) -> Optional[list[int]]:
    """A shortest cycle as a vertex list, or None for forests.

    Deterministic: BFS roots ascend, neighbors ascend, and the first cycle of
    the winning length is kept.
    """
    best: Optional[list[int]] = None
    for root in range(graph.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and dist[u] >= len(best) // 2:
                break
            for w in graph.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w and parent[w] != u:
                    # non-tree edge: close the two root paths into a cycle
                    path_u = _path_to_root(parent, u)
                    path_w = _path_to_root(parent, w)
                    common = set(path_u) & set(path_w)
                    # strip the shared prefix above the lowest common ancestor
                    lca = next(x for x in path_u if x in common)
                    cycle = list(reversed(path_w[: path_w.index(lca) + 1])) + path_u[: path_u.index(lca)]
                    if len(set(cycle)) == len(cycle) and len(cycle) >= 3:
                        if best is None or len(cycle) < len(best):
                            best = cycle
    return best


def _path_to_root(parent: dict, v: int) -> list[int]:
    path = [v]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    return path


def graph_girth(graph: SimpleGraph) -> Optional[int]:
    cycle = shortest_cycle(graph)
    return None if cycle is None else len(cycle)


def moore_cycle_bound(beta: float) -> int:
    return 2 * math.ceil(1.0 / beta) + 1


def short_graph_cycle(graph: SimpleGraph, beta: float, host_n: int) -> list[int]:
    """Explicit cycle of length <= 2*ceil(1/beta) + 1 in a dense-enough graph.

    Hard preconditions: beta > 0 and fewer than host_n vertices.  The density
    condition (at least host_n^(1+beta) edges) guarantees such a cycle exists;
    when a short enough cycle is present anyway it is returned regardless, and
    the failure message records whether density held.
    """
    if beta <= 0:
        raise InvalidInputError("beta must be positive")
    if graph.n >= host_n:
        raise InvalidInputError(f"graph has {graph.n} vertices, needs fewer than {host_n}")
    bound = moore_cycle_bound(beta)
    cycle = shortest_cycle(graph)
    if cycle is not None and len(cycle) <= bound:
        return cycle
    threshold = host_n ** (1.0 + beta)
    if graph.num_edges + 1e-9 < threshold:
        raise InvalidInputError(
            f"no cycle of length <= {bound}, and the density precondition fails: "
            f"{graph.num_edges} edges < {host_n}^(1+{beta}) = {threshold:.2f}"
        )
    raise InvalidInputError(
        f"no cycle of length <= {bound} despite {graph.num_edges} >= {threshold:.2f} edges; "
        "input invariants are broken"
    )


# -- link machinery -------------------------------------------------------------


def link_intersection(X: Complex2, a: int, b: int) -> SimpleGraph:
    """Common-link graph of two vertices.

    Vertices are the common edge-neighbors of a and b; x and y are joined
    exactly when both faces {a,x,y} and {b,x,y} are present.
    """
    if a == b:
        raise InvalidInputError("link_intersection needs two distinct vertices")
    neigh_a = {v for u, v in X.edges if u == a} | {u for u, v in X.edges if v == a}
    neigh_b = {v for u, v in X.edges if u == b} | {u for u, v in X.edges if v == b}
    common = sorted((neigh_a & neigh_b) - {a, b})
    index = {v: i for i, v in enumerate(common)}
    edges = []
    for x, y in combinations(common, 2):
        if tuple(sorted((a, x, y))) in X.face_index and tuple(sorted((b, x, y))) in X.face_index:
            edges.append((index[x], index[y]))
    return SimpleGraph(len(common), edges, labels=common)


def edge_degrees(X: Complex2) -> list[int]:
    degree = [0] * X.num_edges
    for mask in X.face_edge_masks:
        m = mask
        while m:
            low = m & -m
            degree[low.bit_length() - 1] += 1
            m ^= low
    return degree


def edge_pair_count(X: Complex2) -> int:
    """Number of face pairs sharing an edge: sum over edges of C(deg, 2)."""
    return sum(d * (d - 1) // 2 for d in edge_degrees(X))


@dataclass(frozen=True)
class SuspensionCycle:
    poles: tuple[int, int]
    equator: tuple[int, ...]
    bits: int

    @property
    def weight(self) -> int:
        return self.bits.bit_count()


def find_suspension_cycle(X: Complex2) -> Optional[SuspensionCycle]:
    """Suspend a shortest cycle of the richest cyclic link-intersection graph.

    Pairs are scanned by descending edge count (lexicographic tiebreak); the
    first pair whose common-link graph contains a cycle wins.  None when every
    link-intersection graph is a forest.
    """
    ranked = []
    for a, b in combinations(range(X.n), 2):
        graph = link_intersection(X, a, b)
        if graph.num_edges > 0:
            ranked.append((-graph.num_edges, (a, b), graph))
    ranked.sort(key=lambda item: (item[0], item[1]))
    for _, (a, b), graph in ranked:
        cycle = shortest_cycle(graph)
        if cycle is None:
            continue
        equator = tuple(graph.labels[v] for v in cycle)
        faces = []
        for i in range(len(equator)):
            x, y = equator[i], equator[(i + 1) % len(equator)]
            faces.append(tuple(sorted((a, x, y))))
            faces.append(tuple(sorted((b, x, y))))
        bits = X.chain_from_faces(faces)
        assert X.is_cycle(bits)
        return SuspensionCycle(poles=(a, b), equator=equator, bits=bits)
    return None

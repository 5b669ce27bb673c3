"""Random 2-complexes with complete 1-skeleton and the large-girth construction.

The sampler draws each of the C(n,3) possible faces independently with
probability p from a counter-based Philox stream, so the decision for face i
is a pure function of (seed, i) and sampling is order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from .complex2 import Complex2, bit_indices
from .cycles import (
    DEFAULT_BUDGET,
    MinimalCycle,
    SearchBudget,
    enumerate_minimal_cycles,
    filling_area,
    minimalize_cycle,
)
from .errors import AttemptsExhaustedError, BudgetExceededError, InvalidInputError
from .gf2 import Gf2Elimination

SeedLike = Union[int, np.random.Generator]


@dataclass(frozen=True)
class ModelParams:
    """Derived parameters of the large-girth construction.

    p defaults to n^(alpha-1); delta = min((1-2a)/4, eps/(3(2-2a-eps)));
    the small-cycle search is confined to at most ceil(8/(1-2a)) + 1 vertices.
    """

    n: int
    alpha: float
    epsilon: float
    p: float
    delta: float
    small_vertex_limit: int

    @classmethod
    def create(cls, n: int, alpha: float, epsilon: float, p: Optional[float] = None) -> "ModelParams":
        if not 0 < alpha < 0.5:
            raise InvalidInputError("alpha must lie in (0, 1/2)")
        if epsilon <= 0:
            raise InvalidInputError("epsilon must be positive")
        if 2 * alpha + epsilon >= 1:
            raise InvalidInputError("need 2*alpha + epsilon < 1")
        if n < 3:
            raise InvalidInputError("n must be at least 3")
        if p is None:
            p = n ** (alpha - 1.0)
        if not 0 <= p <= 1:
            raise InvalidInputError("p must be a probability")
        delta = min((1 - 2 * alpha) / 4, epsilon / (3 * (2 - 2 * alpha - epsilon)))
        limit = math.ceil(8 / (1 - 2 * alpha)) + 1
        return cls(n=n, alpha=alpha, epsilon=epsilon, p=p, delta=delta, small_vertex_limit=limit)

    @property
    def near_distance(self) -> float:
        return 10.0 ** (1.0 / self.delta)

    @property
    def girth_target(self) -> float:
        return self.n ** (2 - 2 * self.alpha - self.epsilon)


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed < 0:
        raise InvalidInputError("seed must be nonnegative")
    return np.random.Generator(np.random.Philox(key=seed))


def derived_rng(seed: int, *path: int) -> np.random.Generator:
    """Independent substream for (seed, path): Philox jumped along the path."""
    bitgen = np.random.Philox(key=seed)
    for step in path:
        bitgen = bitgen.jumped(step + 1)
    return np.random.Generator(bitgen)


def random_complex(n: int, p: float, seed: SeedLike) -> Complex2:
    """Y(n, p): complete 1-skeleton, each face present independently with prob p."""
    if n < 3:
        raise InvalidInputError("n must be at least 3")
    if not 0 <= p <= 1:
        raise InvalidInputError("p must be a probability")
    rng = _rng(seed)
    triples = list(combinations(range(n), 3))
    uniforms = rng.random(len(triples))
    faces = [t for t, u in zip(triples, uniforms) if u < p]
    return Complex2(n, faces, extra_edges=combinations(range(n), 2))


def sample_induced(X: Complex2, k: int, seed: SeedLike) -> tuple[Complex2, tuple[int, ...]]:
    """Induced subcomplex on a uniformly random k-subset, relabeled densely.

    Returns the subcomplex plus the chosen old labels in new-label order.
    """
    if not 0 <= k <= X.n:
        raise InvalidInputError(f"k must lie in [0, {X.n}]")
    rng = _rng(seed)
    chosen = sorted(int(v) for v in rng.permutation(X.n)[:k])
    return X.induced(chosen)


def extract_small_cycle(
    X: Complex2,
    alpha: float,
    max_attempts: int,
    seed: int,
) -> MinimalCycle:
    """Find a small cycle by sampling induced subcomplexes on ~2 n^(1-alpha) vertices.

    A sample is accepted as soon as it has at least k^2/2 faces, which already
    forces a nonzero 2-cycle (a k-vertex complex has fewer than k^2/2 edges);
    the cycle is then minimalized and lifted back to X's labels.  The result
    has fewer than k^2/2 <= 4 n^(2-2*alpha) faces.
    """
    n = X.n
    if X.num_faces + 1e-9 < n ** (2 + alpha):
        raise InvalidInputError(f"need at least n^(2+alpha) = {n ** (2 + alpha):.1f} faces")
    k = min(n, math.ceil(2 * n ** (1 - alpha)))
    threshold = math.ceil(k * k / 2)
    for attempt in range(max_attempts):
        sub, mapping = sample_induced(X, k, derived_rng(seed, attempt))
        if sub.num_faces >= threshold:
            mc = minimalize_cycle(sub, sub.all_faces_chain())
            lifted = X.chain_from_faces(
                tuple(mapping[v] for v in face) for face in sub.faces_of_chain(mc.bits)
            )
            return MinimalCycle(
                bits=lifted,
                num_faces=mc.num_faces,
                num_vertices=mc.num_vertices,
                beta1=mc.beta1,
            )
    raise AttemptsExhaustedError(
        f"no induced subcomplex on {k} vertices reached {threshold} faces in {max_attempts} attempts"
    )


# -- barely-dense subcomplexes ---------------------------------------------------


@dataclass(frozen=True)
class BarelyDensePair:
    vertices: tuple[int, ...]
    faces: tuple[tuple[int, int, int], ...]

    @property
    def covered(self) -> bool:
        used = set()
        for f in self.faces:
            used.update(f)
        return used == set(self.vertices)


def enumerate_barely_dense(
    X: Complex2,
    max_vertices: int,
    max_pairs: int = 1_000_000,
) -> list[BarelyDensePair]:
    """All pairs (V, F) with |V| = v in [4, max_vertices] and F exactly 2v-4
    faces of X inside V.  Exhaustive; refuses to materialize more than
    ``max_pairs`` results.
    """
    if max_vertices < 4:
        raise InvalidInputError("max_vertices must be at least 4")
    out: list[BarelyDensePair] = []
    for v in range(4, max_vertices + 1):
        want = 2 * v - 4
        for vertices in combinations(range(X.n), v):
            mask = 0
            for u in vertices:
                mask |= 1 << u
            inside = [f for f, fm in zip(X.faces, X.face_vertex_masks) if fm & ~mask == 0]
            if len(inside) < want:
                continue
            if math.comb(len(inside), want) + len(out) > max_pairs:
                raise BudgetExceededError("too many barely-dense pairs to materialize")
            for chosen in combinations(inside, want):
                out.append(BarelyDensePair(vertices=vertices, faces=chosen))
    return out


def count_barely_dense(X: Complex2, max_vertices: int) -> int:
    """Number of barely-dense pairs, without materializing them."""
    if max_vertices < 4:
        raise InvalidInputError("max_vertices must be at least 4")
    total = 0
    for v in range(4, max_vertices + 1):
        want = 2 * v - 4
        for vertices in combinations(range(X.n), v):
            mask = 0
            for u in vertices:
                mask |= 1 << u
            inside = sum(1 for fm in X.face_vertex_masks if fm & ~mask == 0)
            if inside >= want:
                total += math.comb(inside, want)
    return total


def expected_barely_dense(n: int, p: float, max_vertices: int) -> float:
    """Exact expectation of the barely-dense pair count under Y(n, p)."""
    total = 0.0
    for v in range(4, max_vertices + 1):
        want = 2 * v - 4
        total += math.comb(n, v) * math.comb(math.comb(v, 3), want) * p**want
    return total


# -- the construction --------------------------------------------------------------


@dataclass(frozen=True)
class ConstructionReport:
    faces_before: int
    small_cycles_found: int
    faces_deleted: int
    small_vertex_limit: int
    residual_girth_floor: int
    barely_dense_count: Optional[int]
    barely_dense_max_vertices: Optional[int]


def construct_large_girth(
    params: ModelParams,
    seed: int,
    budget: SearchBudget = DEFAULT_BUDGET,
    barely_dense_max_vertices: Optional[int] = None,
) -> tuple[Complex2, ConstructionReport]:
    """Sample Y(n, p) and delete one face from every small minimal cycle.

    Every inclusion-minimal cycle on at most ``small_vertex_limit`` vertices is
    enumerated exhaustively; cycles are processed in lexicographic support
    order and lose their lowest-index face unless an earlier deletion already
    broke them.  The result is re-verified by an independent second
    enumeration before returning.
    """
    limit = params.small_vertex_limit
    Y = random_complex(params.n, params.p, seed)
    cycles = enumerate_minimal_cycles(Y, max_vertices=limit, budget=budget)
    cycles = sorted(cycles, key=lambda mc: mc.bits)
    deleted = 0
    removed_mask = 0
    for mc in cycles:
        if mc.bits & removed_mask:
            continue  # an earlier deletion already broke this cycle
        lowest = mc.bits & -mc.bits
        removed_mask |= lowest
        deleted += 1
    result = Y.without_faces(removed_mask) if removed_mask else Y

    leftovers = enumerate_minimal_cycles(result, max_vertices=limit, budget=budget)
    if leftovers:
        raise AssertionError("small cycles survived the construction; this is a bug")

    count = None
    if barely_dense_max_vertices is not None:
        count = count_barely_dense(Y, barely_dense_max_vertices)
    report = ConstructionReport(
        faces_before=Y.num_faces,
        small_cycles_found=len(cycles),
        faces_deleted=deleted,
        small_vertex_limit=limit,
        residual_girth_floor=2 * limit - 2,
        barely_dense_count=count,
        barely_dense_max_vertices=barely_dense_max_vertices,
    )
    return result, report


# -- filling experiment -------------------------------------------------------------


@dataclass(frozen=True)
class FillExperimentRow:
    seed: int
    n: int
    p: float
    num_faces: int
    area: Optional[int]
    small_filling_vertices: Optional[int]
    status: str


def _min_vertex_filling(
    X: Complex2,
    tau: int,
    marked: tuple[int, int, int],
    max_vertices: int,
    max_subsets: int,
) -> tuple[Optional[int], bool]:
    """Least v <= max_vertices such that tau bounds inside an induced complex
    on v vertices containing the marked ones.  Returns (v or None, completed).
    """
    rest = [u for u in range(X.n) if u not in marked]
    tried = 0
    for v in range(3, max_vertices + 1):
        for extra in combinations(rest, v - 3):
            tried += 1
            if tried > max_subsets:
                return None, False
            mask = 0
            for u in marked:
                mask |= 1 << u
            for u in extra:
                mask |= 1 << u
            rows = [m for m, fm in zip(X.face_edge_masks, X.face_vertex_masks) if fm & ~mask == 0]
            if not rows:
                continue
            if Gf2Elimination(rows).solve(tau) is not None:
                return v, True
    return None, True


def fill_experiment(
    params: ModelParams,
    seeds: Sequence[int],
    budget: SearchBudget = DEFAULT_BUDGET,
    max_small_filling_subsets: int = 100_000,
) -> list[FillExperimentRow]:
    """Per seed: sample Y(n, p) and fill the triangle on vertices {0, 1, 2}.

    Also reports the least vertex count of a small filling (at most the
    model's small_vertex_limit), when one exists.  Budget overruns are
    recorded per row, never fatal.
    """
    rows = []
    tau_triple = (0, 1, 2)
    for seed in seeds:
        Y = random_complex(params.n, params.p, seed)
        tau = Y.triangle_cycle(*tau_triple)
        status = "ok"
        area: Optional[int] = None
        small_v: Optional[int] = None
        try:
            result = filling_area(Y, tau, budget=budget)
            area = result.area
            if area is not None:
                small_v, completed = _min_vertex_filling(
                    Y, tau, tau_triple, params.small_vertex_limit, max_small_filling_subsets
                )
                if not completed:
                    status = "small-filling-budget"
        except BudgetExceededError:
            status = "budget"
        rows.append(
            FillExperimentRow(
                seed=seed,
                n=params.n,
                p=params.p,
                num_faces=Y.num_faces,
                area=area,
                small_filling_vertices=small_v,
                status=status,
            )
        )
    return rows

"""Exact 2-girth, inclusion-minimal 2-cycles, and filling areas.

All searches are exact or fail loudly: when the cycle space is small enough
the whole kernel (or coset) is enumerated; beyond that a systematic
increasing-cardinality search over a fully reduced kernel basis is used, and
if its node budget runs out a :class:`BudgetExceededError` is raised rather
than returning a heuristic answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .complex2 import Complex2, bit_indices, homology_ranks
from .errors import BudgetExceededError, InvalidInputError, NotACycleError
from .gf2 import Gf2Elimination, gf2_rank


@dataclass(frozen=True)
class SearchBudget:
    """Limits for the exact searches.

    full_enum_dim: enumerate the whole 2^d kernel space when d is at most this.
    max_nodes: node cap for the increasing-cardinality search beyond that.
    max_enum_dim: cap on the kernel dimension for full cycle enumeration.
    """

    full_enum_dim: int = 24
    max_nodes: int = 2_000_000
    max_enum_dim: int = 18


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class MinimalCycle:
    """An inclusion-minimal 2-cycle: its support bitset and shape data."""

    bits: int
    num_faces: int
    num_vertices: int
    beta1: int


@dataclass(frozen=True)
class FillResult:
    filler: Optional[int]
    area: Optional[int]


# -- cycle space ---------------------------------------------------------------


def cycle_core(X: Complex2, within: Optional[int] = None) -> int:
    """Faces that can participate in some 2-cycle inside ``within``.

    Iteratively peels faces containing an edge covered exactly once; every
    cycle of the complex is supported inside the result.
    """
    alive = list(bit_indices(within if within is not None else X.all_faces_chain()))
    alive_set = set(alive)
    edge_faces: dict[int, list[int]] = {}
    for i in alive:
        for e in bit_indices(X.face_edge_masks[i]):
            edge_faces.setdefault(e, []).append(i)
    edge_count = {e: len(fs) for e, fs in edge_faces.items()}
    stack = [e for e, c in edge_count.items() if c == 1]
    while stack:
        e = stack.pop()
        if edge_count.get(e) != 1:
            continue
        face = next(i for i in edge_faces[e] if i in alive_set)
        alive_set.remove(face)
        for e2 in bit_indices(X.face_edge_masks[face]):
            edge_count[e2] -= 1
            if edge_count[e2] == 1:
                stack.append(e2)
    bits = 0
    for i in alive_set:
        bits |= 1 << i
    return bits


def cycle_space_basis(X: Complex2, within: Optional[int] = None) -> list[int]:
    """Basis of the 2-cycle space as face bitsets (restricted to ``within``)."""
    face_ids = list(bit_indices(within if within is not None else X.all_faces_chain()))
    elim = Gf2Elimination(X.face_edge_masks[i] for i in face_ids)
    basis = []
    for combo in elim.kernel:
        bits = 0
        for pos in bit_indices(combo):
            bits |= 1 << face_ids[pos]
        basis.append(bits)
    return basis


def _lex_smaller_support(a: int, b: int) -> bool:
    """True when a's sorted face-index tuple precedes b's lexicographically."""
    if a == b:
        return False
    low = (a ^ b) & -(a ^ b)
    return bool(a & low)


def _min_weight_over_coset(
    basis: list[int],
    offset: int,
    exclude_zero: bool,
    budget: SearchBudget,
) -> Optional[tuple[int, int]]:
    """Minimum-weight element of offset + span(basis); ties broken by support.

    Returns (weight, chain) or None when the only element is an excluded zero.
    """
    d = len(basis)
    best: Optional[tuple[int, int]] = None

    def consider(chain: int) -> None:
        nonlocal best
        if exclude_zero and chain == 0:
            return
        w = chain.bit_count()
        if best is None or w < best[0] or (w == best[0] and _lex_smaller_support(chain, best[1])):
            best = (w, chain)

    if d <= budget.full_enum_dim:
        cur = offset
        consider(cur)
        for g in range(1, 1 << d):
            cur ^= basis[(g & -g).bit_length() - 1]
            consider(cur)
        return best

    # Systematic search: over a fully reduced basis, a combination of k basis
    # vectors has exactly k ones on the pivot columns, so its weight is at
    # least k - |offset restricted to pivots|.  Enumerating combinations by
    # increasing k therefore terminates with an exact answer.
    elim = Gf2Elimination(basis)
    reduced = elim.reduced_rows()
    pivot_mask = 0
    for p in elim.pivots():
        pivot_mask |= 1 << p
    offset_pivots = (offset & pivot_mask).bit_count()
    consider(offset)
    nodes = 0
    for k in range(1, d + 1):
        if best is not None and k - offset_pivots >= best[0]:
            return best
        for combo in combinations(range(d), k):
            nodes += 1
            if nodes > budget.max_nodes:
                raise BudgetExceededError(
                    f"minimum-weight search exceeded {budget.max_nodes} nodes at cardinality {k}"
                )
            chain = offset
            for i in combo:
                chain ^= reduced[i]
            consider(chain)
    return best


# -- girth ---------------------------------------------------------------------


def two_girth(X: Complex2, budget: SearchBudget = DEFAULT_BUDGET) -> Optional[int]:
    """Exact minimum face count of a nonzero 2-cycle; None when no cycle exists."""
    basis = cycle_space_basis(X, within=cycle_core(X))
    if not basis:
        return None
    found = _min_weight_over_coset(basis, 0, exclude_zero=True, budget=budget)
    assert found is not None
    return found[0]


# -- minimal cycles --------------------------------------------------------------


def is_inclusion_minimal(X: Complex2, bits: int) -> bool:
    """A nonzero cycle is minimal iff its support carries a 1-dimensional cycle space."""
    if bits == 0 or not X.is_cycle(bits):
        return False
    rows = [X.face_edge_masks[i] for i in bit_indices(bits)]
    return len(rows) - gf2_rank(rows) == 1


def _minimal_cycle_record(X: Complex2, bits: int) -> MinimalCycle:
    sub = X.support_subcomplex(bits)
    beta1 = homology_ranks(sub).beta1
    return MinimalCycle(
        bits=bits,
        num_faces=bits.bit_count(),
        num_vertices=sub.n,
        beta1=beta1,
    )


def enumerate_minimal_cycles(
    X: Complex2,
    max_faces: Optional[int] = None,
    max_vertices: Optional[int] = None,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> list[MinimalCycle]:
    """Every inclusion-minimal cycle within the bounds, each reported once.

    Enumerates the full cycle space of the peeled core and keeps the minimal
    elements, so the result is exhaustive whenever it returns at all.
    """
    basis = cycle_space_basis(X, within=cycle_core(X))
    d = len(basis)
    if d == 0:
        return []
    if d > budget.max_enum_dim:
        raise BudgetExceededError(
            f"cycle space has dimension {d} > {budget.max_enum_dim}; enumeration refused"
        )
    out = []
    cur = 0
    for g in range(1, 1 << d):
        cur ^= basis[(g & -g).bit_length() - 1]
        w = cur.bit_count()
        if max_faces is not None and w > max_faces:
            continue
        if max_vertices is not None and X.vertex_support_bits(cur).bit_count() > max_vertices:
            continue
        rows = [X.face_edge_masks[i] for i in bit_indices(cur)]
        if w - gf2_rank(rows) == 1:
            out.append(_minimal_cycle_record(X, cur))
    out.sort(key=lambda mc: (mc.num_faces, mc.bits))
    return out


def minimalize_cycle(X: Complex2, start: int) -> MinimalCycle:
    """Greedy support reduction to an inclusion-minimal cycle.

    Faces are dropped in descending index order whenever a nonzero cycle
    survives in the remaining support; removability is monotone under
    shrinking support, so one pass suffices.
    """

    def has_cycle(bits: int) -> bool:
        return gf2_has_more_rows_than_rank(X, bits)

    support = start
    if not has_cycle(support):
        raise InvalidInputError("no nonzero cycle within the starting support")
    for i in sorted(bit_indices(support), reverse=True):
        candidate = support & ~(1 << i)
        if has_cycle(candidate):
            support = candidate
    assert X.is_cycle(support)
    return _minimal_cycle_record(X, support)


def gf2_has_more_rows_than_rank(X: Complex2, bits: int) -> bool:
    from .gf2 import gf2_has_dependency

    return gf2_has_dependency(X.face_edge_masks[i] for i in bit_indices(bits))


# -- filling ---------------------------------------------------------------------


def filling_area(X: Complex2, tau: int, budget: SearchBudget = DEFAULT_BUDGET) -> FillResult:
    """Exact minimum weight of a 2-chain whose boundary is the 1-cycle tau."""
    if X.boundary_of_edges(tau) != 0:
        raise NotACycleError("tau is not a 1-cycle")
    elim = Gf2Elimination(X.face_edge_masks)
    base = elim.solve(tau)
    if base is None:
        return FillResult(filler=None, area=None)
    basis = list(elim.kernel)
    found = _min_weight_over_coset(basis, base, exclude_zero=False, budget=budget)
    assert found is not None
    weight, chain = found
    return FillResult(filler=chain, area=weight)


def wiener_fill_index(X: Complex2, budget: SearchBudget = DEFAULT_BUDGET) -> int:
    """Sum over all vertex triples of the squared triangle filling area.

    Requires a complete 1-skeleton; raises UnfillableError naming the first
    triple whose triangle bounds nothing.
    """
    from .errors import UnfillableError

    if not X.has_complete_skeleton:
        raise InvalidInputError("wiener_fill_index needs a complete 1-skeleton")
    elim = Gf2Elimination(X.face_edge_masks)
    basis = list(elim.kernel)
    total = 0
    for triple in combinations(range(X.n), 3):
        if triple in X.face_index:
            # a single face fills its own triangle; 1 is the global minimum
            total += 1
            continue
        tau = X.triangle_cycle(*triple)
        base = elim.solve(tau)
        if base is None:
            raise UnfillableError(triple)
        found = _min_weight_over_coset(basis, base, exclude_zero=False, budget=budget)
        assert found is not None
        total += found[0] ** 2
    return total

"""Exhaustive enumeration of closed gluings, surface census, automorphisms.

Enumeration is orderly: the least unmatched side is always the next domain,
paired with every remaining side under both orientations, so each complete
oriented matching is visited exactly once.  Surface-targeted pruning cuts a
branch as soon as a violation of simpliciality appears that no later gluing
can repair (degenerate face, duplicate face, self-edge, duplicated edge
class); soundness of the pruning is checked against unpruned runs in the
tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import BudgetExceededError, InvalidInputError, NotASurfaceError, PropertyViolationError
from .gluing import (
    GluingMove,
    GluingState,
    GluingStory,
    PotentialParams,
    _corner,
    is_triangulated_surface,
    loop_summary,
    potential_from_parts,
)

EXHAUSTIVE_F_LIMIT = 6


@dataclass
class EnumerationSummary:
    leaves: int = 0
    nodes: int = 0
    pruned: int = 0


def _simplicial_violation(state: GluingState) -> bool:
    """A condition that already rules out a simplicial final state.

    Only violations that persist under further identifications are reported:
    repeated corners in a face, duplicate face triples, an edge class with
    equal endpoints, and a matched (hence final) edge class whose endpoint
    pair collides with any other edge class.  Two parallel *boundary* edges
    are allowed: they may later be glued to each other.
    """
    find = state._corners.find
    triples = []
    for t in range(state.f):
        tri = (find(3 * t), find(3 * t + 1), find(3 * t + 2))
        if tri[0] == tri[1] or tri[0] == tri[2] or tri[1] == tri[2]:
            return True
        triples.append(tuple(sorted(tri)))
    if len(set(triples)) != len(triples):
        return True
    matched_pairs = set()
    boundary_pairs = []
    for s in range(3 * state.f):
        partner = state._partner[s]
        u, v = find(_corner(s, 0)), find(_corner(s, 1))
        if u == v:
            return True
        pair = (u, v) if u < v else (v, u)
        if partner == -1:
            boundary_pairs.append(pair)
        elif s < partner:
            if pair in matched_pairs:
                return True
            matched_pairs.add(pair)
    for pair in boundary_pairs:
        if pair in matched_pairs:
            return True
    return False


def enumerate_closed_gluings(
    f: int,
    visitor: Callable[[GluingState, list[GluingMove]], None],
    prune_to_surfaces: bool = False,
    reduce_fresh_symmetry: bool = False,
) -> EnumerationSummary:
    """Visit every complete oriented matching of the 3f sides exactly once.

    The visitor receives the live closed state plus the move list in
    canonical (least-unmatched-first) order; it must copy whatever it keeps.

    With ``reduce_fresh_symmetry`` a gluing into a completely untouched
    triangle is tried only for the least such triangle, side 0, flip False:
    any other choice differs by a relabeling of triangles and corners, so
    every isomorphism class is still reached.  That mode is only valid for
    census-style deduplication, never for counting matchings.
    """
    if f < 2 or f % 2:
        raise InvalidInputError("triangle count must be even and at least 2")
    state = GluingState(f)
    summary = EnumerationSummary()
    moves: list[GluingMove] = []
    unmatched_count = 3 * f
    partner = state._partner

    def is_fresh(t: int) -> bool:
        return partner[3 * t] == -1 and partner[3 * t + 1] == -1 and partner[3 * t + 2] == -1

    def rec() -> None:
        nonlocal unmatched_count
        if unmatched_count == 0:
            summary.leaves += 1
            visitor(state, moves)
            return
        a = next(s for s in range(3 * f) if partner[s] == -1)
        if reduce_fresh_symmetry:
            candidates = []
            fresh_done = False
            for b in range(a + 1, 3 * f):
                if partner[b] != -1:
                    continue
                if b // 3 != a // 3 and is_fresh(b // 3):
                    # all six gluings into any fresh triangle are equivalent
                    if not fresh_done:
                        candidates.append((b - b % 3, False))
                        fresh_done = True
                    continue
                candidates.append((b, False))
                candidates.append((b, True))
        else:
            candidates = [
                (b, flip)
                for b in range(a + 1, 3 * f)
                if partner[b] == -1
                for flip in (False, True)
            ]
        for b, flip in candidates:
            move = GluingMove(a, b, flip)
            token = state._apply_inplace(move)
            summary.nodes += 1
            if prune_to_surfaces and _simplicial_violation(state):
                summary.pruned += 1
            else:
                moves.append(move)
                unmatched_count -= 2
                rec()
                unmatched_count += 2
                moves.pop()
            state._undo(move, token)

    rec()
    return summary


# -- canonical forms ----------------------------------------------------------------


def _code_from_flag(state: GluingState, side: int, direction: int) -> tuple:
    """Deterministic breadth-first encoding rooted at a directed side.

    Faces are discovered across side partners; the record per face carries the
    relabeled vertex triple in entry orientation plus the discovery ids of its
    three neighbors, which pins down the whole gluing structure.
    """
    find = state._corners.find
    t0 = side // 3
    tail, head = _corner(side, 0), _corner(side, 1)
    if direction:
        tail, head = head, tail
    third = next(
        3 * t0 + j for j in range(3) if 3 * t0 + j not in (tail, head)
    )
    face_order = {t0: 0}
    oriented = {t0: (tail, head, third)}
    labels: dict[int, int] = {}
    queue = [t0]
    records = []
    qi = 0
    while qi < len(queue):
        t = queue[qi]
        qi += 1
        cx, cy, cz = oriented[t]
        triple = []
        for c in (cx, cy, cz):
            cls = find(c)
            if cls not in labels:
                labels[cls] = len(labels)
            triple.append(labels[cls])
        neighbor_ids = []
        for ca, cb in ((cx, cy), (cy, cz), (cz, cx)):
            s = _side_of_corners(t, ca, cb)
            p = state._partner[s]
            t2 = p // 3
            ia, ib = _image_corners(state, s, ca, cb)
            if t2 not in face_order:
                face_order[t2] = len(face_order)
                third2 = next(3 * t2 + j for j in range(3) if 3 * t2 + j not in (ia, ib))
                oriented[t2] = (ib, ia, third2)
                queue.append(t2)
            neighbor_ids.append(face_order[t2])
        records.append((tuple(triple), tuple(neighbor_ids)))
    return tuple(records)


def _side_of_corners(t: int, ca: int, cb: int) -> int:
    ja, jb = ca % 3, cb % 3
    if (ja + 1) % 3 == jb:
        return 3 * t + ja
    if (jb + 1) % 3 == ja:
        return 3 * t + jb
    raise AssertionError("corners do not span a side")


def _image_corners(state: GluingState, side: int, ca: int, cb: int) -> tuple[int, int]:
    """Images of the endpoints (ca, cb) of ``side`` under its gluing."""
    p = state._partner[side]
    if state._flip[side]:
        image = {_corner(side, 0): _corner(p, 0), _corner(side, 1): _corner(p, 1)}
    else:
        image = {_corner(side, 0): _corner(p, 1), _corner(side, 1): _corner(p, 0)}
    return image[ca], image[cb]


def pseudomanifold_code(state: GluingState) -> tuple:
    """Isomorphism-invariant canonical code of a connected closed state."""
    if not state.is_closed:
        raise InvalidInputError("canonical codes need a closed state")
    if not state.is_connected:
        raise InvalidInputError("canonical codes need a connected state")
    return min(
        _code_from_flag(state, side, direction)
        for side in range(3 * state.f)
        for direction in (0, 1)
    )


@dataclass(frozen=True)
class CanonicalSurface:
    num_faces: int
    num_vertices: int
    code: tuple
    euler: int


def canonical_form(state: GluingState) -> CanonicalSurface:
    if not state.is_closed or not is_triangulated_surface(state):
        raise NotASurfaceError("canonical_form needs a closed triangulated surface")
    if not state.is_connected:
        raise NotASurfaceError("canonical_form needs a connected surface")
    w = state.num_vertices
    return CanonicalSurface(
        num_faces=state.f,
        num_vertices=w,
        code=pseudomanifold_code(state),
        euler=w - state.f // 2,
    )


def automorphism_count(state: GluingState) -> int:
    """|Aut| of a connected closed surface as the number of flags whose
    rooted code equals the canonical one (the flag action of Aut is free).
    """
    if not is_triangulated_surface(state):
        raise NotASurfaceError("automorphism counting needs a triangulated surface")
    if not state.is_connected:
        raise NotASurfaceError("automorphism counting needs a connected surface")
    codes = [
        _code_from_flag(state, side, direction)
        for side in range(3 * state.f)
        for direction in (0, 1)
    ]
    best = min(codes)
    return sum(1 for c in codes if c == best)


# -- the census -------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusTable:
    entries: dict
    f_max: int
    mode: str
    stats: dict

    def count(self, f: int, w: int) -> int:
        return self.entries.get((f, w), 0)


def census_table(
    f_max: int,
    prune_to_surfaces: bool = True,
    reduce_symmetry: Optional[bool] = None,
    force: bool = False,
) -> CensusTable:
    """Counts of triangulated-surface isomorphism classes by (faces, vertices).

    Exhaustive for every even f <= f_max; refuses f_max beyond the supported
    exhaustive limit unless forced.
    """
    if f_max > EXHAUSTIVE_F_LIMIT and not force:
        raise BudgetExceededError(
            f"census beyond f = {EXHAUSTIVE_F_LIMIT} is not exhaustive at desk scale"
        )
    entries: dict = {}
    stats: dict = {}
    for f in range(2, f_max + 1, 2):
        codes: dict[int, set] = {}
        reduce = reduce_symmetry if reduce_symmetry is not None else (prune_to_surfaces and f >= 6)

        def visit(state: GluingState, moves) -> None:
            if not state.is_connected:
                return
            if not is_triangulated_surface(state):
                return
            codes.setdefault(state.num_vertices, set()).add(pseudomanifold_code(state))

        summary = enumerate_closed_gluings(
            f, visit, prune_to_surfaces=prune_to_surfaces, reduce_fresh_symmetry=reduce
        )
        stats[f] = {
            "leaves": summary.leaves,
            "nodes": summary.nodes,
            "pruned": summary.pruned,
            "reduced_symmetry": reduce,
        }
        for w, code_set in codes.items():
            entries[(f, w)] = len(code_set)
    mode = "pruned-exhaustive" if prune_to_surfaces else "exhaustive"
    return CensusTable(entries=entries, f_max=f_max, mode=mode, stats=stats)


def surfaces_from_labeled_complexes(max_vertices: int) -> dict:
    """Independent census oracle: enumerate labeled face sets directly.

    For each w <= max_vertices, every subset of the C(w,3) triples covering
    all w vertices is tested for being a closed connected surface; classes are
    deduplicated with the same canonical code.  Returns {(f, w): classes}.
    """
    from .gluing import state_from_surface

    out: dict = {}
    for w in range(4, max_vertices + 1):
        triples = list(combinations(range(w), 3))
        for f in range(4, 2 * w):
            if f % 2:
                continue
            if 3 * f % 2 or f // 2 + 2 < w:
                continue
            for chosen in combinations(triples, f):
                if not _covers_all(chosen, w):
                    continue
                if not _edges_doubly_covered(chosen):
                    continue
                state = state_from_surface(chosen)
                if not state.is_connected:
                    continue
                if not is_triangulated_surface(state):
                    continue
                out.setdefault((f, w), set()).add(pseudomanifold_code(state))
    return {key: len(codes) for key, codes in out.items()}


def _covers_all(faces, w: int) -> bool:
    used = set()
    for face in faces:
        used.update(face)
    return len(used) == w


def _edges_doubly_covered(faces) -> bool:
    counts: dict = {}
    for a, b, c in faces:
        for e in ((a, b), (a, c), (b, c)):
            counts[e] = counts.get(e, 0) + 1
    return all(v == 2 for v in counts.values())


def brute_force_automorphisms(state: GluingState) -> int:
    """Oracle: count vertex permutations preserving the face multiset."""
    triples = state.face_class_triples()
    classes = sorted({c for tri in triples for c in tri})
    relabel = {c: i for i, c in enumerate(classes)}
    faces = sorted(tuple(sorted(relabel[c] for c in tri)) for tri in triples)
    w = len(classes)
    count = 0
    for perm in permutations(range(w)):
        mapped = sorted(tuple(sorted(perm[v] for v in face)) for face in faces)
        if mapped == faces:
            count += 1
    return count


# -- orbit-stabilizer sweep ----------------------------------------------------------


@dataclass(frozen=True)
class OrbitStabilizerReport:
    f: int
    group_order: int
    orbit_size: int
    stabilizer_size: int
    automorphisms: int
    all_isomorphic: bool


def orbit_stabilizer_check(story: GluingStory) -> OrbitStabilizerReport:
    """Full sweep of the reorder x relabel group action on a story.

    Verifies orbit * stabilizer = (3f/2)! * f!, that the stabilizer injects
    into Aut(X), and that every orbit member builds an isomorphic result.
    """
    from .gluing import final_state

    f = story.f
    k = 3 * f // 2
    if f > 4:
        raise BudgetExceededError("orbit sweep only supported for f <= 4")
    base = tuple((m.a, m.b, m.flip) for m in story.moves)
    group_order = math.factorial(k) * math.factorial(f)
    orbit = set()
    stab = 0
    for order_perm in permutations(range(k)):
        reordered = tuple(base[order_perm[i]] for i in range(k))
        for tri_perm in permutations(range(f)):
            relabeled = tuple(
                (3 * tri_perm[a // 3] + a % 3, 3 * tri_perm[b // 3] + b % 3, flip)
                for a, b, flip in reordered
            )
            orbit.add(relabeled)
            if relabeled == base:
                stab += 1
    codes = set()
    for member in orbit:
        moves = tuple(GluingMove(a, b, flip) for a, b, flip in member)
        codes.add(pseudomanifold_code(final_state(GluingStory(f=f, moves=moves))))
    state = final_state(story)
    if is_triangulated_surface(state) and state.is_connected:
        auts = automorphism_count(state)
    else:
        # flag symmetries of a connected closed pseudomanifold, same counting
        codes_all = [
            _code_from_flag(state, side, direction)
            for side in range(3 * state.f)
            for direction in (0, 1)
        ]
        auts = sum(1 for c in codes_all if c == min(codes_all))
    report = OrbitStabilizerReport(
        f=f,
        group_order=group_order,
        orbit_size=len(orbit),
        stabilizer_size=stab,
        automorphisms=auts,
        all_isomorphic=len(codes) == 1,
    )
    if report.orbit_size * report.stabilizer_size != group_order:
        raise PropertyViolationError("orbit-stabilizer identity failed")
    return report


# -- sampling -------------------------------------------------------------------------


def sample_matching(f: int, rng: np.random.Generator) -> list[GluingMove]:
    """Uniform complete oriented matching via sequential random pairing."""
    unmatched = list(range(3 * f))
    moves = []
    while unmatched:
        a = unmatched.pop(0)
        b = unmatched.pop(int(rng.integers(0, len(unmatched))))
        moves.append(GluingMove(a, b, flip=bool(rng.integers(0, 2))))
    return moves


@dataclass(frozen=True)
class VertexSampleStats:
    f: int
    samples: int
    histogram: dict
    surface_count: int
    near_move_total: int


def sampled_vertex_statistics(
    f: int,
    samples: int,
    seed: int,
    params: PotentialParams,
) -> VertexSampleStats:
    """Uniformly sample closed gluings and histogram their vertex counts.

    Every sample is run through the step-by-step potential verifier, so a
    property violation aborts loudly.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    histogram: dict[int, int] = {}
    surfaces = 0
    near_total = 0
    from .gluing import run_story

    for _ in range(samples):
        moves = sample_matching(f, rng)
        report = run_story(GluingStory(f=f, moves=tuple(moves)), params)
        histogram[report.num_vertices] = histogram.get(report.num_vertices, 0) + 1
        if report.surface:
            surfaces += 1
        near_total += report.near_moves
    return VertexSampleStats(
        f=f,
        samples=samples,
        histogram=dict(sorted(histogram.items())),
        surface_count=surfaces,
        near_move_total=near_total,
    )


# -- exhaustive potential verification ------------------------------------------------


@dataclass
class PotentialVerification:
    f: int
    deltas: tuple[float, ...]
    stories: int = 0
    surface_stories: int = 0
    near_moves_checked: int = 0
    far_moves_checked: int = 0
    degenerate_steps: int = 0
    degenerate_bound_failures: int = 0


def verify_potential_exhaustive(f: int, deltas: Sequence[float] = (0.5, 0.2)) -> PotentialVerification:
    """Check the potential's step laws over every closed gluing of f triangles.

    Each complete matching is run as a story in canonical order; shared
    prefixes are verified once.  Checks per step and per delta: near moves
    raise the potential by at most 1 + delta, far moves never raise it; at
    the leaves the potential equals vertices - components and
    vertices <= (1 + delta) * near + components.  On surface leaves the
    internal-vertex increment of every step must equal its move type index
    and no step may have touched a degenerate state.  Steps at degenerate
    states (length-1 loops, self-loop edges) are outside the step bounds'
    scope: their failures are counted, not raised.  Everything else raises
    PropertyViolationError.
    """
    from .gluing import has_degenerate_boundary

    params_list = [PotentialParams(delta=d) for d in deltas]
    limits = [p.near_limit for p in params_list]
    result = PotentialVerification(f=f, deltas=tuple(deltas))
    state = GluingState(f)
    tol = 1e-9

    # per-depth stacks; index 0 describes the pristine state
    potentials = [[0.0] * len(params_list)]
    degenerate_state_stack = [False]
    near_stack: list[bool] = []
    type_delta_stack: list[tuple[str, int]] = []
    degenerate_step_stack: list[bool] = []

    def verify_and_push(move_type: str, near: bool, before_internal: int) -> None:
        internal = state.internal_vertex_count()
        closed = state.closed_component_count()
        loops = [v for v in loop_summary(state).values()]
        post_degenerate = has_degenerate_boundary(state)
        degenerate = degenerate_state_stack[-1] or post_degenerate
        prev = potentials[-1]
        cur = [potential_from_parts(internal, closed, loops, params) for params in params_list]
        for value, previous, params in zip(cur, prev, params_list):
            allowed = previous + ((1 + params.delta) if near else 0.0) + tol
            if value > allowed:
                if degenerate:
                    result.degenerate_bound_failures += 1
                else:
                    raise PropertyViolationError(
                        f"f={f} delta={params.delta}: potential {previous:.6f} -> {value:.6f} "
                        f"on a nondegenerate {'near' if near else 'far'} {move_type} move"
                    )
        if move_type in ("B", "C") and not near:
            raise PropertyViolationError("B/C moves must be near")
        if degenerate:
            result.degenerate_steps += 1
        potentials.append(cur)
        degenerate_state_stack.append(post_degenerate)
        near_stack.append(near)
        type_delta_stack.append((move_type, internal - before_internal))
        degenerate_step_stack.append(degenerate)
        if near:
            result.near_moves_checked += 1
        else:
            result.far_moves_checked += 1

    def pop() -> None:
        potentials.pop()
        degenerate_state_stack.pop()
        near_stack.pop()
        type_delta_stack.pop()
        degenerate_step_stack.pop()

    def at_leaf(st: GluingState) -> None:
        result.stories += 1
        vertices = st.num_vertices
        components = st.num_components
        near_count = sum(near_stack)
        for value, params in zip(potentials[-1], params_list):
            if abs(value - (vertices - components)) > tol:
                raise PropertyViolationError("final potential must equal V - H")
            if vertices > (1 + params.delta) * near_count + components + tol:
                raise PropertyViolationError("V <= (1+delta) N + H failed")
        if is_triangulated_surface(st):
            result.surface_stories += 1
            if any(degenerate_step_stack):
                raise PropertyViolationError("a surface story passed through a degenerate state")
            for move_type, delta_v in type_delta_stack:
                if delta_v != "ABC".index(move_type):
                    raise PropertyViolationError(
                        f"surface story with a {move_type} move creating {delta_v} vertices"
                    )

    # custom DFS mirroring enumerate_closed_gluings but with prefix checks
    def rec(unmatched_count: int) -> None:
        if unmatched_count == 0:
            at_leaf(state)
            return
        a = next(s for s in range(3 * f) if state._partner[s] == -1)
        for b in range(a + 1, 3 * f):
            if state._partner[b] != -1:
                continue
            for flip in (False, True):
                move = GluingMove(a, b, flip)
                move_type = state.classify_move(a, b)
                near = state.d_near(a, b, max(limits))
                if near and len(limits) > 1 and min(limits) < max(limits):
                    near_small = state.d_near(a, b, min(limits))
                    if near_small != near:
                        # distinct near classifications per delta never happen
                        # at desk scale (both limits exceed any chain length)
                        raise PropertyViolationError("inconsistent nearness between deltas")
                before_internal = state.internal_vertex_count()
                token = state._apply_inplace(move)
                verify_and_push(move_type, near, before_internal)
                rec(unmatched_count - 2)
                pop()
                state._undo(move, token)

    rec(3 * f)
    return result

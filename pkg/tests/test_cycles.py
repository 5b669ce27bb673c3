"""cycles: exact girth, minimal-cycle enumeration, filling areas."""

import math
from itertools import combinations

import numpy as np
import pytest

from girth2.complex2 import (
    Complex2,
    complete_2_skeleton,
    homology_ranks,
    tetrahedron_boundary,
    triangle_bipyramid,
)
from girth2.cycles import (
    SearchBudget,
    cycle_core,
    cycle_space_basis,
    enumerate_minimal_cycles,
    filling_area,
    is_inclusion_minimal,
    minimalize_cycle,
    two_girth,
    wiener_fill_index,
)
from girth2.errors import BudgetExceededError, InvalidInputError, NotACycleError, UnfillableError


def brute_force_cycles(X):
    """All nonzero 2-cycles by direct subset enumeration (<= 2^num_faces)."""
    out = []
    for bits in range(1, 1 << X.num_faces):
        if X.is_cycle(bits):
            out.append(bits)
    return out


def brute_force_minimal_cycles(X):
    cycles = brute_force_cycles(X)
    cycle_set = set(cycles)
    minimal = []
    for c in cycles:
        if not any(z != c and z & ~c == 0 for z in cycle_set):
            minimal.append(c)
    return sorted(minimal)


def random_complex_plain(n, p, seed):
    rng = np.random.default_rng(seed)
    faces = [f for f in combinations(range(n), 3) if rng.random() < p]
    return Complex2(n, faces, extra_edges=combinations(range(n), 2))


class TestTwoGirth:
    def test_tetrahedron(self):
        assert two_girth(tetrahedron_boundary()) == 4

    def test_delta6(self):
        assert two_girth(complete_2_skeleton(6)) == 4

    def test_no_faces(self):
        assert two_girth(Complex2(5, [])) is None

    def test_single_face(self):
        assert two_girth(Complex2(3, [(0, 1, 2)])) is None

    def test_agrees_with_enumeration(self):
        for seed in range(60):
            X = random_complex_plain(4 + seed % 5, 0.45, seed)
            cycles = brute_force_cycles(X) if X.num_faces <= 14 else None
            if cycles is None:
                continue
            expected = min((c.bit_count() for c in cycles), default=None)
            assert two_girth(X) == expected

    def test_systematic_path_matches_full_enumeration(self):
        # force the beyond-threshold strategy on a case small enough to verify
        X = complete_2_skeleton(6)
        tight = SearchBudget(full_enum_dim=2, max_nodes=500_000)
        assert two_girth(X, budget=tight) == two_girth(X)

    def test_budget_error(self):
        X = complete_2_skeleton(7)
        with pytest.raises(BudgetExceededError):
            two_girth(X, budget=SearchBudget(full_enum_dim=2, max_nodes=10))


class TestEnumerateMinimal:
    def test_delta5_catalog(self):
        # oracle: brute force over all 2^10 face subsets
        X = complete_2_skeleton(5)
        oracle = brute_force_minimal_cycles(X)
        all_cycles = brute_force_cycles(X)
        assert len(all_cycles) == 15
        assert sorted(c.bit_count() for c in oracle) == [4] * 5 + [6] * 10
        got = enumerate_minimal_cycles(X)
        assert sorted(mc.bits for mc in got) == oracle
        assert sorted(mc.num_faces for mc in got) == [4] * 5 + [6] * 10

    def test_tetrahedron(self):
        got = enumerate_minimal_cycles(tetrahedron_boundary())
        assert len(got) == 1
        assert got[0].num_faces == 4 and got[0].num_vertices == 4

    def test_agrees_with_brute_force_small(self):
        for seed in range(120):
            X = random_complex_plain(4 + seed % 6, 0.35, seed)
            if X.num_faces > 12:
                continue
            got = enumerate_minimal_cycles(X)
            assert sorted(mc.bits for mc in got) == brute_force_minimal_cycles(X)

    def test_max_faces_and_vertices_filters(self):
        X = complete_2_skeleton(5)
        only_small = enumerate_minimal_cycles(X, max_faces=4)
        assert len(only_small) == 5
        only_tetra = enumerate_minimal_cycles(X, max_vertices=4)
        assert len(only_tetra) == 5

    def test_range_euler_and_edge_laws(self):
        # Every minimal cycle satisfies sqrt(2f) <= v <= f/2 + 2, the Euler
        # identity v - e + f = 2 - beta1 on its support, and 2e <= 3f.
        checked = 0
        for seed in range(200):
            X = random_complex_plain(4 + seed % 7, 0.3, seed)
            try:
                cycles = enumerate_minimal_cycles(X)
            except BudgetExceededError:
                continue
            for mc in cycles:
                checked += 1
                f, v = mc.num_faces, mc.num_vertices
                assert math.sqrt(2 * f) <= v + 1e-9
                assert v <= f / 2 + 2
                sub = X.support_subcomplex(mc.bits)
                e = sub.num_edges
                assert v - e + f == 2 - mc.beta1
                assert 2 * e <= 3 * f
        assert checked > 50

    def test_girth_equals_min_enumerated_weight(self):
        for seed in range(40):
            X = random_complex_plain(5 + seed % 4, 0.35, seed)
            cycles = enumerate_minimal_cycles(X)
            g = two_girth(X)
            if not cycles:
                assert g is None
            else:
                assert g == min(mc.num_faces for mc in cycles)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            enumerate_minimal_cycles(complete_2_skeleton(8), budget=SearchBudget(max_enum_dim=4))


class TestMinimalize:
    def test_already_minimal(self):
        X = tetrahedron_boundary()
        mc = minimalize_cycle(X, X.all_faces_chain())
        assert mc.bits == X.all_faces_chain()

    def test_from_full_delta5(self):
        X = complete_2_skeleton(5)
        mc = minimalize_cycle(X, X.all_faces_chain())
        assert mc.num_faces in (4, 6)
        assert is_inclusion_minimal(X, mc.bits)
        assert mc.bits in set(brute_force_minimal_cycles(X))

    def test_single_face_errors(self):
        X = complete_2_skeleton(5)
        with pytest.raises(InvalidInputError):
            minimalize_cycle(X, 1)

    def test_deterministic(self):
        X = complete_2_skeleton(6)
        a = minimalize_cycle(X, X.all_faces_chain())
        b = minimalize_cycle(X, X.all_faces_chain())
        assert a == b


class TestFilling:
    def test_face_fills_itself(self):
        for n in range(4, 8):
            X = complete_2_skeleton(n)
            res = filling_area(X, X.triangle_cycle(0, 1, 2))
            assert res.area == 1
            assert X.faces_of_chain(res.filler) == [(0, 1, 2)]

    def test_tetrahedron_missing_face(self):
        X = Complex2(4, [(0, 1, 3), (0, 2, 3), (1, 2, 3)], extra_edges=[(0, 1), (0, 2), (1, 2)])
        res = filling_area(X, X.triangle_cycle(0, 1, 2))
        assert res.area == 3
        assert res.filler == X.all_faces_chain()

    def test_unfillable(self):
        X = Complex2(3, [], extra_edges=[(0, 1), (0, 2), (1, 2)])
        res = filling_area(X, X.triangle_cycle(0, 1, 2))
        assert res.area is None and res.filler is None

    def test_not_a_cycle(self):
        X = complete_2_skeleton(4)
        with pytest.raises(NotACycleError):
            filling_area(X, 1)

    def test_filler_plus_face_is_minimal_cycle(self):
        # adding the face spanned by tau to a minimal filler closes it into an
        # inclusion-minimal 2-cycle
        X = Complex2(4, [(0, 1, 3), (0, 2, 3), (1, 2, 3)], extra_edges=[(0, 1), (0, 2), (1, 2)])
        res = filling_area(X, X.triangle_cycle(0, 1, 2))
        Y = complete_2_skeleton(4)
        closed = Y.chain_from_faces(X.faces_of_chain(res.filler) + [(0, 1, 2)])
        assert is_inclusion_minimal(Y, closed)

    def test_area_bounded_by_face_count(self):
        for seed in range(80):
            X = random_complex_plain(5 + seed % 3, 0.4, seed)
            tau = X.triangle_cycle(0, 1, 2)
            res = filling_area(X, tau)
            if res.area is not None:
                assert res.area <= X.num_faces
                assert X.boundary_of_faces(res.filler) == tau


class TestWiener:
    def test_delta4(self):
        assert wiener_fill_index(complete_2_skeleton(4)) == 4

    def test_delta5(self):
        assert wiener_fill_index(complete_2_skeleton(5)) == 10

    def test_tetra_minus_face(self):
        X = Complex2(4, [(0, 1, 3), (0, 2, 3), (1, 2, 3)], extra_edges=[(0, 1), (0, 2), (1, 2)])
        assert wiener_fill_index(X) == 3 * 1 + 1 * 9

    def test_incomplete_skeleton_rejected(self):
        with pytest.raises(InvalidInputError):
            wiener_fill_index(Complex2(4, [(0, 1, 2)]))

    def test_unfillable_reports_triple(self):
        X = Complex2(4, [(0, 1, 2)], extra_edges=combinations(range(4), 2))
        with pytest.raises(UnfillableError) as err:
            wiener_fill_index(X)
        assert err.value.triple == (0, 1, 3)


class TestCore:
    def test_core_of_tetrahedron_is_everything(self):
        X = tetrahedron_boundary()
        assert cycle_core(X) == X.all_faces_chain()

    def test_core_peels_dangling_face(self):
        X = Complex2(5, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3), (0, 1, 4)])
        core = cycle_core(X)
        assert X.faces_of_chain(core) == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]

    def test_core_preserves_cycle_space(self):
        for seed in range(50):
            X = random_complex_plain(6, 0.3, seed)
            assert len(cycle_space_basis(X)) == len(cycle_space_basis(X, within=cycle_core(X)))
            assert len(cycle_space_basis(X)) == homology_ranks(X).dim_Z2

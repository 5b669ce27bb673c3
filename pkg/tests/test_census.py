"""census: enumeration, canonical forms, automorphisms, orbit sweeps, sampling."""

import math

import pytest

from girth2.complex2 import Complex2, octahedron, tetrahedron_boundary, triangle_bipyramid
from girth2.census import (
    automorphism_count,
    brute_force_automorphisms,
    canonical_form,
    census_table,
    enumerate_closed_gluings,
    orbit_stabilizer_check,
    pseudomanifold_code,
    sample_matching,
    sampled_vertex_statistics,
    surfaces_from_labeled_complexes,
    verify_potential_exhaustive,
)
from girth2.errors import BudgetExceededError, NotASurfaceError
from girth2.gluing import (
    GluingMove,
    GluingStory,
    PotentialParams,
    final_state,
    pillow_story,
    state_from_surface,
    tetrahedron_story,
)


def stacked_sphere_faces():
    """Tetrahedron with two stacked subdivisions: 8 faces on 6 vertices."""
    return [
        (0, 1, 3),
        (0, 2, 3),
        (1, 2, 3),
        (0, 2, 4),
        (1, 2, 4),
        (0, 1, 5),
        (0, 4, 5),
        (1, 4, 5),
    ]


class TestEnumeration:
    def test_f2_count(self):
        leaves = []
        summary = enumerate_closed_gluings(2, lambda s, m: leaves.append(1))
        assert summary.leaves == len(leaves) == 120

    def test_f2_count_identity(self):
        # 120 matchings x 3! orderings x 2^3 domain/range labelings
        assert 120 * math.factorial(3) * 2**3 == math.factorial(6) * 2**3 == 5760

    def test_f4_count(self):
        summary = enumerate_closed_gluings(4, lambda s, m: None)
        assert summary.leaves == math.factorial(12) // math.factorial(6) == 665280

    def test_visitor_sees_closed_states(self):
        def check(state, moves):
            assert state.is_closed
            assert len(moves) == 3

        enumerate_closed_gluings(2, check)

    def test_pruning_loses_no_surface(self):
        pruned_codes = set()
        plain_codes = set()

        def collect(codes):
            from girth2.gluing import is_triangulated_surface

            def visit(state, moves):
                if state.is_connected and is_triangulated_surface(state):
                    codes.add(pseudomanifold_code(state))

            return visit

        enumerate_closed_gluings(4, collect(plain_codes))
        enumerate_closed_gluings(4, collect(pruned_codes), prune_to_surfaces=True)
        assert pruned_codes == plain_codes

    def test_fresh_symmetry_reduction_loses_no_class(self):
        reduced = census_table(4, prune_to_surfaces=True, reduce_symmetry=True)
        plain = census_table(4, prune_to_surfaces=True, reduce_symmetry=False)
        assert reduced.entries == plain.entries


class TestCensus:
    def test_small_tables(self):
        table = census_table(6)
        assert table.count(4, 4) == 1
        assert table.count(6, 5) == 1
        assert all(f != 2 for (f, w) in table.entries)
        for (f, w), c in table.entries.items():
            assert c >= 0
            assert math.sqrt(2 * f) <= w <= f / 2 + 2
            assert (w - f // 2) % 2 == 0

    def test_matches_labeled_complex_oracle(self):
        table = census_table(6)
        oracle = surfaces_from_labeled_complexes(6)
        for key in set(table.entries) | set(oracle):
            f, w = key
            if f <= 6:
                assert table.entries.get(key, 0) == oracle.get(key, 0)

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            census_table(8)

    def test_oracle_finds_rp2(self):
        # sanity of the oracle itself: the 6-vertex projective plane appears
        oracle = surfaces_from_labeled_complexes(6)
        assert oracle[(10, 6)] == 1
        assert oracle[(8, 6)] == 2


class TestCanonicalForm:
    def test_same_surface_two_stories(self):
        story = GluingStory(f=4, moves=tuple(tetrahedron_story()))
        a = canonical_form(final_state(story))
        b = canonical_form(state_from_surface(tetrahedron_boundary().faces))
        assert a.code == b.code
        assert a.num_vertices == 4 and a.euler == 2

    def test_different_surfaces_different_codes(self):
        tetra = canonical_form(state_from_surface(tetrahedron_boundary().faces))
        bipyr = canonical_form(state_from_surface(triangle_bipyramid().faces))
        assert tetra.code != bipyr.code

    def test_two_six_vertex_spheres_differ(self):
        octa = canonical_form(state_from_surface(octahedron().faces))
        stacked = canonical_form(state_from_surface(stacked_sphere_faces()))
        assert octa.num_vertices == stacked.num_vertices == 6
        assert octa.code != stacked.code

    def test_code_invariant_under_relabeling(self):
        import itertools

        base = triangle_bipyramid().faces
        codes = set()
        for perm in itertools.permutations(range(5)):
            faces = [tuple(sorted(perm[v] for v in f)) for f in base]
            codes.add(canonical_form(state_from_surface(faces)).code)
        assert len(codes) == 1

    def test_code_equality_iff_isomorphic(self):
        # brute-force isomorphism oracle over all vertex bijections
        def isomorphic(faces_a, faces_b, w):
            import itertools

            set_b = set(tuple(sorted(f)) for f in faces_b)
            for perm in itertools.permutations(range(w)):
                mapped = {tuple(sorted(perm[v] for v in f)) for f in faces_a}
                if mapped == set_b:
                    return True
            return False

        surfaces = {
            "tetra": (tetrahedron_boundary().faces, 4),
            "bipyr": (triangle_bipyramid().faces, 5),
            "octa": (octahedron().faces, 6),
            "stacked": (stacked_sphere_faces(), 6),
        }
        for name_a, (faces_a, wa) in surfaces.items():
            for name_b, (faces_b, wb) in surfaces.items():
                code_a = canonical_form(state_from_surface(faces_a)).code
                code_b = canonical_form(state_from_surface(faces_b)).code
                if wa == wb:
                    assert (code_a == code_b) == isomorphic(faces_a, faces_b, wa)
                else:
                    assert code_a != code_b

    def test_rejects_non_surface(self):
        with pytest.raises(NotASurfaceError):
            canonical_form(final_state(pillow_story()))


class TestAutomorphisms:
    def test_flag_counts(self):
        assert automorphism_count(state_from_surface(tetrahedron_boundary().faces)) == 24
        assert automorphism_count(state_from_surface(triangle_bipyramid().faces)) == 12
        assert automorphism_count(state_from_surface(octahedron().faces)) == 48

    def test_six_f_bound(self):
        for faces, f in (
            (tetrahedron_boundary().faces, 4),
            (triangle_bipyramid().faces, 6),
            (octahedron().faces, 8),
            (stacked_sphere_faces(), 8),
        ):
            assert automorphism_count(state_from_surface(faces)) <= 6 * f

    def test_agrees_with_brute_force(self):
        for faces in (
            tetrahedron_boundary().faces,
            triangle_bipyramid().faces,
            octahedron().faces,
            stacked_sphere_faces(),
        ):
            state = state_from_surface(faces)
            assert automorphism_count(state) == brute_force_automorphisms(state)


class TestOrbitStabilizer:
    def test_tetrahedron_story(self):
        story = GluingStory(f=4, moves=tuple(tetrahedron_story()))
        report = orbit_stabilizer_check(story)
        assert report.group_order == math.factorial(6) * math.factorial(4) == 17280
        assert report.orbit_size * report.stabilizer_size == 17280
        assert report.stabilizer_size <= report.automorphisms == 24
        assert report.all_isomorphic

    def test_pillow_story(self):
        report = orbit_stabilizer_check(pillow_story())
        assert report.group_order == math.factorial(3) * math.factorial(2) == 12
        assert report.orbit_size * report.stabilizer_size == 12
        assert report.stabilizer_size >= 1
        assert report.all_isomorphic

    def test_group_too_large(self):
        from girth2.gluing import disjoint_tetrahedra_story

        with pytest.raises(BudgetExceededError):
            orbit_stabilizer_check(disjoint_tetrahedra_story(2))


class TestSampling:
    def test_sample_matching_is_complete(self):
        import numpy as np

        rng = np.random.Generator(np.random.Philox(key=1))
        for _ in range(50):
            moves = sample_matching(6, rng)
            used = sorted(s for m in moves for s in (m.a, m.b))
            assert used == list(range(18))

    def test_f2_sampling_matches_exhaustive(self):
        # exhaustive vertex-count distribution over the 120 matchings
        from collections import Counter

        exhaustive = Counter()

        def visit(state, moves):
            exhaustive[state.num_vertices] += 1

        enumerate_closed_gluings(2, visit)
        stats = sampled_vertex_statistics(2, 4000, seed=5, params=PotentialParams(delta=0.5))
        for w, count in exhaustive.items():
            expected = count / 120
            observed = stats.histogram.get(w, 0) / stats.samples
            sigma = math.sqrt(expected * (1 - expected) / stats.samples)
            assert abs(observed - expected) <= 5 * sigma

    def test_histogram_decays_beyond_mode(self):
        stats = sampled_vertex_statistics(8, 20000, seed=11, params=PotentialParams(delta=0.5))
        counts = [stats.histogram.get(w, 0) for w in range(1, max(stats.histogram) + 1)]
        mode = counts.index(max(counts))
        tail = counts[mode:]
        assert all(a > b for a, b in zip(tail, tail[1:]) if b > 0)
        assert all(a >= b for a, b in zip(tail, tail[1:]))


class TestPotentialVerification:
    def test_f2_exhaustive_clean(self):
        report = verify_potential_exhaustive(2)
        assert report.stories == 120
        assert report.degenerate_bound_failures == 0
        assert report.surface_stories == 0

    def test_counterexample_scope_is_degenerate_only(self):
        # a far merge of a length-1 loop into a length-2 loop raises the
        # boundary term; that configuration is degenerate and must be flagged
        from girth2.gluing import GluingState, has_degenerate_boundary

        state = GluingState(4)
        # fold triangle 0 onto itself: its remaining boundary edge is a
        # self-loop, a length-1 boundary component
        state._apply_inplace(GluingMove(0, 1, False))
        assert has_degenerate_boundary(state)

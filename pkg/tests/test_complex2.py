"""complex_core: boundary maps, homology ranks, parsing."""

import json
import math

import numpy as np
import pytest

from girth2.complex2 import (
    Complex2,
    boundary2,
    complete_2_skeleton,
    complex_to_dict,
    complex_to_json,
    euler_characteristic,
    homology_ranks,
    is_cycle2,
    octahedron,
    parse_complex,
    tetrahedron_boundary,
    triangle_bipyramid,
)
from girth2.errors import InvalidInputError
from girth2.gf2 import gf2_rank


def moebius_torus_7():
    """The 7-vertex torus: faces {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    faces = []
    for i in range(7):
        faces.append(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        faces.append(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return Complex2(7, faces)


def random_complex_plain(n, p, seed):
    """Independent test-side sampler (no girth2.random_model import)."""
    rng = np.random.default_rng(seed)
    from itertools import combinations

    faces = [f for f in combinations(range(n), 3) if rng.random() < p]
    return Complex2(n, faces, extra_edges=combinations(range(n), 2))


class TestBoundary:
    def test_single_face(self):
        X = complete_2_skeleton(4)
        c = X.chain_from_faces([(0, 1, 2)])
        assert X.edges_of_chain(boundary2(c, X)) == [(0, 1), (0, 2), (1, 2)]

    def test_tetrahedron_boundary_is_cycle(self):
        X = tetrahedron_boundary()
        assert boundary2(X.all_faces_chain(), X) == 0
        assert is_cycle2(X.all_faces_chain(), X)

    def test_empty_chain(self):
        X = tetrahedron_boundary()
        assert boundary2(0, X) == 0

    def test_single_face_not_cycle(self):
        X = tetrahedron_boundary()
        assert not is_cycle2(1, X)

    def test_two_tetrahedra_in_delta5(self):
        # XOR of the boundaries of tetrahedra {0,1,2,3} and {0,1,2,4}: face 012
        # cancels, leaving the 6-face bipyramid support, still a cycle.
        X = complete_2_skeleton(5)
        t1 = X.chain_from_faces([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
        t2 = X.chain_from_faces([(0, 1, 2), (0, 1, 4), (0, 2, 4), (1, 2, 4)])
        c = t1 ^ t2
        assert c.bit_count() == 6
        assert is_cycle2(c, X)

    def test_index_space_mismatch(self):
        X = tetrahedron_boundary()
        with pytest.raises(InvalidInputError):
            boundary2(1 << 10, X)

    def test_linearity(self):
        X = complete_2_skeleton(6)
        rng = np.random.default_rng(7)
        top = X.all_faces_chain()
        for _ in range(50):
            a = int(rng.integers(0, top + 1))
            b = int(rng.integers(0, top + 1))
            assert boundary2(a ^ b, X) == boundary2(a, X) ^ boundary2(b, X)

    def test_d1_after_d2_vanishes_over_random_complexes(self):
        for seed in range(1000):
            n = 4 + seed % 5
            X = random_complex_plain(n, 0.4, seed)
            if X.num_faces == 0:
                continue
            c = int(np.random.default_rng(seed ^ 0xBEEF).integers(1, 1 << X.num_faces))
            assert X.boundary_of_edges(X.boundary_of_faces(c)) == 0


class TestHomology:
    def test_tetrahedron(self):
        h = homology_ranks(tetrahedron_boundary())
        assert h.dim_H2 == 1
        assert h.beta0 == 1
        assert h.beta1 == 0

    def test_skeleton_cycle_dimension(self):
        # oracle: GF(2) rank of the boundary matrix, done right here
        for n in range(4, 9):
            X = complete_2_skeleton(n)
            rank = gf2_rank(X.face_edge_masks)
            assert homology_ranks(X).dim_Z2 == X.num_faces - rank
            assert homology_ranks(X).dim_Z2 == math.comb(n - 1, 3)

    def test_rank_plus_kernel_dimension(self):
        for seed in range(50):
            X = random_complex_plain(4 + seed % 6, 0.35, seed)
            h = homology_ranks(X)
            assert h.dim_Z2 + h.dim_B1 == X.num_faces

    def test_no_faces(self):
        X = Complex2(3, [])
        h = homology_ranks(X)
        assert h.dim_Z2 == 0
        assert h.beta0 == 3

    def test_torus(self):
        h = homology_ranks(moebius_torus_7())
        assert (h.beta0, h.beta1, h.beta2) == (1, 2, 1)


class TestEuler:
    def test_tetrahedron(self):
        assert euler_characteristic(tetrahedron_boundary()) == 2

    def test_octahedron(self):
        X = octahedron()
        assert (X.n, X.num_edges, X.num_faces) == (6, 12, 8)
        assert euler_characteristic(X) == 2

    def test_torus(self):
        X = moebius_torus_7()
        assert (X.n, X.num_edges, X.num_faces) == (7, 21, 14)
        assert euler_characteristic(X) == 0

    def test_support_only_variant(self):
        X = Complex2(10, [(0, 1, 2)])
        assert euler_characteristic(X) == 10 - 3 + 1
        assert euler_characteristic(X, support_only=True) == 3 - 3 + 1


class TestParse:
    def test_tetrahedron_roundtrip(self):
        text = '{"n":4, "faces":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}'
        X = parse_complex(text)
        assert X == tetrahedron_boundary()
        assert parse_complex(complex_to_json(X)) == X

    def test_edgeless(self):
        X = parse_complex('{"n":3, "faces":[]}')
        assert X.num_edges == 0 and X.num_faces == 0

    def test_vertex_out_of_range(self):
        with pytest.raises(InvalidInputError):
            parse_complex('{"n":2, "faces":[[0,1,2]]}')

    def test_duplicate_face(self):
        with pytest.raises(InvalidInputError):
            parse_complex('{"n":4, "faces":[[0,1,2],[2,1,0]]}')

    def test_malformed(self):
        with pytest.raises(InvalidInputError):
            parse_complex("{nope")
        with pytest.raises(InvalidInputError):
            parse_complex('{"faces": []}')

    def test_downward_closure_completed(self):
        X = parse_complex('{"n":4, "faces":[[0,1,2]]}')
        assert X.edges == ((0, 1), (0, 2), (1, 2))

    def test_extra_edges_survive_roundtrip(self):
        X = Complex2(4, [(0, 1, 2)], extra_edges=[(0, 3)])
        doc = complex_to_dict(X)
        assert doc["edges"] == [[0, 3]]
        assert parse_complex(json.dumps(doc)) == X


class TestDerivedComplexes:
    def test_induced_relabels(self):
        X = complete_2_skeleton(6)
        sub, mapping = X.induced([5, 1, 3])
        assert mapping == (1, 3, 5)
        assert sub.n == 3 and sub.num_faces == 1

    def test_without_faces_keeps_edges(self):
        X = complete_2_skeleton(4)
        Y = X.without_faces(1)
        assert Y.num_faces == 3
        assert Y.edges == X.edges

    def test_support_subcomplex(self):
        X = complete_2_skeleton(6)
        bits = X.chain_from_faces([(1, 3, 5)])
        sub = X.support_subcomplex(bits)
        assert (sub.n, sub.num_edges, sub.num_faces) == (3, 3, 1)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toric_index.cone_model import (
    ConeError,
    EdgeFrame,
    MomentCone,
    cone_over_polytope,
    cross_section,
    edges,
    example_N,
    faces,
    is_good,
    is_reeb_admissible,
    orthant,
    rays,
    strictly_convex,
    suggest_reeb,
    unit_simplex_cone,
    unit_square_cone,
)
from toric_index.exact_linalg import determinant, dot, smith_divisors
from toric_index.oracle import corpus

SQUARE_NORMALS = ((1, 0, 0), (0, 1, 0), (-1, 0, 1), (0, -1, 1))
CORPUS = corpus()


def test_construction_rejects_bad_normals():
    with pytest.raises(ConeError):
        MomentCone(2, ((2, 0), (0, 1)))
    with pytest.raises(ConeError):
        MomentCone(2, ((1, 0), (-1, 0), (0, 1)))
    with pytest.raises(ConeError):
        MomentCone(3, ((1, 0), (0, 1)))


def test_inadmissible_reeb_rejected_at_construction():
    with pytest.raises(ConeError):
        MomentCone(3, orthant(3).normals, (1, 1, -1))


class TestStrictConvexity:
    def test_orthant(self):
        assert strictly_convex(orthant(3))

    def test_missing_direction(self):
        assert not strictly_convex(MomentCone(3, ((1, 0, 0), (0, 1, 0))))

    def test_square(self):
        assert strictly_convex(MomentCone(3, SQUARE_NORMALS))


class TestFaces:
    @staticmethod
    def by_dim(fs):
        out = {}
        for s, d in fs:
            out.setdefault(d, []).append(s)
        return out

    def test_orthant(self):
        f = self.by_dim(faces(orthant(3)))
        assert len(f[2]) == 3 and len(f[1]) == 3

    def test_square_excludes_opposite_pairs(self):
        f = self.by_dim(faces(unit_square_cone()))
        assert len(f[2]) == 4 and len(f[1]) == 4
        assert (0, 2) not in f[1] and (1, 3) not in f[1]

    def test_half_space_rejected(self):
        with pytest.raises(ConeError):
            faces(MomentCone(3, ((1, 0, 0),)))


class TestGoodness:
    def test_orthant_good(self):
        assert is_good(orthant(3)).good

    def test_divisor_two_reported(self):
        rep = is_good(MomentCone(2, ((1, 0), (-1, 2))))
        assert not rep.good
        assert rep.divisor_failures[0]["divisor"] == 2
        assert rep.divisor_failures[0]["divisors"] == [1, 2]

    def test_N5_good(self):
        assert is_good(example_N(2, 1, 0)).good

    def test_redundant_normal_flagged(self):
        rep = is_good(MomentCone(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0))))
        assert not rep.minimal and rep.redundant_normals == [3]

    def test_non_simple_cone_flagged(self):
        # cone over a square pyramid: the apex ray lies on four facets
        pyramid = MomentCone(4, ((1, 0, 0, 0), (0, 1, 0, 0), (-1, 0, 0, 1), (0, -1, 0, 1), (0, 0, 1, 0)))
        rep = is_good(pyramid)
        assert not rep.good and not rep.face_count_ok
        assert {"facets": [0, 1, 2, 3], "codim": 3} in rep.face_count_failures

    def test_non_strictly_convex_not_good(self):
        rep = is_good(MomentCone(3, ((1, 0, 0), (0, 1, 0))))
        assert not rep.good and not rep.strictly_convex

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_corpus_good(self, name):
        assert is_good(CORPUS[name]).good

    def test_json_shape(self):
        js = is_good(MomentCone(2, ((1, 0), (-1, 2)))).to_json()
        assert js["good"] is False and js["axioms"]["faces_extend_to_basis"] is False


class TestReeb:
    def test_orthant(self):
        ok, cert = is_reeb_admissible(orthant(3), (1, 1, 1))
        assert ok and cert == (1, 1, 1)

    def test_square_certificate(self):
        ok, cert = is_reeb_admissible(MomentCone(3, SQUARE_NORMALS), (0, 0, 1))
        assert ok and cert == (Fraction(1, 2),) * 4

    def test_orthant_negative(self):
        assert is_reeb_admissible(orthant(3), (1, 1, -1)) == (False, None)

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_certificate_reconstructs_reeb(self, name):
        c = CORPUS[name]
        ok, cert = is_reeb_admissible(c, c.reeb)
        assert ok and all(a > 0 for a in cert)
        assert tuple(sum(a * v[i] for a, v in zip(cert, c.normals)) for i in range(c.dim)) == c.reeb

    @given(st.lists(st.integers(1, 5), min_size=4, max_size=4))
    def test_positive_combinations_admissible(self, coeffs):
        c = MomentCone(3, SQUARE_NORMALS)
        r = tuple(sum(a * v[i] for a, v in zip(coeffs, c.normals)) for i in range(3))
        assert is_reeb_admissible(c, r)[0]

    def test_boundary_vector_not_admissible(self):
        assert not is_reeb_admissible(orthant(3), (1, 1, 0))[0]


class TestEdges:
    def test_orthant_frames(self):
        frames = edges(orthant(3))
        assert sorted(fr.mu for fr in frames) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
        for fr in frames:
            k = fr.mu.index(1)
            assert sorted(fr.weights) == sorted(tuple(int(i == j) for i in range(3)) for j in range(3) if j != k)

    def test_square_rays(self):
        frames = edges(unit_square_cone())
        assert sorted(fr.mu for fr in frames) == [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]

    def test_square_first_edge(self):
        fr = next(f for f in edges(unit_square_cone()) if set(f.facet_indices) == {0, 1})
        assert fr.mu == (0, 0, 1)
        assert fr.weights == ((1, 0, 0), (0, 1, 0))
        assert fr.completion == (0, 0, 1)

    def test_needs_reeb(self):
        with pytest.raises(ConeError):
            edges(example_N(2, 1, 0))

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_frame_invariants(self, name):
        c = CORPUS[name]
        frames = edges(c)
        assert len(frames) == len([1 for _, d in faces(c) if d == 1])
        for fr in frames:
            basis = (fr.completion, *fr.normals)
            dual = (fr.mu, *fr.weights)
            assert determinant(basis) == 1
            assert [[dot(a, b) for b in basis] for a in dual] == [[int(i == j) for j in range(c.dim)] for i in range(c.dim)]
            assert all(dot(fr.mu, v) >= 0 for v in c.normals)
            assert fr.reeb_pairing == dot(fr.mu, c.reeb) > 0
            assert smith_divisors([fr.mu]) == [1]

    def test_wrong_orientation_rejected(self):
        fr = edges(orthant(3))[0]
        with pytest.raises(ConeError):
            fr.with_completion(tuple(-x for x in fr.completion))

    def test_alternate_completion_accepted(self):
        fr = edges(orthant(3))[0]
        alt = fr.with_completion(tuple(a + b for a, b in zip(fr.completion, fr.normals[0])))
        assert alt.mu == fr.mu and alt.weights != fr.weights


class TestCrossSection:
    def test_orthant_triangle(self):
        sp = cross_section(orthant(3))
        assert sorted(sp.vertices) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]

    def test_square_at_height_one(self):
        sp = cross_section(unit_square_cone())
        assert sorted(sp.vertices) == [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]
        k = sp.vertices.index((0, 0, 1))
        assert sorted(sp.vertex_edges[k]) == [(0, 1, 0), (1, 0, 0)]

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_section_invariants(self, name):
        c = CORPUS[name]
        sp = cross_section(c)
        assert len(sp.vertices) == len(edges(c))
        for v, ds in zip(sp.vertices, sp.vertex_edges):
            assert dot(v, c.reeb) == 1
            assert len(ds) == c.n and all(dot(d, c.reeb) == 0 for d in ds)
        for i in range(len(sp.vertices)):
            assert sp.vertex_to_edge(i).facet_indices == edges(c)[i].facet_indices


class TestConstructors:
    def test_square_lift(self):
        assert unit_square_cone().normals == SQUARE_NORMALS
        assert unit_square_cone().reeb == (0, 0, 1)

    def test_simplex_lift(self):
        assert unit_simplex_cone().normals == ((1, 0, 0), (0, 1, 0), (-1, -1, 1))

    def test_low_dimensional_polytope_rejected(self):
        with pytest.raises(ConeError):
            cone_over_polytope([(1,), (-1,)], [0, 1])
        with pytest.raises(ConeError):
            cone_over_polytope([], [])

    def test_N_examples(self):
        assert example_N(2, 1, 0).normals == ((1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1))
        assert example_N(2, 2, 1).normals == ((1, 0, 1), (-1, 1, 1), (0, 2, 1), (0, -1, 1))

    @pytest.mark.parametrize("args", [(2, 1, 2), (2, 0, 0), (1, 1, 0), (2, 1, -1)])
    def test_N_ranges(self, args):
        with pytest.raises(ConeError):
            example_N(*args)

    @pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
    def test_all_N_in_range_are_good(self, n, k):
        for m in range(k * n):
            c = example_N(n, k, m)
            assert is_good(c).good
            assert is_reeb_admissible(c, suggest_reeb(c))[0]

    def test_suggest_reeb_prefers_last_axis(self):
        assert suggest_reeb(example_N(2, 1, 0)) == (0, 0, 1)

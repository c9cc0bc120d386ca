import pytest
from hypothesis import given, strategies as st

from toric_index.cone_model import ConeError, MomentCone, edges, example_N, orthant, suggest_reeb, unit_square_cone
from toric_index.index_engine import (
    MINUS,
    PLUS,
    IndexTerm,
    PolarizingError,
    expand_term,
    index_window,
    localization_terms,
    multiplicity_lattice,
    multiplicity_localized,
    render_term,
)
from toric_index.lv_engine import LatticeWindow, section_model
from toric_index.oracle import corpus
from toric_index.polarization import find_polarizing

ORTHANT = orthant(3)
EPS = (1, 2, 4)
CORPUS = corpus()


def term_along(terms, mu):
    return next(t for t in terms if t.edge.mu == mu)


class TestLocalizationTerms:
    def test_edge_e3(self):
        t = term_along(localization_terms(ORTHANT, EPS), (0, 0, 1))
        assert t.epsilon_pairings == (-3, -2) and t.signs == (MINUS, MINUS)

    def test_edge_e1(self):
        t = term_along(localization_terms(ORTHANT, EPS), (1, 0, 0))
        assert t.epsilon_pairings == (1, 3) and t.signs == (PLUS, PLUS)

    def test_parallel_to_reeb_rejected(self):
        with pytest.raises(PolarizingError, match="edge 0"):
            localization_terms(ORTHANT, (1, 1, 1))

    def test_wrong_dimension(self):
        with pytest.raises(PolarizingError):
            localization_terms(ORTHANT, (1, 2))

    def test_inconsistent_signs_rejected(self):
        t = localization_terms(ORTHANT, EPS)[0]
        with pytest.raises(ValueError):
            IndexTerm(t.edge, (PLUS,) * 2, (-1, -1))


class TestExpansion:
    def test_minus_minus_term(self):
        t = term_along(localization_terms(ORTHANT, EPS), (0, 0, 1))
        assert t.sign == 1 and t.coefficient((0, 0, 5)) == 1

    def test_plus_plus_term(self):
        t = term_along(localization_terms(ORTHANT, EPS), (1, 0, 0))
        assert t.sign == 1 and t.coefficient((0, 0, 5)) == 0 and t.coefficient((7, 1, 1)) == 1

    def test_expand_matches_pointwise(self):
        w = LatticeWindow.cube(3, -2, 2)
        for t in localization_terms(ORTHANT, EPS):
            s = expand_term(t, w)
            assert all(s[x] == t.coefficient(x) for x in w.points())

    @given(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)), st.integers(1, 3))
    def test_twist_shifts_series(self, lam, mult):
        w = LatticeWindow.cube(3, -3, 3)
        for t in localization_terms(ORTHANT, EPS):
            tw = t.with_twist({lam: mult})
            for x in w.points():
                shifted = tuple(a - b for a, b in zip(x, lam))
                assert tw.coefficient(x) == mult * t.coefficient(shifted)

    def test_twist_dimension_checked(self):
        t = localization_terms(ORTHANT, EPS)[0]
        with pytest.raises(ValueError):
            t.with_twist({(1, 0): 1})


class TestMultiplicities:
    terms = localization_terms(ORTHANT, EPS)

    @pytest.mark.parametrize("mu,expected", [((0, 0, 0), 1), ((1, 1, 1), 1), ((1, 0, 0), 0)])
    def test_localized_orthant(self, mu, expected):
        assert multiplicity_localized(self.terms, mu) == expected

    @pytest.mark.parametrize("mu,expected", [((1, 1, 2), 1), ((0, 0, 0), 1), ((1, 1, 1), 0)])
    def test_lattice_square(self, mu, expected):
        assert multiplicity_lattice(unit_square_cone(), mu) == expected

    def test_lattice_needs_convexity(self):
        with pytest.raises(ConeError):
            multiplicity_lattice(MomentCone(3, ((1, 0, 0), (0, 1, 0))), (0, 0, 0))

    @pytest.mark.parametrize("dim", [3, 4, 5])
    def test_orthant_parity(self, dim):
        c = orthant(dim)
        terms = localization_terms(c, find_polarizing(section_model(c), 0))
        n = dim - 1
        assert multiplicity_localized(terms, (0,) * dim) == 1
        assert multiplicity_localized(terms, (1,) * dim) == (-1) ** n
        assert multiplicity_localized(terms, (-1,) * dim) == 1

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_localized_equals_lattice(self, name):
        c = CORPUS[name]
        w = LatticeWindow.cube(c.dim, -3, 3)
        eps = find_polarizing(section_model(c), 1)
        assert index_window(c, eps, w).equal

    @pytest.mark.parametrize("name", ["orthant3", "square", "N5_2_1"])
    def test_independent_of_eps(self, name):
        c = CORPUS[name]
        w = LatticeWindow.cube(c.dim, -3, 3)
        series = [index_window(c, find_polarizing(section_model(c), s), w, "localized") for s in range(5)]
        assert all(s == series[0] for s in series)

    def test_all_N_cones_small_window(self):
        for n, k in [(2, 1), (2, 2), (2, 3), (3, 1)]:
            for m in range(k * n):
                c = example_N(n, k, m)
                c = c.with_reeb(suggest_reeb(c))
                w = LatticeWindow.cube(c.dim, -2, 2)
                assert index_window(c, find_polarizing(section_model(c), 0), w).equal, (n, k, m)


class TestIndexWindow:
    def test_orthant_support(self):
        w = LatticeWindow.cube(3, -2, 2)
        cmp = index_window(ORTHANT, EPS, w)
        assert cmp.equal and cmp.first_mismatch is None
        expected = {x for x in w.points() if all(a > 0 for a in x) or all(a <= 0 for a in x)}
        assert set(cmp.lattice.coefficients) == expected

    def test_N5_square_window(self):
        c = example_N(2, 1, 0).with_reeb((0, 0, 1))
        w = LatticeWindow.cube(3, -4, 4)
        assert index_window(c, find_polarizing(section_model(c), 0), w).equal

    def test_json(self):
        js = index_window(ORTHANT, EPS, LatticeWindow.cube(3, -1, 1)).to_json()
        assert set(js) == {"localized", "lattice", "equal", "first_mismatch"}
        assert js["equal"] is True and js["first_mismatch"] is None

    def test_mismatch_reported(self):
        w = LatticeWindow.cube(3, -1, 1)
        terms = localization_terms(ORTHANT, EPS)[1:]
        loc = index_window(ORTHANT, EPS, w, "localized", terms=terms)
        lat = index_window(ORTHANT, EPS, w, "lattice")
        assert loc != lat and loc.first_mismatch(lat) is not None

    def test_twisted_both_rejected(self):
        terms = [t.with_twist({(1, 0, 1): 1}) for t in localization_terms(ORTHANT, EPS)]
        with pytest.raises(ValueError):
            index_window(ORTHANT, EPS, LatticeWindow.cube(3, -1, 1), "both", terms=terms)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            index_window(ORTHANT, EPS, LatticeWindow.cube(3, -1, 1), "symbolic")

    def test_window_dimension_checked(self):
        with pytest.raises(ValueError):
            index_window(ORTHANT, EPS, LatticeWindow.cube(2, -1, 1))


class TestRender:
    def test_orthant_term(self):
        t = term_along(localization_terms(ORTHANT, EPS), (0, 0, 1))
        assert render_term(t) == "(1 - t^-(1,0,0))^- (1 - t^-(0,1,0))^- δ(1 - t^(0,0,1))"

    def test_plus_signs(self):
        t = term_along(localization_terms(ORTHANT, EPS), (1, 0, 0))
        assert render_term(t).count(")^+") == 2

    def test_twisted_prefix(self):
        t = localization_terms(ORTHANT, EPS)[0].with_twist({(1, 0, 1): 2})
        assert render_term(t).startswith("χ = {(1,0,1): 2} ")

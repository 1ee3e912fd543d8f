from fractions import Fraction as F
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcohom.action import build_weight_matrix, theta_names
from qcohom.algebra import Polynomial, parse_polynomial
from qcohom.errors import InfiniteQuotientError, NonSymmetricError, NotRegularError, StructuralError
from qcohom.groebner import groebner_basis, is_groebner, normal_form, poincare_series, standard_monomials
from qcohom.ring import (
    character_sigma,
    circle_generators,
    full_relation,
    kernel_generators,
    ring_gens,
    ring_presentation,
)
from qcohom.symmetric import check_symmetric, elementary, substitute_elementary, symmetric_expand

from strategies import small_fraction

G2 = ring_gens(2)


def h_vector(r, xi, seed=0):
    """Betti numbers of the reduced space from its moment polytope.

    The polytope {p >= 0, sum p = 1, A p = xi} is simple at a regular xi; h_k
    counts vertices with k improving edges for a generic linear functional.
    """
    A = build_weight_matrix(r)
    M = np.vstack([np.ones(A.n), np.array(A.columns, dtype=float).T])
    rhs = np.concatenate([[1.0], np.array([float(x) for x in xi])])
    c = np.random.default_rng(seed).normal(size=A.n)
    dim = A.n - r - 1
    h = [0] * (dim + 1)
    for basis in combinations(range(A.n), r + 1):
        B = M[:, basis]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        x = np.linalg.solve(B, rhs)
        if np.any(x <= 1e-12):
            continue
        y = np.linalg.solve(B.T, c[list(basis)])
        down = sum(1 for j in range(A.n) if j not in basis and c[j] - y @ M[:, j] < 0)
        h[down] += 1
    return h


class TestGenerators:
    def test_two_qubit_coordinate_generators(self):
        gens = kernel_generators(build_weight_matrix(2))
        assert [g.label for g in gens] == ["Q+1", "Q-1", "Q+2", "Q-2"]
        assert gens[0].expanded == parse_polynomial("w^2 + 2*t1*w + t1^2 - t2^2", G2)
        assert gens[0].factored_text() == "(w + t2 + t1)(w - t2 + t1)"

    def test_three_qubit_generator_has_four_factors(self):
        gens = kernel_generators(build_weight_matrix(3))
        assert len(gens) == 6
        assert all(len(g.factors) == 4 and g.expanded.degree() == 4 for g in gens)

    def test_one_qubit(self):
        gens = kernel_generators(build_weight_matrix(1))
        assert [g.expanded.to_text() for g in gens] == ["w + t1", "w - t1"]

    @pytest.mark.parametrize("r", [2, 3])
    def test_generators_divide_the_full_relation(self, r):
        A = build_weight_matrix(r)
        pres = ring_presentation(r)
        assert pres.reduce(full_relation(A)).is_zero()
        for g in pres.generators + pres.circle_generators:
            assert pres.reduce(g.expanded).is_zero()

    def test_circle_sides_are_separated(self):
        A = build_weight_matrix(3)
        xi = (F(1, 7), F(1, 5), F(1, 3))
        level_ok = 0
        for g in circle_generators(A, xi):
            level = sum(a * x for a, x in zip(g.direction, xi))
            for j in range(1, A.n + 1):
                v = sum(a * c for a, c in zip(g.direction, A.vertex(j)))
                assert (v > level) == (j in g.columns)
            level_ok += 1
        assert level_ok > 0

    def test_singular_point_rejected(self):
        with pytest.raises(NotRegularError):
            circle_generators(build_weight_matrix(2), (F(1, 2), F(1, 2)))


class TestSymmetric:
    def test_two_qubit_sigma(self):
        A = build_weight_matrix(2)
        assert character_sigma(A, 1).is_zero()
        assert character_sigma(A, 2).to_text() == "-2*s1^2 + 4*s2"
        assert character_sigma(A, 3).is_zero()
        assert character_sigma(A, 4).to_text() == "s1^4 - 4*s2*s1^2"

    def test_three_qubit_sigma(self):
        A = build_weight_matrix(3)
        assert character_sigma(A, 2).to_text() == "-4*s1^2 + 8*s2"

    def test_non_symmetric_input(self):
        p = parse_polynomial("t1^2 + t2", ("t1", "t2"))
        with pytest.raises(NonSymmetricError) as exc:
            symmetric_expand(p, ("t1", "t2"))
        assert exc.value.transposition == ("t1", "t2")

    def test_missing_alphabet(self):
        with pytest.raises(StructuralError):
            symmetric_expand(parse_polynomial("t1", ("t1",)), ("t1", "t2"))

    def test_power_sum(self):
        g = ("t1", "t2", "t3")
        got = symmetric_expand(parse_polynomial("t1^2 + t2^2 + t3^2", g), g)
        assert got == parse_polynomial("s1^2 - 2*s2", ("s1", "s2", "s3"))

    def test_extra_generators_are_coefficients(self):
        g = ("t1", "t2", "w")
        got = symmetric_expand(parse_polynomial("w*t1 + w*t2 + t1*t2", g), ("t1", "t2"))
        assert got == parse_polynomial("w*s1 + s2", ("s1", "s2", "w"))

    @given(st.dictionaries(st.tuples(*[st.integers(0, 2)] * 3), small_fraction, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, coeffs):
        g = ("t1", "t2", "t3")
        q = Polynomial(("s1", "s2", "s3"), coeffs)
        p = substitute_elementary(q, g, g)
        check_symmetric(p, g)
        assert symmetric_expand(p, g) == q

    def test_elementary(self):
        g = ("t1", "t2", "t3")
        assert elementary(g, g, 2) == parse_polynomial("t1*t2 + t1*t3 + t2*t3", g)


class TestGroebner:
    def test_linear_ideal(self):
        basis = groebner_basis([parse_polynomial("w + t1", ("t1", "w")), parse_polynomial("w - t1", ("t1", "w"))])
        assert [b.to_text() for b in basis] == ["w", "t1"]

    def test_single_relation_has_infinite_quotient(self):
        basis = groebner_basis([parse_polynomial("w^2 - t1^2", ("t1", "w"))])
        with pytest.raises(InfiniteQuotientError):
            standard_monomials(basis)

    def test_empty_input(self):
        with pytest.raises(StructuralError):
            groebner_basis([])

    def test_two_qubit_basis(self):
        assert [g.to_text() for g in ring_presentation(2).groebner] == ["t2^2", "w + t2", "t1"]

    def test_coordinate_generators_alone_are_not_enough(self):
        pres = ring_presentation(2, coordinate_only=True)
        assert pres.poincare == ()
        # w = 0, t1 = 1, t2 = -1 is a common zero
        pt = {"t1": 1, "t2": -1, "w": 0}
        assert all(g.expanded.evaluate(pt) == 0 for g in pres.generators)

    @given(st.lists(st.dictionaries(st.tuples(*[st.integers(0, 2)] * 3), small_fraction, min_size=1, max_size=3),
                    min_size=1, max_size=3))
    @settings(max_examples=30, deadline=None)
    def test_buchberger_output(self, polys):
        gens = ("t1", "t2", "w")
        ps = [Polynomial(gens, d) for d in polys]
        ps = [p for p in ps if not p.is_zero()]
        if not ps:
            return
        basis = groebner_basis(ps)
        assert is_groebner(basis)
        for p in ps:
            assert normal_form(p, basis).is_zero()
        for b in basis:
            assert b.leading()[1] == 1

    @given(st.dictionaries(st.tuples(*[st.integers(0, 3)] * 3), small_fraction, max_size=5))
    @settings(max_examples=30, deadline=None)
    def test_normal_form_is_idempotent(self, coeffs):
        pres = RING2
        p = Polynomial(G2, coeffs)
        nf = pres.reduce(p)
        assert pres.reduce(nf) == nf
        assert pres.reduce(p - nf).is_zero()


RING2 = ring_presentation(2)


class TestPoincare:
    @pytest.mark.parametrize("r,want", [(1, [1]), (2, [1, 1]), (3, [1, 4, 4, 4, 1])])
    def test_series(self, r, want):
        assert list(ring_presentation(r).poincare) == want

    @pytest.mark.parametrize("xi", [(F(1, 7), F(1, 5), F(1, 3)), (F(-1, 9), F(2, 5), F(3, 4))])
    def test_matches_polytope_h_vector(self, xi):
        pres = ring_presentation(3, xi)
        assert list(pres.poincare) == h_vector(3, xi)

    def test_two_qubit_h_vector(self):
        assert h_vector(2, (F(1, 5), F(1, 3))) == [1, 1]

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_palindromic(self, r):
        p = list(ring_presentation(r).poincare)
        assert p == p[::-1]

    def test_series_of_a_finite_ideal(self):
        g = ("t1", "w")
        basis = groebner_basis([parse_polynomial("t1^2", g), parse_polynomial("w^3", g)])
        assert poincare_series(basis) == [1, 2, 2, 1]

    def test_json(self):
        data = RING2.to_json(sigma=True)
        assert data["poincare"] == [1, 1]
        assert data["sigma"]["w^2"] == "-2*s1^2 + 4*s2"
        assert [g["label"] for g in data["generators"]] == ["Q+1", "Q-1", "Q+2", "Q-2"]
        assert theta_names(2) == ("t1", "t2")

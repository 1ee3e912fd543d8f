"""Presentation of the cohomology ring of the reduced space.

H*(M_xi) = Q[t1..tr, w] / Q. For a circle with direction alpha, the fixed
points split by the sign of <alpha, vertex - xi>; the product of
(w + chi_j) over either side lies in Q. The coordinate circles give the 2r
generators listed by :func:`kernel_generators`; the remaining generic
circles contribute the products needed for a finite quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .action import WeightMatrix, build_weight_matrix, theta_names
from .algebra import Polynomial
from .errors import ConfigurationError, InfiniteQuotientError, StructuralError
from .groebner import groebner_basis, normal_form, poincare_series
from .symmetric import elementary_of, symmetric_expand
from .walls import enumerate_walls, locate_chamber


def ring_gens(r: int) -> tuple:
    return theta_names(r) + ("w",)


def characters(A: WeightMatrix) -> list:
    gens = ring_gens(A.r)
    return [Polynomial.linear(gens, dict(zip(theta_names(A.r), col))) for col in A.columns]


@dataclass(frozen=True)
class KernelGenerator:
    circle: int | None        # coordinate circle index, None for other directions
    side: int                 # +1 or -1
    columns: tuple            # fixed points on this side
    factors: tuple            # the linear forms w + chi_j
    expanded: Polynomial
    direction: tuple = ()

    @property
    def label(self) -> str:
        sign = "+" if self.side > 0 else "-"
        if self.circle is not None:
            return f"Q{sign}{self.circle}"
        return f"Q{sign}(" + ",".join(str(a) for a in self.direction) + ")"

    def factored_text(self) -> str:
        return "".join(f"({f.to_text()})" for f in self.factors)


def kernel_generators(A: WeightMatrix) -> list:
    gens = ring_gens(A.r)
    w = Polynomial.var(gens, "w")
    chis = characters(A)
    out = []
    for i in range(A.r):
        for side in (1, -1):
            js = tuple(j for j, col in enumerate(A.columns, start=1) if col[i] == side)
            factors = tuple(w + chis[j - 1] for j in js)
            expanded = Polynomial.one(gens)
            for f in factors:
                expanded = expanded * f
            direction = tuple(1 if k == i else 0 for k in range(A.r))
            out.append(KernelGenerator(i + 1, side, js, factors, expanded, direction))
    return out


def _product_generator(A: WeightMatrix, columns, direction, side) -> KernelGenerator:
    gens = ring_gens(A.r)
    w = Polynomial.var(gens, "w")
    chis = characters(A)
    factors = tuple(w + chis[j - 1] for j in columns)
    expanded = Polynomial.one(gens)
    for f in factors:
        expanded = expanded * f
    return KernelGenerator(None, side, tuple(columns), factors, expanded, tuple(direction))


def default_ring_point(r: int) -> tuple:
    """A fixed regular value used when no xi is given."""
    return tuple(Fraction(1, 2 * i + 1) for i in range(r, 0, -1))


def _separating_direction(points):
    """(direction, margin) maximizing min <a, p> over |a_i| <= 1, or None."""
    P = np.asarray(points, dtype=float)
    r = P.shape[1]
    cost = np.zeros(r + 1)
    cost[-1] = -1.0
    res = linprog(
        cost,
        A_ub=np.hstack([-P, np.ones((len(P), 1))]),
        b_ub=np.zeros(len(P)),
        bounds=[(-1, 1)] * r + [(None, 1)],
        method="highs",
    )
    if res.status != 0 or -res.fun <= 1e-9:
        return None
    return res.x[:r], -res.fun


def _certify(A: WeightMatrix, xi, plus: frozenset, approx, margin: float) -> tuple:
    """Exact integer direction realizing the split whose vertex values are all distinct.

    The LP direction is snapped to a grid of step 1/N with N >= 2r/margin,
    which keeps every vertex on its side, then scaled by M = 4 * 3^r and
    tilted by (1, 3, 9, ...). The tilt moves each vertex value by less than
    M, so sides are kept, and it separates equal values because base-3 digit
    vectors with entries in {0, +-2} never sum to zero.
    """
    r = A.r
    n_grid = int(np.ceil(2 * r / margin)) + 1
    mult = 4 * 3 ** r
    alpha = tuple(mult * round(float(a) * n_grid) + 3 ** k for k, a in enumerate(approx))
    vals = [sum(a * c for a, c in zip(alpha, col)) for col in A.columns]
    level = sum(a * x for a, x in zip(alpha, xi))
    ok = len(set(vals)) == len(vals) and all(
        v != level and (v > level) == (j in plus) for j, v in enumerate(vals, start=1)
    )
    if not ok:
        raise StructuralError(f"could not certify the split {sorted(plus)} exactly")
    g = reduce(gcd, (abs(a) for a in alpha))
    return tuple(a // g for a in alpha)


def circle_splits(A: WeightMatrix, xi: Sequence[Fraction]) -> list:
    """All ways a hyperplane through xi splits the vertices, each with a circle direction.

    Returns ``(plus_columns, direction)`` pairs; ``plus_columns`` holds the
    1-based indices with <direction, vertex> > <direction, xi>. A depth-first
    search fixes one vertex at a time and prunes with a margin LP; every
    reported direction is then verified in exact arithmetic.
    """
    xi = tuple(Fraction(x) for x in xi)
    shifted = [np.array([float(c - x) for c, x in zip(col, xi)]) for col in A.columns]
    found = []

    def dfs(k, signs):
        if signs:
            sol = _separating_direction([s * shifted[i] for i, s in enumerate(signs)])
            if sol is None:
                return
        if k == len(shifted):
            plus = frozenset(i + 1 for i, s in enumerate(signs) if s > 0)
            found.append((plus, _certify(A, xi, plus, *sol)))
            return
        for s in (1, -1):
            dfs(k + 1, signs + [s])

    dfs(0, [])
    return found


def circle_generators(A: WeightMatrix, xi: Sequence[Fraction]) -> list:
    """Products over the inclusion-minimal sides of all circle splits at xi."""
    xi = tuple(Fraction(x) for x in xi)
    locate_chamber(enumerate_walls(A), xi)
    splits = circle_splits(A, xi)
    sides = {}
    for plus, direction in splits:
        minus = frozenset(range(1, A.n + 1)) - plus
        sides.setdefault(plus, (direction, 1))
        sides.setdefault(minus, (tuple(-a for a in direction), -1))
    minimal = [U for U in sides if not any(V < U for V in sides)]
    minimal.sort(key=lambda U: (len(U), sorted(U)))
    return [_product_generator(A, sorted(U), *sides[U]) for U in minimal]


def full_relation(A: WeightMatrix) -> Polynomial:
    gens = ring_gens(A.r)
    w = Polynomial.var(gens, "w")
    out = Polynomial.one(gens)
    for chi in characters(A):
        out = out * (w + chi)
    return out


def character_sigma(A: WeightMatrix, k: int) -> Polynomial:
    """e_k(chi_1..chi_n) rewritten in the elementary symmetric s1..sr of the thetas."""
    e = elementary_of(characters(A), k).embed(theta_names(A.r))
    return symmetric_expand(e, theta_names(A.r))


def relation_sigma(A: WeightMatrix) -> list:
    """Coefficients of w^(n-k) in the full relation, k = 0..n, in terms of s1..sr."""
    return [(k, character_sigma(A, k)) for k in range(A.n + 1)]


@dataclass(frozen=True)
class RingPresentation:
    r: int
    xi: tuple
    variables: tuple
    generators: tuple         # the 2r coordinate-circle products
    circle_generators: tuple  # minimal products from all circle directions at xi
    groebner: tuple
    poincare: tuple

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self.groebner)

    def to_json(self, sigma: bool = False, A: WeightMatrix | None = None) -> dict:
        def entry(g):
            return {
                "label": g.label,
                "direction": list(g.direction),
                "side": "+" if g.side > 0 else "-",
                "factored": g.factored_text(),
                "expanded": g.expanded.to_text(),
            }

        data = {
            "qubits": self.r,
            "xi": [str(x) for x in self.xi],
            "variables": list(self.variables),
            "generators": [entry(g) for g in self.generators],
            "circle_generators": [entry(g) for g in self.circle_generators],
            "groebner": [g.to_text() for g in self.groebner],
            "poincare": list(self.poincare),
        }
        if sigma:
            A = build_weight_matrix(self.r) if A is None else A
            data["sigma"] = {f"w^{A.n - k}": s.to_text() for k, s in relation_sigma(A)}
        return data


def ring_presentation(r: int, xi: Sequence | None = None, coordinate_only: bool = False) -> RingPresentation:
    """Groebner basis and Poincare series of the quotient at the regular value xi.

    ``coordinate_only`` keeps just the 2r coordinate-circle generators; that
    ideal is not zero-dimensional for r >= 2, so the Poincare series is then
    left empty.
    """
    A = build_weight_matrix(r)
    xi = default_ring_point(r) if xi is None else tuple(Fraction(x) for x in xi)
    if len(xi) != r:
        raise ConfigurationError(f"xi has {len(xi)} coordinates, expected {r}")
    coords = kernel_generators(A)
    extra = [] if coordinate_only else circle_generators(A, xi)
    basis = groebner_basis([g.expanded for g in coords] + [g.expanded for g in extra])
    try:
        series = poincare_series(basis)
    except InfiniteQuotientError:
        if not coordinate_only:
            raise
        series = []
    return RingPresentation(r, xi, ring_gens(r), tuple(coords), tuple(extra), tuple(basis), tuple(series))

"""Iterated residues, cohomological pairings and Duistermaat-Heckman densities.

A pairing integrates ``eta^a * omega^b`` over the reduced space at xi. Each
dendrite path contributes an iterated residue of the restricted class over
the stage factors of its terminal fixed point; the paths are summed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Mapping, Sequence

from .action import (
    MAX_QUBITS,
    WeightMatrix,
    build_weight_matrix,
    fixed_point,
    stage_factors,
    theta_names,
)
from .algebra import Polynomial, RationalFunction, residue_at_zero
from .errors import ConfigurationError, DimensionError, NotRegularError, StructuralError
from .walls import (
    Chamber,
    DendriteCell,
    DendritePath,
    enumerate_walls,
    first_ray_crossings,
    locate_chamber,
    paths_for_cell,
    triangulation,
)

# above this many qubits the iterated residue is read off as a single
# coefficient instead of being expanded stage by stage
DIRECT_RESIDUE_FROM = 4


def xi_names(r: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, r + 1))


def dimension(r: int) -> int:
    """Complex dimension 2^r - (r + 1) of the reduced space."""
    return 2 ** r - (r + 1)


@dataclass(frozen=True)
class ClassSpec:
    a: int
    b: int

    def check(self, r: int) -> None:
        if self.a < 0 or self.b < 0:
            raise DimensionError(f"negative exponents in eta^{self.a} omega^{self.b}")
        m = dimension(r)
        if self.a + self.b != m:
            raise DimensionError(f"a + b = {self.a + self.b}, but the quotient has dimension {m}")


def _gens(r: int, symbolic: bool) -> tuple:
    return theta_names(r) + (xi_names(r) if symbolic else ())


def restrict_class(spec: ClassSpec, vertex: Sequence[int], xi=None, gens=None) -> Polynomial:
    """(-sum t_i)^a * (sum (alpha_i - xi_i) t_i)^b at the fixed point with this vertex.

    ``xi=None`` keeps xi symbolic as x1..xr.
    """
    r = len(vertex)
    spec.check(r)
    gens = _gens(r, xi is None) if gens is None else tuple(gens)
    ts = [Polynomial.var(gens, t) for t in theta_names(r)]
    eta = Polynomial.zero(gens)
    omega = Polynomial.zero(gens)
    for i in range(r):
        eta = eta - ts[i]
        if xi is None:
            coeff = Polynomial.constant(gens, vertex[i]) - Polynomial.var(gens, f"x{i + 1}")
        else:
            coeff = Polynomial.constant(gens, Fraction(vertex[i]) - Fraction(xi[i]))
        omega = omega + coeff * ts[i]
    return (eta ** spec.a) * (omega ** spec.b)


def path_contribution(path: DendritePath, restricted: Polynomial, factors, orientation: int = 1) -> Polynomial:
    """sign * res_{v_r} ( ... res_{v_1}(restricted / F_1) ... / F_r ).

    ``orientation`` is the product of polarization signs at the terminal
    fixed point; it turns the polarized stage factors back into the
    oriented Euler class.
    """
    f = RationalFunction(restricted)
    for axis, factor in zip(factors.order, factors.factors):
        f = residue_at_zero(f / factor, f"t{axis}")
    if not f.is_polynomial():
        raise StructuralError(f"iterated residue left a denominator: {f}")
    return f.to_polynomial() * (path.sign * orientation)


def _direct_contribution(path, spec, vertex, xi, factors, orientation, gens) -> Polynomial:
    # stage factors are monomials c_t * v_t^k_t, so the iterated residue is
    # the coefficient of prod v_t^(k_t - 1) divided by prod c_t
    r = len(vertex)
    target = [0] * r
    denom = Fraction(1)
    for axis, fac in zip(factors.order, factors.factors):
        (exps, c), = fac.terms.items()
        target[axis - 1] = exps[axis - 1] - 1
        denom *= c
    # coefficient of t^target in (-sum t)^a (sum beta_i t_i)^b
    if xi is None:
        beta = [Polynomial.constant(gens, vertex[i]) - Polynomial.var(gens, f"x{i + 1}") for i in range(r)]
    else:
        beta = [Polynomial.constant(gens, Fraction(vertex[i]) - Fraction(xi[i])) for i in range(r)]
    total = Polynomial.zero(gens)
    for split in _compositions(spec.a, r):
        rest = [t - s for t, s in zip(target, split)]
        if any(x < 0 for x in rest):
            continue
        term = Polynomial.constant(gens, (-1) ** spec.a * _multinomial(split) * _multinomial(rest))
        for i in range(r):
            if rest[i]:
                term = term * beta[i] ** rest[i]
        total = total + term
    return total * (Fraction(path.sign * orientation) / denom)


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for tail in _compositions(n - first, k - 1):
            yield (first,) + tail


def _multinomial(parts) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


@dataclass
class PairingResult:
    chamber: Chamber | None
    cell: DendriteCell
    value: Polynomial
    contributions: dict = field(default_factory=dict)   # fixed-point index -> Polynomial
    walls_hit: list = field(default_factory=list)

    def scalar(self) -> Fraction:
        return self.value.constant_value()


def cell_pairing(
    r: int,
    spec: ClassSpec,
    cell: DendriteCell,
    xi=None,
    A: WeightMatrix | None = None,
    direct: bool | None = None,
) -> tuple:
    """Sum over the two dendrite paths of ``cell``; returns (total, contributions)."""
    A = build_weight_matrix(r) if A is None else A
    spec.check(r)
    gens = _gens(r, xi is None)
    direct = r >= DIRECT_RESIDUE_FROM if direct is None else direct
    contributions = {}
    for path in paths_for_cell(A, cell):
        fp = fixed_point(A, path.terminal)
        factors = stage_factors(fp, cell.order, gens)
        if direct:
            value = _direct_contribution(path, spec, fp.vertex, xi, factors, fp.orientation, gens)
        else:
            value = path_contribution(path, restrict_class(spec, fp.vertex, xi, gens), factors, fp.orientation)
        contributions[path.terminal] = value.embed(xi_names(r)) if xi is None else value.embed(())
    total = sum(contributions.values(), Polynomial.zero(next(iter(contributions.values())).gens))
    return total, contributions


def pairing(
    r: int,
    spec: ClassSpec,
    xi: Sequence,
    symbolic: bool = False,
    A: WeightMatrix | None = None,
    strict: bool = False,
) -> PairingResult:
    """Pairing at a regular value xi.

    With ``symbolic`` the result is the polynomial in x1..xr valid on the
    cell containing xi. ``strict`` turns an interior wall on the first ray
    into an error; otherwise such walls are only reported.
    """
    if not 1 <= r <= MAX_QUBITS:
        raise ConfigurationError(f"number of qubits must be in 1..{MAX_QUBITS}")
    xi = tuple(Fraction(x) for x in xi)
    if len(xi) != r:
        raise ConfigurationError(f"xi has {len(xi)} coordinates, expected {r}")
    A = build_weight_matrix(r) if A is None else A
    walls = enumerate_walls(A)
    chamber = locate_chamber(walls, xi)
    hits = first_ray_crossings(walls, xi, chamber)
    if hits and strict:
        raise NotRegularError(
            "first ray crosses interior walls: " + "; ".join(w.describe() for w in hits)
        )
    total, contribs = cell_pairing(r, spec, chamber.cell, None if symbolic else xi, A)
    return PairingResult(chamber, chamber.cell, total, contribs, hits)


def all_cells(r: int) -> list:
    """Every residue order with the step signs of its first r-1 axes."""
    return [
        DendriteCell(order, signs)
        for order in permutations(range(1, r + 1))
        for signs in product((1, -1), repeat=r - 1)
    ]


def _simplex_integral(poly: Polynomial, vertices) -> Fraction:
    """Exact integral of poly over the simplex spanned by ``vertices``."""
    d = len(vertices) - 1
    lam = tuple(f"l{k}" for k in range(d + 1))
    ring = poly.gens + lam
    p = poly.embed(ring)
    mapping = {}
    for i, name in enumerate(poly.gens):
        mapping[name] = Polynomial.linear(ring, {lam[k]: vertices[k][i] for k in range(d + 1)})
    q = p.subs(mapping)
    # |det| of the edge vectors gives d! * volume
    edges = [[vertices[k][i] - vertices[0][i] for i in range(d)] for k in range(1, d + 1)]
    scale = abs(_det(edges))
    offset = len(poly.gens)
    total = Fraction(0)
    for exps, c in q.terms.items():
        alpha = exps[offset:]
        num = 1
        for a in alpha:
            num *= factorial(a)
        total += c * Fraction(num, factorial(sum(alpha) + d))
    return total * scale


def _det(m) -> Fraction:
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


class PiecewiseDensity:
    """Polynomial pieces over the cells of the cube, keyed by cell key."""

    def __init__(self, r: int, pieces: Mapping[str, Polynomial], scale: Fraction = Fraction(1)):
        self.r = r
        self.pieces = dict(pieces)
        self.scale = Fraction(scale)
        self._total = None

    def cell_of(self, order, signs) -> str:
        return DendriteCell(tuple(order), tuple(signs[: self.r - 1])).key()

    def locate(self, point) -> str:
        from .walls import dendrite_cell
        return dendrite_cell(point, strict=False).key()

    def piece(self, key: str) -> Polynomial:
        return self.pieces[key]

    def __call__(self, point) -> Fraction:
        point = tuple(Fraction(x) for x in point)
        if len(point) != self.r:
            raise StructuralError(f"point has {len(point)} coordinates, expected {self.r}")
        poly = self.pieces[self.locate(point)]
        return poly.evaluate(dict(zip(xi_names(self.r), point)))

    def integral(self) -> Fraction:
        if self._total is None:
            total = Fraction(0)
            for order, signs, verts in triangulation(self.r):
                total += _simplex_integral(self.pieces[self.cell_of(order, signs)], verts)
            self._total = total
        return self._total

    @property
    def is_normalized(self) -> bool:
        return self.integral() == 1

    def normalized(self) -> PiecewiseDensity:
        total = self.integral()
        if total == 0:
            raise StructuralError("density integrates to zero")
        c = 1 / total
        return PiecewiseDensity(self.r, {k: p * c for k, p in self.pieces.items()}, self.scale * c)

    def slice_zero(self, axis: int) -> SliceDensity:
        return SliceDensity(self, axis)

    def to_json(self) -> dict:
        return {
            "qubits": self.r,
            "variables": list(xi_names(self.r)),
            "normalized": self.is_normalized,
            "pieces": {k: self.pieces[k].to_text() for k in sorted(self.pieces)},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> PiecewiseDensity:
        from .algebra import parse_polynomial
        r = int(data["qubits"])
        names = xi_names(r)
        pieces = {k: parse_polynomial(v, names) for k, v in data["pieces"].items()}
        missing = {c.key() for c in all_cells(r)} - set(pieces)
        if missing:
            raise ConfigurationError(f"density is missing cells {sorted(missing)[:3]}")
        return cls(r, pieces)


class SliceDensity:
    """The restriction of a density to the hyperplane x_axis = 0, renormalized on the (r-1)-cube."""

    def __init__(self, parent: PiecewiseDensity, axis: int):
        if not 1 <= axis <= parent.r or parent.r < 2:
            raise ConfigurationError(f"cannot slice {parent.r}-qubit density along axis {axis}")
        self.parent = parent
        self.axis = axis
        self.r = parent.r - 1
        names = xi_names(parent.r)
        self.names = tuple(n for n in names if n != f"x{axis}")
        self._norm = None

    def _lift(self, point):
        pt = list(point)
        pt.insert(self.axis - 1, Fraction(0))
        return pt

    def _restricted(self, key: str) -> Polynomial:
        poly = self.parent.pieces[key].subs({f"x{self.axis}": 0})
        return poly.embed(self.names)

    def raw(self, point) -> Fraction:
        return self.parent(self._lift(point))

    def normalizer(self) -> Fraction:
        if self._norm is None:
            total = Fraction(0)
            for order, signs, verts in triangulation(self.r):
                centre = [sum(v[i] for v in verts) / len(verts) for i in range(self.r)]
                key = self.parent.locate(self._lift(centre))
                total += _simplex_integral(self._restricted(key), verts)
            if total == 0:
                raise StructuralError("slice integrates to zero")
            self._norm = total
        return self._norm

    def __call__(self, point) -> Fraction:
        return self.raw(point) / self.normalizer()


def dh_density(r: int, normalize: bool = False, A: WeightMatrix | None = None) -> PiecewiseDensity:
    """The pairing with a = 0, b = m on every cell, as polynomials in x1..xr."""
    if not 1 <= r <= MAX_QUBITS:
        raise ConfigurationError(f"number of qubits must be in 1..{MAX_QUBITS}")
    spec = ClassSpec(0, dimension(r))
    pieces = {}
    for cell in all_cells(r):
        pieces[cell.key()] = cell_pairing(r, spec, cell, None, A)[0]
    dens = PiecewiseDensity(r, pieces)
    return dens.normalized() if normalize else dens

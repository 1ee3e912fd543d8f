"""The r-qubit torus action on P^(2^r - 1): weights, fixed points, Euler factors.

Axes and fixed points are numbered from 1, matching the names ``t1..tr``
and ``p1..pN`` used in reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import Polynomial
from .errors import ConfigurationError, DegenerateStageError, NonGenericError, StructuralError

MAX_QUBITS = 6


def theta_names(r: int) -> tuple:
    return tuple(f"t{i}" for i in range(1, r + 1))


@dataclass(frozen=True)
class WeightMatrix:
    r: int
    columns: tuple

    def __post_init__(self):
        if len(set(self.columns)) != 2 ** self.r or len(self.columns) != 2 ** self.r:
            raise StructuralError("every sign pattern must appear exactly once")
        if any(len(c) != self.r or any(a not in (1, -1) for a in c) for c in self.columns):
            raise StructuralError("entries must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.columns)

    def vertex(self, j: int) -> tuple:
        if not 1 <= j <= self.n:
            raise ConfigurationError(f"fixed point index {j} outside 1..{self.n}")
        return self.columns[j - 1]

    def index_of(self, vertex: Sequence[int]) -> int:
        return self.columns.index(tuple(vertex)) + 1

    def rows(self) -> list:
        return [[c[i] for c in self.columns] for i in range(self.r)]

    def permuted(self, perm: Sequence[int]) -> WeightMatrix:
        """Reorder columns: new column k is old column perm[k] (0-based)."""
        return WeightMatrix(self.r, tuple(self.columns[p] for p in perm))


def _column_key(col):
    r = len(col)
    bits = sum(1 << i for i in range(r) if col[r - 1 - i] == -1)
    return (col.count(-1), bits)


def build_weight_matrix(r: int) -> WeightMatrix:
    if not isinstance(r, int) or not 1 <= r <= MAX_QUBITS:
        raise ConfigurationError(f"number of qubits must be in 1..{MAX_QUBITS}, got {r!r}")
    cols = sorted(product((1, -1), repeat=r), key=_column_key)
    return WeightMatrix(r, tuple(cols))


@dataclass(frozen=True)
class Weight:
    coeffs: tuple

    def pair(self, gamma: Sequence[int]) -> int:
        return sum(a * g for a, g in zip(self.coeffs, gamma))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coeffs))

    def as_polynomial(self, gens) -> Polynomial:
        return Polynomial.linear(gens, dict(zip(theta_names(len(self.coeffs)), self.coeffs)))


@dataclass(frozen=True)
class PolarizedWeight:
    weight: Weight
    epsilon: int

    @property
    def coeffs(self) -> tuple:
        return tuple(self.epsilon * a for a in self.weight.coeffs)


@dataclass(frozen=True)
class FixedPointData:
    index: int
    vertex: tuple
    others: tuple       # column index l of each weight, same order as weights
    weights: tuple
    polarized: tuple

    @property
    def orientation(self) -> int:
        """Product of the polarization signs."""
        s = 1
        for pw in self.polarized:
            s *= pw.epsilon
        return s


@dataclass(frozen=True)
class StageFactors:
    order: tuple        # residue variables as axis numbers, first residue first
    assignment: tuple   # per stage, positions into FixedPointData.polarized
    factors: tuple      # per stage, a Polynomial


def canonical_gamma(r: int) -> tuple:
    return tuple(-(2 ** (r - 1 - i)) for i in range(r))


def isotropy_weights(A: WeightMatrix, j: int) -> list:
    """Weights alpha_l - alpha_j for l != j, in column order."""
    aj = A.vertex(j)
    return [
        Weight(tuple(a - b for a, b in zip(al, aj)))
        for l, al in enumerate(A.columns, start=1)
        if l != j
    ]


def polarize(weights: Sequence[Weight], gamma: Sequence[int]) -> list:
    out = []
    for w in weights:
        s = w.pair(gamma)
        if s == 0:
            raise NonGenericError(f"polarization vector {tuple(gamma)} is orthogonal to weight {w.coeffs}")
        out.append(PolarizedWeight(w, -1 if s < 0 else 1))
    return out


def fixed_point(A: WeightMatrix, j: int, gamma: Sequence[int] | None = None) -> FixedPointData:
    gamma = canonical_gamma(A.r) if gamma is None else tuple(gamma)
    ws = isotropy_weights(A, j)
    return FixedPointData(
        index=j,
        vertex=A.vertex(j),
        others=tuple(l for l in range(1, A.n + 1) if l != j),
        weights=tuple(ws),
        polarized=tuple(polarize(ws, gamma)),
    )


def fixed_points(A: WeightMatrix, gamma: Sequence[int] | None = None) -> list:
    return [fixed_point(A, j, gamma) for j in range(1, A.n + 1)]


def stage_factors(fp: FixedPointData, order: Sequence[int], gens=None) -> StageFactors:
    """Greedy assignment of polarized weights to residue stages.

    Stage t takes every still-unassigned weight with a nonzero coefficient on
    ``order[t]``. Within a stage each weight keeps only its coefficient on the
    stage variable: the variables integrated later are dropped, and the ones
    integrated earlier are already absent.
    """
    r = len(fp.vertex)
    order = tuple(order)
    if sorted(order) != list(range(1, r + 1)):
        raise StructuralError(f"{order} is not a permutation of axes 1..{r}")
    if not fp.polarized:
        raise DegenerateStageError("fixed point has no weights")
    gens = theta_names(r) if gens is None else tuple(gens)
    left = list(range(len(fp.polarized)))
    assignment, factors = [], []
    for axis in order:
        k = axis - 1
        taken = [i for i in left if fp.polarized[i].coeffs[k] != 0]
        if not taken:
            raise DegenerateStageError(f"no weight left for residue variable t{axis}")
        left = [i for i in left if i not in taken]
        c = Fraction(1)
        for i in taken:
            c *= fp.polarized[i].coeffs[k]
        var = Polynomial.var(gens, f"t{axis}")
        assignment.append(tuple(taken))
        factors.append((var ** len(taken)) * c)
    if left:
        raise DegenerateStageError(f"weights {left} were never assigned to a stage")
    return StageFactors(order, tuple(assignment), tuple(factors))


def euler_class(fp: FixedPointData, gens=None, polarized: bool = True) -> Polynomial:
    """Product of the (polarized) full isotropy weights."""
    gens = theta_names(len(fp.vertex)) if gens is None else tuple(gens)
    e = Polynomial.one(gens)
    for pw in fp.polarized:
        w = Weight(pw.coeffs) if polarized else pw.weight
        e = e * w.as_polynomial(gens)
    return e


def action_table(A: WeightMatrix, gamma: Sequence[int] | None = None) -> dict:
    """JSON-ready dump of the weight matrix and fixed-point data."""
    gamma = canonical_gamma(A.r) if gamma is None else tuple(gamma)
    fps = fixed_points(A, gamma)
    return {
        "qubits": A.r,
        "columns": [list(c) for c in A.columns],
        "gamma": list(gamma),
        "fixed_points": [
            {
                "index": fp.index,
                "vertex": list(fp.vertex),
                "weights": [list(w.coeffs) for w in fp.weights],
                "polarized": [
                    {"from": l, "weight": list(pw.coeffs), "epsilon": pw.epsilon}
                    for l, pw in zip(fp.others, fp.polarized)
                ],
            }
            for fp in fps
        ],
    }

"""Walls of the moment hypercube, chamber location and dendrites.

Vertices sit at the +-1 corners of the cube (the columns of the weight
matrix). A wall is a hyperplane ``<normal, x> = offset`` that contains an
(r-1)-dimensional set of vertices. Dendrite rays are axis-parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import gcd
from functools import reduce
from typing import Sequence

from .action import WeightMatrix
from .errors import ConfigurationError, NotRegularError, StructuralError

# named pyramids for the cases drawn in the literature; other r use "+x3" style
PYRAMID_NAMES = {
    1: {(1, 1): "interior", (1, -1): "interior"},
    2: {(2, 1): "upper", (2, -1): "lower", (1, 1): "right", (1, -1): "left"},
    3: {
        (3, 1): "upper", (3, -1): "lower",
        (1, 1): "front", (1, -1): "back",
        (2, 1): "right", (2, -1): "left",
    },
}


def _signed_axis(axis: int, sign: int) -> str:
    return f"{'+' if sign > 0 else '-'}x{axis}"


def pyramid_name(r: int, axis: int, sign: int) -> str:
    return PYRAMID_NAMES.get(r, {}).get((axis, sign), _signed_axis(axis, sign))


def parse_pyramid(r: int, name: str) -> tuple:
    for key, val in PYRAMID_NAMES.get(r, {}).items():
        if val == name:
            if r == 1:
                return (1, 1)
            return key
    if len(name) >= 3 and name[0] in "+-" and name[1] == "x" and name[2:].isdigit():
        axis = int(name[2:])
        if 1 <= axis <= r:
            return axis, 1 if name[0] == "+" else -1
    raise ConfigurationError(f"unknown chamber name {name!r} for {r} qubits")


@dataclass(frozen=True)
class Wall:
    normal: tuple
    offset: Fraction
    vertex_set: tuple   # 1-based column indices on the wall

    def value(self, xi: Sequence[Fraction]) -> Fraction:
        return sum(Fraction(n) * x for n, x in zip(self.normal, xi)) - self.offset

    @property
    def is_boundary(self) -> bool:
        return sum(1 for n in self.normal if n) == 1 and abs(self.offset) == 1

    def describe(self) -> str:
        lhs = " + ".join(f"{n}*x{i}" for i, n in enumerate(self.normal, 1) if n)
        return f"{lhs} = {self.offset}".replace("+ -", "- ").replace("1*x", "x")


@dataclass(frozen=True)
class DendriteCell:
    """Residue order shared by every path of a dendrite.

    ``order`` lists axes from the first residue (the apex axis) to the last;
    ``signs`` holds the step directions of all but the last axis, where the
    dendrite branches.
    """

    order: tuple
    signs: tuple

    @property
    def r(self) -> int:
        return len(self.order)

    def key(self) -> str:
        if self.r == 1:
            return pyramid_name(1, 1, 1)
        head = pyramid_name(self.r, self.order[0], self.signs[0])
        rest = [_signed_axis(a, s) for a, s in zip(self.order[1:], self.signs[1:])]
        return "/".join([head] + rest)

    @classmethod
    def from_key(cls, r: int, key: str) -> DendriteCell:
        parts = key.split("/")
        if r == 1:
            if parts != ["interior"]:
                raise ConfigurationError(f"unknown chamber {key!r} for 1 qubit")
            return cls((1,), ())
        if len(parts) != r - 1:
            raise ConfigurationError(f"chamber key {key!r} needs {r - 1} parts")
        axis, sign = parse_pyramid(r, parts[0])
        order, signs = [axis], [sign]
        for p in parts[1:]:
            if len(p) < 3 or p[0] not in "+-" or p[1] != "x" or not p[2:].isdigit():
                raise ConfigurationError(f"bad axis {p!r} in chamber key {key!r}")
            a, s = int(p[2:]), 1 if p[0] == "+" else -1
            order.append(a)
            signs.append(s)
        last = set(range(1, r + 1)) - set(order)
        if len(last) != 1 or len(set(order)) != len(order) or any(not 1 <= a <= r for a in order):
            raise ConfigurationError(f"chamber key {key!r} is not a valid axis order")
        return cls(tuple(order) + tuple(last), tuple(signs))


@dataclass(frozen=True)
class Chamber:
    apex_axis: int
    apex_sign: int
    sign_vector: tuple
    cell: DendriteCell

    @property
    def name(self) -> str:
        return pyramid_name(self.cell.r, self.apex_axis, self.apex_sign)


@dataclass(frozen=True)
class DendritePath:
    steps: tuple        # ((axis, direction), ...)
    terminal: int
    sign: int


def _rank(vectors) -> int:
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def _primitive(v):
    g = reduce(gcd, (abs(a) for a in v), 0)
    v = tuple(a // g for a in v)
    first = next(a for a in v if a)
    return v if first > 0 else tuple(-a for a in v)


def enumerate_walls(A: WeightMatrix) -> list:
    """All walls, boundary facets included, sorted by (normal, offset)."""
    r = A.r
    normals = set()
    for a, b in product(A.columns, repeat=2):
        if a != b:
            normals.add(_primitive(tuple(x - y for x, y in zip(a, b))))
    walls = []
    for nrm in sorted(normals, reverse=True):
        levels: dict = {}
        for j, col in enumerate(A.columns, start=1):
            levels.setdefault(sum(p * q for p, q in zip(nrm, col)), []).append(j)
        for c, js in sorted(levels.items()):
            if len(js) < 2 and r > 1:
                continue
            base = A.columns[js[0] - 1]
            diffs = [tuple(x - y for x, y in zip(A.columns[j - 1], base)) for j in js[1:]]
            dim = _rank(diffs) if diffs else 0
            if dim == r - 1:
                walls.append(Wall(nrm, Fraction(c), tuple(js)))
    return walls


def dendrite_cell(xi: Sequence[Fraction], strict: bool = True) -> DendriteCell:
    """Residue order read off from the ordering of |xi_i|.

    With ``strict`` a tie between the coordinates still to be ordered is a
    regularity failure; otherwise ties resolve by axis number.
    """
    xi = [Fraction(x) for x in xi]
    remaining = list(range(1, len(xi) + 1))
    order, signs = [], []
    while len(remaining) > 1:
        best = max(abs(xi[a - 1]) for a in remaining)
        hits = [a for a in remaining if abs(xi[a - 1]) == best]
        if len(hits) > 1 and strict:
            raise NotRegularError(
                f"xi={_fmt(xi)} ties |x{hits[0]}| = |x{hits[1]}|: the dendrite is undefined there"
            )
        axis = hits[0]
        order.append(axis)
        signs.append(-1 if xi[axis - 1] < 0 else 1)
        remaining.remove(axis)
    order.append(remaining[0])
    return DendriteCell(tuple(order), tuple(signs))


def _fmt(xi):
    return "(" + ", ".join(str(x) for x in xi) + ")"


def locate_chamber(walls: Sequence[Wall], xi: Sequence[Fraction]) -> Chamber:
    xi = tuple(Fraction(x) for x in xi)
    if any(abs(x) >= 1 for x in xi):
        raise NotRegularError(f"xi={_fmt(xi)} is not strictly inside the moment polytope")
    signs = []
    for w in walls:
        if len(w.normal) != len(xi):
            raise StructuralError("wall and point dimensions differ")
        v = w.value(xi)
        if v == 0:
            raise NotRegularError(f"xi={_fmt(xi)} is not a regular value: it lies on the wall {w.describe()}")
        signs.append(1 if v > 0 else -1)
    cell = dendrite_cell(xi)
    return Chamber(cell.order[0], cell.signs[0] if cell.signs else 1, tuple(signs), cell)


def paths_for_cell(A: WeightMatrix, cell: DendriteCell) -> list:
    """The two root-to-vertex paths of the dendrite with this residue order."""
    if A.r != cell.r:
        raise StructuralError("cell and weight matrix disagree on the number of qubits")
    paths = []
    last = cell.order[-1]
    for d in (1, -1):
        steps = tuple(zip(cell.order[:-1], cell.signs)) + ((last, d),)
        vertex = [0] * A.r
        sign = 1
        for axis, direction in steps:
            vertex[axis - 1] = direction
            sign *= direction
        paths.append(DendritePath(steps, A.index_of(vertex), sign))
    return paths


def build_dendrite(chamber: Chamber, A: WeightMatrix, xi: Sequence[Fraction]) -> list:
    cell = dendrite_cell(xi)
    if cell.order[0] != chamber.apex_axis:
        raise StructuralError("chamber does not belong to this xi")
    return paths_for_cell(A, cell)


def first_ray_crossings(walls: Sequence[Wall], xi: Sequence[Fraction], chamber: Chamber) -> list:
    """Interior walls met by the first ray, from xi to the apex facet.

    Only the hyperplane part of each wall is tested, which is exact for the
    cube sections that occur for r <= 3.
    """
    xi = [Fraction(x) for x in xi]
    k = chamber.apex_axis - 1
    end = list(xi)
    end[k] = Fraction(chamber.apex_sign)
    hits = []
    for w in walls:
        if w.is_boundary:
            continue
        v0, v1 = w.value(xi), w.value(end)
        if v0 * v1 < 0 or v1 == 0:
            hits.append(w)
    return hits


def triangulation(r: int):
    """The r! * 2^r simplices {1 >= s1*x_p1 >= ... >= s_r*x_pr >= 0} tiling the cube.

    Yields ``(order, signs, vertices)``.
    """
    for order in permutations(range(1, r + 1)):
        for signs in product((1, -1), repeat=r):
            verts = []
            point = [Fraction(0)] * r
            verts.append(tuple(point))
            for axis, s in zip(order, signs):
                point[axis - 1] = Fraction(s)
                verts.append(tuple(point))
            yield order, signs, verts

"""Buchberger's algorithm over Q in graded reverse lex order.

Internally polynomials are plain dicts {exponent tuple: Fraction}; the
public functions take and return :class:`Polynomial` values.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

from .algebra import Polynomial, grevlex_key
from .errors import InfiniteQuotientError, StructuralError


def _lead(p: dict):
    e = max(p, key=grevlex_key)
    return e, p[e]


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_multiple(p: dict, q: dict, shift, c) -> None:
    """p -= c * x^shift * q, in place."""
    for e, v in q.items():
        k = tuple(a + b for a, b in zip(e, shift))
        s = p.get(k, 0) - c * v
        if s:
            p[k] = s
        else:
            p.pop(k, None)


def _reduce(p: dict, basis: list, leads: list) -> dict:
    """Full reduction of p modulo basis (every term, not only the leading one)."""
    p = dict(p)
    rem: dict = {}
    while p:
        e, c = _lead(p)
        for g, (ge, gc) in zip(basis, leads):
            if _divides(ge, e):
                _sub_multiple(p, g, tuple(x - y for x, y in zip(e, ge)), c / gc)
                break
        else:
            rem[e] = c
            del p[e]
    return rem


def _spoly(f: dict, g: dict, lf, lg) -> dict:
    (fe, fc), (ge, gc) = lf, lg
    l = _lcm(fe, ge)
    out: dict = {}
    _sub_multiple(out, f, tuple(a - b for a, b in zip(l, fe)), -1 / fc)
    _sub_multiple(out, g, tuple(a - b for a, b in zip(l, ge)), 1 / gc)
    return out


def _buchberger(polys: list) -> list:
    basis = [p for p in polys if p]
    leads = [_lead(p) for p in basis]
    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
    while pairs:
        # normal selection strategy: smallest lcm first, ties by index
        i, j = min(pairs, key=lambda ij: (grevlex_key(_lcm(leads[ij[0]][0], leads[ij[1]][0])), ij))
        pairs.discard((i, j))
        ei, ej = leads[i][0], leads[j][0]
        l = _lcm(ei, ej)
        # criterion 1: coprime leading monomials
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        # criterion 2: some k divides the lcm and both (i,k), (j,k) are done
        if any(
            k not in (i, j)
            and _divides(leads[k][0], l)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        h = _reduce(_spoly(basis[i], basis[j], leads[i], leads[j]), basis, leads)
        if h:
            n = len(basis)
            basis.append(h)
            leads.append(_lead(h))
            pairs |= {(k, n) for k in range(n)}
    return _reduce_basis(basis)


def _reduce_basis(basis: list) -> list:
    # drop elements whose leading monomial is divisible by another's
    leads = [_lead(p)[0] for p in basis]
    keep = []
    for i, e in enumerate(leads):
        if any(j != i and _divides(leads[j], e) and (leads[j] != e or j < i) for j in range(len(basis))):
            continue
        keep.append(basis[i])
    out = []
    for i, p in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = _reduce(p, others, [_lead(q) for q in others])
        _, c = _lead(r)
        out.append({e: v / c for e, v in r.items()})
    out.sort(key=lambda p: grevlex_key(_lead(p)[0]), reverse=True)
    return out


def _gens_of(polys: Sequence[Polynomial]) -> tuple:
    gens = {p.gens for p in polys}
    if len(gens) != 1:
        raise StructuralError("generators live in different rings")
    return gens.pop()


def groebner_basis(generators: Sequence[Polynomial]) -> list:
    """Reduced, monic Groebner basis sorted by descending leading monomial."""
    if not generators:
        raise StructuralError("need at least one generator")
    gens = _gens_of(generators)
    basis = _buchberger([dict(g.terms) for g in generators])
    return [Polynomial(gens, p) for p in basis]


def normal_form(p: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    if not basis:
        return p
    gens = _gens_of(list(basis) + [p])
    dicts = [dict(g.terms) for g in basis]
    return Polynomial(gens, _reduce(dict(p.terms), dicts, [_lead(d) for d in dicts]))


def is_groebner(basis: Sequence[Polynomial]) -> bool:
    """Buchberger's test: every S-polynomial reduces to zero."""
    dicts = [dict(g.terms) for g in basis if g.terms]
    leads = [_lead(d) for d in dicts]
    for j in range(len(dicts)):
        for i in range(j):
            if _reduce(_spoly(dicts[i], dicts[j], leads[i], leads[j]), dicts, leads):
                return False
    return True


def standard_monomials(basis: Sequence[Polynomial]) -> list:
    """Exponent vectors not divisible by any leading monomial (finite case only)."""
    if not basis:
        raise InfiniteQuotientError("the zero ideal has an infinite quotient")
    gens = _gens_of(basis)
    leads = [g.leading()[0] for g in basis]
    if any(sum(e) == 0 for e in leads):
        return []
    bounds = []
    for i in range(len(gens)):
        pure = [e[i] for e in leads if e[i] and sum(e) == e[i]]
        if not pure:
            raise InfiniteQuotientError(f"no pure power of {gens[i]} among the leading monomials")
        bounds.append(min(pure))
    out = [
        e for e in product(*(range(b) for b in bounds))
        if not any(_divides(l, e) for l in leads)
    ]
    out.sort(key=grevlex_key)
    return out


def poincare_series(basis: Sequence[Polynomial]) -> list:
    """Quotient dimension per polynomial degree 0, 1, 2, ... (cohomological degree 2d)."""
    mons = standard_monomials(basis)
    if not mons:
        return []
    top = max(sum(e) for e in mons)
    counts = [0] * (top + 1)
    for e in mons:
        counts[sum(e)] += 1
    return counts

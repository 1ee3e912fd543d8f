"""Rewriting symmetric polynomials in elementary symmetric ones."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .algebra import Polynomial
from .errors import NonSymmetricError, StructuralError


def elementary(gens: Sequence[str], alphabet: Sequence[str], k: int) -> Polynomial:
    """e_k of the alphabet as a polynomial over ``gens``."""
    idx = [tuple(gens).index(a) for a in alphabet]
    terms = {}
    for combo in combinations(idx, k):
        e = [0] * len(gens)
        for i in combo:
            e[i] = 1
        terms[tuple(e)] = 1
    return Polynomial(gens, terms)


def elementary_of(values: Sequence[Polynomial], k: int) -> Polynomial:
    """e_k(v_1, ..., v_n) for arbitrary polynomials v_i (e.g. characters)."""
    if not values:
        raise StructuralError("empty alphabet")
    gens = values[0].gens
    # coefficients of prod (1 + v_i z), truncated at z^k
    coeffs = [Polynomial.one(gens)] + [Polynomial.zero(gens)] * k
    for v in values:
        for j in range(k, 0, -1):
            coeffs[j] = coeffs[j] + coeffs[j - 1] * v
    return coeffs[k]


def check_symmetric(p: Polynomial, alphabet: Sequence[str]) -> None:
    for a, b in zip(alphabet, alphabet[1:]):
        if p.permute_gens({a: b, b: a}) != p:
            raise NonSymmetricError(f"not symmetric under swapping {a} and {b}", (a, b))


def sigma_names(k: int, prefix: str = "s") -> tuple:
    return tuple(f"{prefix}{i}" for i in range(1, k + 1))


def symmetric_expand(p: Polynomial, alphabet: Sequence[str], prefix: str = "s") -> Polynomial:
    """Write p as a polynomial in s1..sk = e_1..e_k of the alphabet.

    Generators of p outside the alphabet act as coefficients and are kept.
    The result lives over ``(s1, ..., sk) + other generators``.
    """
    alphabet = tuple(alphabet)
    missing = [a for a in alphabet if a not in p.gens]
    if missing:
        raise StructuralError(f"alphabet variables {missing} not in {p.gens}")
    check_symmetric(p, alphabet)
    k = len(alphabet)
    others = tuple(g for g in p.gens if g not in alphabet)
    sig = sigma_names(k, prefix)
    clash = set(sig) & set(others)
    if clash:
        raise StructuralError(f"generator names {sorted(clash)} clash with sigma names")
    out_gens = sig + others
    apos = [p.gens.index(a) for a in alphabet]
    opos = [p.gens.index(o) for o in others]
    es = [elementary(p.gens, alphabet, i) for i in range(1, k + 1)]

    result: dict = {}
    rest = p
    while rest.terms:
        # lex-leading alphabet exponent; its coefficient may involve other gens
        lead = max(tuple(e[i] for i in apos) for e in rest.terms)
        if any(lead[i] < lead[i + 1] for i in range(k - 1)):
            raise NonSymmetricError("leading exponent is not a partition", None)
        coeff_terms = {
            tuple(e[i] for i in opos): c
            for e, c in rest.terms.items()
            if tuple(e[i] for i in apos) == lead
        }
        powers = [lead[i] - (lead[i + 1] if i + 1 < k else 0) for i in range(k)]
        sub = Polynomial.one(p.gens)
        for e_i, d in zip(es, powers):
            if d:
                sub = sub * e_i ** d
        coeff_poly = Polynomial(
            p.gens,
            {_place(len(p.gens), opos, oe): c for oe, c in coeff_terms.items()},
        )
        rest = rest - coeff_poly * sub
        for oe, c in coeff_terms.items():
            key = tuple(powers) + oe
            s = result.get(key, 0) + c
            if s:
                result[key] = s
            else:
                result.pop(key, None)
    return Polynomial(out_gens, result)


def _place(n, positions, values):
    e = [0] * n
    for i, v in zip(positions, values):
        e[i] = v
    return tuple(e)


def substitute_elementary(q: Polynomial, gens: Sequence[str], alphabet: Sequence[str], prefix: str = "s") -> Polynomial:
    """Inverse of :func:`symmetric_expand`: replace s_i by e_i of the alphabet."""
    gens = tuple(gens)
    k = len(alphabet)
    sig = sigma_names(k, prefix)
    others = tuple(g for g in q.gens if g not in sig)
    out = Polynomial.zero(gens)
    es = [elementary(gens, alphabet, i) for i in range(1, k + 1)]
    for e, c in q.terms.items():
        term = Polynomial.constant(gens, c)
        for name, power in zip(q.gens, e):
            if not power:
                continue
            if name in sig:
                term = term * es[sig.index(name)] ** power
            else:
                term = term * Polynomial.var(gens, name) ** power
        out = out + term
    if any(o not in gens for o in others):
        raise StructuralError("target ring lacks some coefficient generators")
    return out

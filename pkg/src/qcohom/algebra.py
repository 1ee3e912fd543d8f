"""Exact sparse multivariate polynomials and rational functions over Q.

A :class:`Polynomial` stores a tuple of generator names together with a map
from exponent tuples to nonzero :class:`~fractions.Fraction` coefficients.
Generators are listed from least to most significant, so for the ring
``("t1", "t2", "w")`` the monomial order is graded reverse lexicographic with
``t1 < t2 < w``.

Values are immutable once built; every operation returns a fresh object.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Union

from .errors import StructuralError

Scalar = Union[int, Fraction]
Exps = tuple


def grevlex_key(exps: Exps) -> tuple:
    """Sort key realizing graded reverse lex (larger key = larger monomial)."""
    return (sum(exps), tuple(-e for e in exps))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Polynomial:
    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens: Iterable[str], terms: Mapping[Exps, Scalar] | None = None):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise StructuralError(f"repeated generator in {gens}")
        n = len(gens)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise StructuralError(f"bad exponent vector {exps} for generators {gens}")
            c = _as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.gens = gens
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, gens, terms):
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.gens = gens
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, gens):
        return cls._raw(tuple(gens), {})

    @classmethod
    def constant(cls, gens, c: Scalar):
        gens = tuple(gens)
        c = _as_fraction(c)
        return cls._raw(gens, {(0,) * len(gens): c} if c else {})

    @classmethod
    def one(cls, gens):
        return cls.constant(gens, 1)

    @classmethod
    def var(cls, gens, name: str):
        gens = tuple(gens)
        try:
            i = gens.index(name)
        except ValueError:
            raise StructuralError(f"{name!r} is not one of {gens}") from None
        exps = tuple(1 if k == i else 0 for k in range(len(gens)))
        return cls._raw(gens, {exps: Fraction(1)})

    @classmethod
    def linear(cls, gens, coeffs: Mapping[str, Scalar], const: Scalar = 0):
        """Build ``const + sum(coeffs[v] * v)``."""
        gens = tuple(gens)
        terms = {}
        for name, c in coeffs.items():
            i = gens.index(name)
            terms[tuple(1 if k == i else 0 for k in range(len(gens)))] = c
        if const:
            terms[(0,) * len(gens)] = const
        return cls(gens, terms)

    # -- basic queries --------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise StructuralError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.gens), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.gens.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def min_degree_in(self, name: str) -> int:
        i = self.gens.index(name)
        return min((e[i] for e in self.terms), default=0)

    def variables(self) -> tuple:
        """Generators that actually occur."""
        used = [any(e[i] for e in self.terms) for i in range(len(self.gens))]
        return tuple(g for g, u in zip(self.gens, used) if u)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coeff(self, exps: Exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def sorted_terms(self):
        """Terms in descending monomial order."""
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def leading(self):
        """(exponents, coefficient) of the leading term."""
        if not self.terms:
            raise StructuralError("zero polynomial has no leading term")
        exps = max(self.terms, key=grevlex_key)
        return exps, self.terms[exps]

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive with integer coefficients."""
        if not self.terms:
            return Fraction(0)
        num = reduce(gcd, (c.numerator for c in self.terms.values()))
        den = reduce(lcm, (c.denominator for c in self.terms.values()))
        return Fraction(abs(num), den)

    def monic(self) -> Polynomial:
        _, lc = self.leading()
        return self * (1 / lc)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: Polynomial):
        if self.gens != other.gens:
            raise StructuralError(f"variable mismatch: {self.gens} vs {other.gens}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.gens, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.gens, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.gens)
            return Polynomial._raw(self.gens, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Polynomial._raw(self.gens, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Polynomial):
            return RationalFunction(self, other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.gens)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exps: Exps, c: Scalar = 1) -> Polynomial:
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.gens)
        return Polynomial._raw(
            self.gens,
            {tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.gens, other)
        if isinstance(other, RationalFunction):
            return other == self
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    # -- structural operations -------------------------------------------

    def embed(self, gens: Iterable[str]) -> Polynomial:
        """Re-express over a generator list containing every used generator."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        idx = {g: i for i, g in enumerate(gens)}
        for g in self.variables():
            if g not in idx:
                raise StructuralError(f"cannot embed: {g!r} missing from {gens}")
        n = len(gens)
        terms = {}
        for e, c in self.terms.items():
            new = [0] * n
            for g, k in zip(self.gens, e):
                if k:
                    new[idx[g]] = k
            terms[tuple(new)] = c
        return Polynomial._raw(gens, terms)

    def subs(self, values: Mapping[str, Union[Scalar, "Polynomial"]]) -> Polynomial:
        """Substitute scalars or same-ring polynomials for generators."""
        if not values:
            return self
        pos = {self.gens.index(name): val for name, val in values.items()}
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                v = pos[i]
                if isinstance(v, Polynomial):
                    self._check(v)
                    cache[key] = v ** k
                else:
                    cache[key] = Polynomial.constant(self.gens, _as_fraction(v) ** k)
            return cache[key]

        result = Polynomial.zero(self.gens)
        for e, c in self.terms.items():
            kept = tuple(0 if i in pos else k for i, k in enumerate(e))
            term = Polynomial._raw(self.gens, {kept: c})
            for i, k in enumerate(e):
                if k and i in pos:
                    term = term * power(i, k)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        p = self.subs(values)
        return p.constant_value()

    def diff(self, name: str) -> Polynomial:
        i = self.gens.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return Polynomial._raw(self.gens, terms)

    def coefficients_in(self, name: str) -> dict:
        """Split as ``sum_k c_k * name**k``; returns {k: c_k} with c_k free of name."""
        i = self.gens.index(name)
        parts: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            parts.setdefault(k, {})[ne] = c
        return {k: Polynomial._raw(self.gens, t) for k, t in parts.items()}

    def permute_gens(self, mapping: Mapping[str, str]) -> Polynomial:
        """Rename generators inside the same ring (a permutation of gens)."""
        idx = {g: i for i, g in enumerate(self.gens)}
        target = [idx[mapping.get(g, g)] for g in self.gens]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(e)
            for i, k in enumerate(e):
                ne[target[i]] += k
            terms[tuple(ne)] = c
        return Polynomial._raw(self.gens, terms)

    # -- text -------------------------------------------------------------

    def _monomial_text(self, exps):
        parts = []
        # most significant generator first reads naturally: w*t2*t1
        for g, k in reversed(list(zip(self.gens, exps))):
            if k == 1:
                parts.append(g)
            elif k > 1:
                parts.append(f"{g}^{k}")
        return "*".join(parts)

    def to_text(self) -> str:
        """Canonical text form: descending monomial order, rational coefficients."""
        if not self.terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = self._monomial_text(e)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    __str__ = to_text

    def __repr__(self):
        return f"Polynomial({self.to_text()!r}, gens={self.gens})"


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)|([A-Za-z_]\w*)|(\^)|(\*)|([+-]))")


def parse_polynomial(text: str, gens: Iterable[str]) -> Polynomial:
    """Parse sums of products such as ``-3/4*x1^2*x2 + 1/2``.

    Accepts the canonical output of :meth:`Polynomial.to_text` plus
    decimals (converted exactly). Parentheses are not supported.
    """
    gens = tuple(gens)
    pos, toks = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise StructuralError(f"cannot parse polynomial near {text[pos:]!r}")
        pos = m.end()
        toks.append(m)
    result = Polynomial.zero(gens)
    sign, coeff, exps, have = 1, Fraction(1), [0] * len(gens), False
    i = 0
    while i < len(toks):
        num, name, caret, star, pm = toks[i].groups()
        if pm:
            if have:
                result = result + Polynomial(gens, {tuple(exps): sign * coeff})
                sign, coeff, exps, have = 1, Fraction(1), [0] * len(gens), False
            if pm == "-":
                sign = -sign
        elif num:
            coeff *= Fraction(num)
            have = True
        elif name:
            if name not in gens:
                raise StructuralError(f"unknown variable {name!r}; expected one of {gens}")
            k = 1
            if i + 1 < len(toks) and toks[i + 1].group(3):
                if i + 2 >= len(toks) or not toks[i + 2].group(1) or not toks[i + 2].group(1).isdigit():
                    raise StructuralError(f"bad exponent in {text!r}")
                k = int(toks[i + 2].group(1))
                i += 2
            exps[gens.index(name)] += k
            have = True
        elif caret:
            raise StructuralError(f"unexpected '^' in {text!r}")
        i += 1
    if have:
        result = result + Polynomial(gens, {tuple(exps): sign * coeff})
    elif sign != 1 or toks:
        if not toks or toks[-1].group(5):
            raise StructuralError(f"dangling sign in {text!r}")
    return result


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_pow(p: Polynomial, k: int) -> Polynomial:
    return p ** k


class RationalFunction:
    """A fraction num/den of polynomials over the same generators.

    Stored with the content of the pair removed (integer coefficients,
    gcd 1), common monomial factors cancelled and the denominator's
    leading coefficient positive. No multivariate gcd is attempted, so
    equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        if den is None:
            den = Polynomial.one(num.gens)
        if num.gens != den.gens:
            raise StructuralError(f"variable mismatch: {num.gens} vs {den.gens}")
        if den.is_zero():
            raise StructuralError("denominator is the zero polynomial")
        self.num, self.den = _normalize_pair(num, den)

    @property
    def gens(self):
        return self.num.gens

    @classmethod
    def lift(cls, x, gens=None) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Polynomial):
            return cls(x)
        return cls(Polynomial.constant(gens, x))

    def normalize(self) -> RationalFunction:
        return RationalFunction(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def to_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise StructuralError(f"{self} is not a polynomial")
        return self.num * (1 / self.den.constant_value())

    def _other(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction(Polynomial.constant(self.gens, other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o / self

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is unhashable (equality is not structural)")

    def subs(self, values) -> RationalFunction:
        return RationalFunction(self.num.subs(values), self.den.subs(values))

    def diff(self, name: str) -> RationalFunction:
        n, d = self.num, self.den
        return RationalFunction(n.diff(name) * d - n * d.diff(name), d * d)

    def __str__(self):
        if self.is_polynomial():
            return str(self.to_polynomial())
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _normalize_pair(num: Polynomial, den: Polynomial):
    # clear denominators and common integer content over the pair
    coeffs = list(num.terms.values()) + list(den.terms.values())
    scale = Fraction(reduce(lcm, (c.denominator for c in coeffs), 1))
    g = reduce(gcd, (int(c * scale) for c in coeffs), 0)
    scale /= g
    _, lc = den.leading()
    if lc < 0:
        scale = -scale
    if num.is_zero():
        return num, Polynomial.one(den.gens)
    # cancel the common monomial factor
    n = len(den.gens)
    shift = [min(e[i] for e in list(num.terms) + list(den.terms)) for i in range(n)]
    if any(shift):
        def down(p):
            return Polynomial._raw(
                p.gens,
                {tuple(a - b for a, b in zip(e, shift)): c * scale for e, c in p.terms.items()},
            )
        return down(num), down(den)
    if scale == 1:
        return num, den
    return num * scale, den * scale


def residue_at_zero(f, var: str) -> RationalFunction:
    """Coefficient of ``var**-1`` in the Laurent expansion of f about var = 0.

    The denominator is written as ``var**m * u`` with ``u(0) != 0``; the
    inverse of ``u`` is expanded as a power series to order ``m - 1`` over the
    field of the remaining variables.
    """
    f = RationalFunction.lift(f)
    num, den = f.num, f.den
    if den.is_zero():
        raise StructuralError("denominator identically zero")
    m = den.min_degree_in(var)
    if m == 0 or num.is_zero():
        return RationalFunction(Polynomial.zero(num.gens))
    u = {k - m: c for k, c in den.coefficients_in(var).items()}
    u0 = u[0]
    u0_pow = [Polynomial.one(num.gens)]
    for _ in range(m):
        u0_pow.append(u0_pow[-1] * u0)
    # series coefficients of 1/u are P_k / u0**(k+1)
    series = [Polynomial.one(num.gens)]
    for k in range(1, m):
        acc = Polynomial.zero(num.gens)
        for j in range(1, k + 1):
            if j in u:
                acc = acc + u[j] * series[k - j] * u0_pow[j - 1]
        series.append(-acc)
    total = Polynomial.zero(num.gens)
    for k, nk in num.coefficients_in(var).items():
        if k <= m - 1:
            total = total + nk * series[m - 1 - k] * u0_pow[k]
    return RationalFunction(total, u0_pow[m])

"""Sparse multivariate polynomials over the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

# A monomial is a tuple of (variable id, exponent) pairs sorted by id with
# every exponent positive.  The empty tuple is the constant monomial 1.
Monomial = tuple


@dataclass(frozen=True)
class Variable:
    id: int
    label: str


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if monomial `a` divides monomial `b`."""
    eb = dict(b)
    return all(eb.get(v, 0) >= e for v, e in a)


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """Quotient b / a; `a` must divide `b`."""
    exps = dict(b)
    for v, e in a:
        exps[v] -= e
    return tuple((v, e) for v, e in sorted(exps.items()) if e)


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        if e > exps.get(v, 0):
            exps[v] = e
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")


class Polynomial:
    """Immutable polynomial stored as a map from monomial to nonzero Fraction."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _coerce(c)
                if c:
                    clean[m] = c
        self.terms: dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, v: Variable | int, power: int = 1) -> "Polynomial":
        vid = v.id if isinstance(v, Variable) else v
        if power == 0:
            return cls.constant(1)
        return cls._raw({((vid, power),): Fraction(1)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[int]:
        return {v for m in self.terms for v, _ in m}

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    def degree_in(self, vid: int) -> int:
        return max((dict(m).get(vid, 0) for m in self.terms), default=-1)

    def split_linear(self, vid: int):
        """Write self as a*v + r with v absent from a and r.

        Returns (a, r) or None if the degree in v exceeds one.
        """
        a, r = {}, {}
        for m, c in self.terms.items():
            e = dict(m).get(vid, 0)
            if e == 0:
                r[m] = c
            elif e == 1:
                a[tuple((v, k) for v, k in m if v != vid)] = c
            else:
                return None
        return Polynomial._raw(a), Polynomial._raw(r)

    # -- arithmetic --------------------------------------------------------

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _coerce(other)
            if not c:
                return Polynomial()
            return Polynomial._raw({m: k * c for m, k in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _coerce(other)
        return self * (1 / c)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_term(self, mono: Monomial, c) -> "Polynomial":
        c = _coerce(c)
        return Polynomial._raw({mono_mul(m, mono): k * c for m, k in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Rational)):
                return self.terms == Polynomial.constant(other).terms
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- substitution and evaluation ---------------------------------------

    def substitute(self, mapping: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Replace variables by polynomials simultaneously."""
        if not mapping or not (self.variables() & mapping.keys()):
            return self
        powers: dict = {}
        out = Polynomial()
        for m, c in self.terms.items():
            term = Polynomial.constant(c)
            rest = []
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = mapping[v] ** e
                    term = term * powers[key]
                else:
                    rest.append((v, e))
            if rest:
                term = term.mul_term(tuple(rest), 1)
            out = out + term
        return out

    def evaluate(self, values: Mapping[int, object]):
        """Evaluate at numeric values (floats or exact numbers)."""
        floaty = any(isinstance(x, float) for x in values.values())
        total = 0
        for m, c in self.terms.items():
            t = float(c) if floaty else c
            for v, e in m:
                t = t * values[v] ** e
            total = total + t
        return total

    def primitive(self) -> "Polynomial":
        """Scale to integer coefficients with content one and positive leading sign."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        first = max(self.terms, key=lambda m: (mono_degree(m), m))
        sign = -1 if self.terms[first] < 0 else 1
        return Polynomial._raw({m: Fraction(n // g * sign) for m, n in zip(self.terms, nums)})

    # -- display -----------------------------------------------------------

    def format(self, labels: Mapping[int, str] | None = None) -> str:
        if not self.terms:
            return "0"
        name = (lambda v: labels.get(v, f"v{v}")) if labels else (lambda v: f"v{v}")
        parts = []
        for m in sorted(self.terms, key=lambda m: (-mono_degree(m), m)):
            c = self.terms[m]
            mono = "*".join(name(v) if e == 1 else f"{name(v)}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self.format()})"


def variables_of(polys: Iterable[Polynomial]) -> set[int]:
    out: set[int] = set()
    for p in polys:
        out |= p.variables()
    return out

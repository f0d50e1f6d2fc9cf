"""Buchberger's algorithm under graded reverse lexicographic order.

The public helpers (``normal_form``, ``s_polynomial``) work directly on
:class:`Polynomial` values with Fraction arithmetic.  The basis computation
itself runs on a packed representation: every monomial is one Python int
whose natural ordering is the term order, and polynomials are descending
lists of ``(monomial, integer coefficient)`` pairs kept primitive.
"""

from __future__ import annotations

import enum
import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .polynomial import (
    Monomial,
    Polynomial,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    variables_of,
)


class TimedOut(Exception):
    """Raised when a Deadline expires inside a basis computation."""


class Membership(enum.Enum):
    YES = "yes"
    NO = "no"
    TIMED_OUT = "timed_out"


class Deadline:
    """Wall-clock budget, started at construction and polled cooperatively."""

    def __init__(self, budget_ms: float):
        if budget_ms <= 0:
            raise ValueError("deadline budget must be positive")
        self.budget_ms = budget_ms
        self._end = time.monotonic() + budget_ms / 1000.0

    def expired(self) -> bool:
        return time.monotonic() >= self._end

    def remaining_ms(self) -> float:
        return max(0.0, (self._end - time.monotonic()) * 1000.0)

    def check(self) -> None:
        if time.monotonic() >= self._end:
            raise TimedOut()


@dataclass(frozen=True)
class TermOrder:
    """Graded reverse lexicographic order.

    ``priority`` lists variable ids from the largest variable to the
    smallest; ties in total degree are broken against the smallest
    variable first.
    """

    priority: tuple
    kind: str = field(default="grevlex")

    def __post_init__(self):
        if self.kind != "grevlex":
            raise ValueError(f"unsupported term order {self.kind!r}")
        if len(set(self.priority)) != len(self.priority):
            raise ValueError("variable priority must be a permutation")

    def key(self, m: Monomial):
        exps = dict(m)
        return (mono_degree(m), tuple(-exps.get(v, 0) for v in reversed(self.priority)))

    def leading_monomial(self, f: Polynomial) -> Monomial:
        return max(f.terms, key=self.key)

    def leading_term(self, f: Polynomial):
        m = self.leading_monomial(f)
        return m, f.terms[m]

    def covers(self, polys) -> bool:
        return variables_of(polys) <= set(self.priority)


# ---------------------------------------------------------------------------
# Reference (Fraction) routines


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: TermOrder) -> Polynomial:
    """Remainder of multivariate division of f by the listed sequence G.

    At each step the leading term of the running dividend is divided by the
    first element of G whose leading term divides it; otherwise it moves to
    the remainder.
    """
    if not G:
        raise ValueError("divisor list must be non-empty")
    if any(g.is_zero() for g in G):
        raise ValueError("divisor list contains the zero polynomial")
    leads = [order.leading_term(g) for g in G]
    p = f
    rem: dict = {}
    while not p.is_zero():
        m, c = order.leading_term(p)
        for g, (gm, gc) in zip(G, leads):
            if mono_divides(gm, m):
                p = p - g.mul_term(mono_div(m, gm), c / gc)
                break
        else:
            rem[m] = c
            p = Polynomial._raw({k: v for k, v in p.terms.items() if k != m})
    return Polynomial._raw(rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: TermOrder) -> Polynomial:
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of the zero polynomial")
    fm, fc = order.leading_term(f)
    gm, gc = order.leading_term(g)
    L = mono_lcm(fm, gm)
    return f.mul_term(mono_div(L, fm), 1 / fc) - g.mul_term(mono_div(L, gm), 1 / gc)


# ---------------------------------------------------------------------------
# Packed engine

_BITS = 16
_FIELD = (1 << _BITS) - 1


class _Packed:
    """Encodes monomials as ints with ``int`` order equal to grevlex.

    key = degree * 2**W - packed, where packed stores the exponent of the
    i-th priority variable in bit field i.  Products are sums of keys.
    """

    def __init__(self, priority: Sequence[int]):
        n = len(priority)
        self.ids = list(priority)
        self.pos = {v: i for i, v in enumerate(priority)}
        self.width = n * _BITS
        self.guard = sum(1 << (_BITS * i + _BITS - 1) for i in range(n))
        self.ones = sum(1 << (_BITS * i) for i in range(n))
        self.top = _BITS * (n - 1) if n else 0

    def encode(self, m: Monomial) -> int:
        packed = 0
        deg = 0
        for v, e in m:
            if e >= 1 << (_BITS - 1):
                raise OverflowError("exponent too large for packed monomials")
            packed |= e << (_BITS * self.pos[v])
            deg += e
        return (deg << self.width) - packed

    def unpack(self, k: int) -> int:
        deg = -((-k) >> self.width)
        return (deg << self.width) - k

    def decode(self, k: int) -> Monomial:
        p = self.unpack(k)
        out = []
        for i, v in enumerate(self.ids):
            e = (p >> (_BITS * i)) & _FIELD
            if e:
                out.append((v, e))
        return tuple(sorted(out))

    def lcm(self, pa: int, pb: int) -> int:
        """lcm of two packed exponent vectors, returned as a key."""
        d = (pa | self.guard) - pb
        mask = ((d & self.guard) >> (_BITS - 1)) * _FIELD
        p = (pa & mask) | (pb & ~mask)
        deg = ((p * self.ones) >> self.top) & _FIELD
        return (deg << self.width) - p

    def divides(self, pa: int, pb: int) -> bool:
        return ((pb | self.guard) - pa) & self.guard == self.guard

    def from_poly(self, f: Polynomial) -> list:
        prim = f.primitive()
        terms = [(self.encode(m), int(c)) for m, c in prim.terms.items()]
        terms.sort(reverse=True)
        return _normalize_sign(terms)

    def to_poly(self, terms: list, monic: bool = True) -> Polynomial:
        lc = terms[0][1] if monic else 1
        return Polynomial._raw({self.decode(k): Fraction(c, lc) for k, c in terms})


def _normalize_sign(terms: list) -> list:
    if terms and terms[0][1] < 0:
        return [(k, -c) for k, c in terms]
    return terms


def _primitive(terms: list) -> list:
    g = 0
    for _, c in terms:
        g = gcd(g, c)
        if g == 1:
            break
    if terms[0][1] < 0:
        g = -g
    if g == 1:
        return terms
    return [(k, c // g) for k, c in terms]


def _combine(f: list, i: int, a: int, g: list, b: int, shift: int) -> list:
    """a * f[i:] - b * x^shift * g[1:], merged in descending order."""
    out = []
    append = out.append
    n, m = len(f), len(g)
    j = 1
    while i < n and j < m:
        kf, cf = f[i]
        kg, cg = g[j]
        kg += shift
        if kf > kg:
            append((kf, a * cf))
            i += 1
        elif kf < kg:
            append((kg, -b * cg))
            j += 1
        else:
            c = a * cf - b * cg
            if c:
                append((kf, c))
            i += 1
            j += 1
    if a == 1:
        out.extend(f[i:])
    else:
        out.extend((k, a * c) for k, c in f[i:])
    out.extend((k + shift, -b * c) for k, c in g[j:])
    return out


class _Engine:
    def __init__(self, packer: _Packed, deadline: Deadline | None):
        self.pk = packer
        self.deadline = deadline
        self.polys: list = []
        self.lm_k: list = []
        self.lm_p: list = []
        self.active: list = []
        self.pairs: list = []  # heap of (lcm key, seq, i, j)
        self.live: dict = {}
        self.seq = 0
        self.reductions = 0

    def poll(self):
        if self.deadline is not None:
            self.deadline.check()

    def reduce(self, f: list, among=None, full: bool = True) -> list:
        """Normal form of f modulo the active basis (integer-scaled)."""
        pk = self.pk
        guard = pk.guard
        width = pk.width
        lm_p = self.lm_p
        polys = self.polys
        active = self.active if among is None else among
        rem = []
        i = 0
        steps = 0
        while i < len(f):
            self.poll()
            k, c = f[i]
            deg = -((-k) >> width)
            p = (deg << width) - k
            for idx in active:
                pa = lm_p[idx]
                if ((p | guard) - pa) & guard == guard:
                    break
            else:
                if not full:
                    rem.extend(f[i:])
                    break
                rem.append((k, c))
                i += 1
                continue
            g = polys[idx]
            lc = g[0][1]
            d = gcd(c, lc)
            a = lc // d
            b = c // d
            if a < 0:
                a, b = -a, -b
            f = _combine(f, i + 1, a, g, b, k - g[0][0])
            i = 0
            if a != 1 and rem:
                rem = [(kk, cc * a) for kk, cc in rem]
            steps += 1
            if steps % 16 == 0 and f:
                merged = _primitive(rem + f) if rem else _primitive(f)
                rem, f = merged[: len(rem)], merged[len(rem):]
        self.reductions += steps
        if not rem:
            return rem
        return _primitive(rem)

    def spoly(self, i: int, j: int, L: int) -> list:
        gi, gj = self.polys[i], self.polys[j]
        ci, cj = gi[0][1], gj[0][1]
        d = gcd(ci, cj)
        a, b = cj // d, ci // d
        si = L - gi[0][0]
        sj = L - gj[0][0]
        f = [(k + si, a * c) for k, c in gi[1:]]
        return _combine(f, 0, 1, gj, b, sj)

    def add(self, h_terms: list) -> int:
        pk = self.pk
        h = len(self.polys)
        self.polys.append(h_terms)
        kh = h_terms[0][0]
        ph = pk.unpack(kh)
        self.lm_k.append(kh)
        self.lm_p.append(ph)
        lm_k, lm_p = self.lm_k, self.lm_p

        cands = []
        for g in self.active:
            L = pk.lcm(ph, lm_p[g])
            cands.append((g, L, pk.unpack(L), L == kh + lm_k[g]))
        kept = []
        for idx, (g, L, pL, coprime) in enumerate(cands):
            if coprime:
                kept.append((g, L, pL, True))
                continue
            redundant = False
            for _, _, pL2, _ in cands[idx + 1:]:
                if pk.divides(pL2, pL):
                    redundant = True
                    break
            if not redundant:
                for _, _, pL2, _ in kept:
                    if pk.divides(pL2, pL):
                        redundant = True
                        break
            if not redundant:
                kept.append((g, L, pL, False))

        for key, L in list(self.live.items()):
            g1, g2 = key
            pL = pk.unpack(L)
            if pk.divides(ph, pL):
                if pk.lcm(lm_p[g1], ph) != L and pk.lcm(lm_p[g2], ph) != L:
                    del self.live[key]

        for g, L, _, coprime in kept:
            if not coprime:
                self.seq += 1
                self.live[(g, h)] = L
                heapq.heappush(self.pairs, (L, self.seq, g, h))

        self.active = [g for g in self.active if not pk.divides(ph, lm_p[g])]
        self.active.append(h)
        return h

    def run(self, inputs: list, stop_on_unit: bool) -> bool:
        """Complete the basis; returns True if a nonzero constant appeared."""
        for f in sorted(inputs, key=lambda t: t[0][0]):
            self.poll()
            r = self.reduce(f)
            if not r:
                continue
            if r[0][0] == 0:
                self.add(r)
                if stop_on_unit:
                    return True
                continue
            self.add(r)
        while self.pairs:
            self.poll()
            L, _, i, j = heapq.heappop(self.pairs)
            if self.live.pop((i, j), None) is None:
                continue
            r = self.reduce(self.spoly(i, j, L))
            if not r:
                continue
            self.add(r)
            if r[0][0] == 0 and stop_on_unit:
                return True
        return any(self.lm_k[g] == 0 for g in self.active)

    def reduced_basis(self) -> list:
        active = list(self.active)
        if any(self.lm_k[g] == 0 for g in active):
            return [[(0, 1)]]
        out = []
        for g in active:
            others = [h for h in active if h != g]
            out.append(self.reduce(self.polys[g], among=others))
        out.sort(key=lambda t: t[0][0])
        return out


def _prepare(F: Sequence[Polynomial], order: TermOrder):
    F = [f for f in F if not f.is_zero()]
    missing = variables_of(F) - set(order.priority)
    if missing:
        raise ValueError(f"term order does not rank variables {sorted(missing)}")
    packer = _Packed(order.priority)
    return packer, [packer.from_poly(f) for f in F]


def groebner_basis(
    F: Sequence[Polynomial], order: TermOrder, deadline: Deadline | None = None
) -> list:
    """Reduced Groebner basis of the ideal generated by F.

    Basis elements are monic, sorted by increasing leading monomial.
    Raises TimedOut if the deadline expires; partial work is discarded.
    """
    packer, polys = _prepare(F, order)
    if not polys:
        raise ValueError("generator list is empty after dropping zeros")
    eng = _Engine(packer, deadline)
    eng.run(polys, stop_on_unit=False)
    return [packer.to_poly(t) for t in eng.reduced_basis()]


@dataclass
class UnitCheck:
    result: Membership
    basis_size: int = 0
    reductions: int = 0


def unit_check(
    F: Sequence[Polynomial], order: TermOrder, deadline: Deadline | None = None
) -> UnitCheck:
    """Decide whether 1 lies in the ideal of F, with diagnostics.

    Stops as soon as a nonzero constant is produced.
    """
    packer, polys = _prepare(F, order)
    if not polys:
        return UnitCheck(Membership.NO)
    eng = _Engine(packer, deadline)
    try:
        unit = eng.run(polys, stop_on_unit=True)
    except TimedOut:
        return UnitCheck(Membership.TIMED_OUT, len(eng.active), eng.reductions)
    return UnitCheck(Membership.YES if unit else Membership.NO, len(eng.active), eng.reductions)


def contains_one(
    F: Sequence[Polynomial], order: TermOrder, deadline: Deadline | None = None
) -> Membership:
    return unit_check(F, order, deadline).result

"""Randomised checks of the Groebner engine against independent oracles.

* Completed bases must satisfy Buchberger's criterion and contain the inputs;
  they must also coincide with sympy's reduced basis.
* contains_one is compared with a certificate search: 1 lies in the ideal
  iff it is a linear combination of the products m*f_i up to the effective
  Nullstellensatz degree bound (max(3, d)^n; 9 for two variables of degree 2).
"""

import itertools
import random
from fractions import Fraction

import pytest
import sympy

from geodiscover.poly import Membership, Polynomial, TermOrder, contains_one, groebner_basis, normal_form, s_polynomial
from geodiscover.poly.polynomial import mono_divides

SEED = 20240611
GB_CASES = 200


def random_polynomial(rng, nvars, max_deg, max_terms):
    p = Polynomial()
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * nvars
        for _ in range(rng.randint(0, max_deg)):
            exps[rng.randrange(nvars)] += 1
        mono = Polynomial.constant(rng.choice([c for c in range(-5, 6) if c]))
        for v, e in enumerate(exps):
            mono = mono * Polynomial.var(v) ** e
        p = p + mono
    return p


def generator_sets():
    rng = random.Random(SEED)
    out = []
    while len(out) < GB_CASES:
        nvars = rng.randint(1, 3)
        F = [random_polynomial(rng, nvars, 3, 4) for _ in range(rng.randint(1, 3))]
        F = [f for f in F if not f.is_zero()]
        if F:
            out.append((nvars, F))
    return out


def to_sympy(p, gens):
    expr = 0
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in mono:
            term *= gens[v] ** e
        expr += term
    return expr


CASES = generator_sets()


@pytest.mark.parametrize("case", range(GB_CASES))
def test_random_basis_is_groebner(case):
    nvars, F = CASES[case]
    order = TermOrder(tuple(range(nvars)))
    B = groebner_basis(F, order)
    for p, q in itertools.combinations(B, 2):
        assert normal_form(s_polynomial(p, q, order), B, order).is_zero()
    for f in F:
        assert normal_form(f, B, order).is_zero()
    leads = [order.leading_monomial(g) for g in B]
    for g, lm in zip(B, leads):
        assert g.terms[lm] == 1
        others = [m for m in leads if m != lm]
        assert not any(mono_divides(o, m) for o in others for m in g.terms)

    gens = sympy.symbols(f"v0:{nvars}")
    expected = sympy.groebner([to_sympy(f, gens) for f in F], *gens, order="grevlex")
    ours = {sympy.expand(sympy.Poly(to_sympy(g, gens), *gens).monic().as_expr()) for g in B}
    theirs = {sympy.expand(sympy.Poly(e, *gens).monic().as_expr()) for e in expected.exprs}
    assert ours == theirs


# -- contains_one versus a Nullstellensatz certificate search --


def _monomials(max_deg):
    return [(i, d - i) for d in range(max_deg + 1) for i in range(d + 1)]


def _poly_dict(p):
    out = {}
    for mono, c in p.terms.items():
        e = dict(mono)
        out[(e.get(0, 0), e.get(1, 0))] = c
    return out


def one_in_span(F, bound=9):
    """Is 1 a Q-linear combination of m*f (deg(m*f) <= bound)?  Exact elimination."""
    columns = {m: k for k, m in enumerate(_monomials(bound))}
    rows = []
    for f in F:
        fd = _poly_dict(f)
        deg = max(a + b for a, b in fd)
        for ma, mb in _monomials(bound - deg):
            row = {}
            for (a, b), c in fd.items():
                row[columns[(a + ma, b + mb)]] = c
            rows.append(row)
    # echelon form with pivot columns chosen from the highest index down
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            col = max(row)
            if col not in pivots:
                lead = row[col]
                pivots[col] = {k: v / lead for k, v in row.items()}
                break
            prow = pivots[col]
            factor = row[col]
            for k, v in prow.items():
                nv = row.get(k, 0) - factor * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    # reduce the target vector e_0 (the constant monomial) by the pivots
    target = {columns[(0, 0)]: Fraction(1)}
    while target:
        col = max(target)
        if col not in pivots:
            return False
        factor = target[col]
        for k, v in pivots[col].items():
            nv = target.get(k, 0) - factor * v
            if nv:
                target[k] = nv
            else:
                target.pop(k, None)
    return True


def membership_cases():
    rng = random.Random(SEED + 1)
    xs, ys = Polynomial.var(0), Polynomial.var(1)
    out = []
    for k in range(60):
        count = rng.randint(1, 3)
        F = [random_polynomial(rng, 2, 2, 3) for _ in range(count)]
        if k % 3 == 0:
            # plant a common rational zero so "No" cases are well represented
            a, b = rng.randint(-2, 2), rng.randint(-2, 2)
            F = [f - f.evaluate({0: a, 1: b}) for f in F]
        F = [f for f in F if not f.is_zero()]
        if k % 5 == 0:
            F.append(xs * ys - 1)
        if F:
            out.append(F)
    return out


MEMBERSHIP = membership_cases()


def test_membership_cases_cover_both_answers():
    answers = {one_in_span(F) for F in MEMBERSHIP}
    assert answers == {True, False}


@pytest.mark.parametrize("case", range(len(MEMBERSHIP)))
def test_contains_one_matches_certificate_search(case):
    F = MEMBERSHIP[case]
    got = contains_one(F, TermOrder((0, 1)))
    assert got is not Membership.TIMED_OUT
    assert (got is Membership.YES) == one_in_span(F)

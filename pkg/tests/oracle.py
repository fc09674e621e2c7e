"""Independent sympy evaluation of series, used to cross-check the exact engine."""

from __future__ import annotations

import sympy

from fibersum.lattice import pair
from fibersum.series import DSeries, GaussianRational


def to_sympy_number(z: GaussianRational):
    return sympy.Rational(z.re.numerator, z.re.denominator) + \
        sympy.I * sympy.Rational(z.im.numerator, z.im.denominator)


def as_expression(s: DSeries, directions):
    """``s(sum t_i A_i)`` as a closed-form sympy expression in symbols named after the directions."""
    syms = [sympy.Symbol(n) for n, _ in directions]
    point_sq = 0
    for (_, a), x in zip(directions, syms):
        for (_, b), y in zip(directions, syms):
            point_sq += sympy.Rational(pair(a, b).numerator, pair(a, b).denominator) * x * y
    total = sympy.Integer(0)
    for t in s.terms:
        lam = 0
        for (_, A), x in zip(directions, syms):
            cov = A.covector()
            lam += sum(to_sympy_number(f) * sympy.Rational(c.numerator, c.denominator)
                       for f, c in zip(t.freq, cov)) * x
        q = sympy.Rational(t.q.numerator, t.q.denominator)
        total += to_sympy_number(t.coeff) * sympy.exp(q * point_sq + lam)
    return total, syms


def taylor(expr, syms, degree):
    """Map exponent tuple -> non-zero Taylor coefficient, through total degree ``degree``.

    Coefficients come from partial derivatives at the origin, which keeps
    sympy away from multivariate series expansion.
    """
    from itertools import product

    out = {}
    at_zero = {x: 0 for x in syms}
    for k in product(range(degree + 1), repeat=len(syms)):
        if sum(k) > degree:
            continue
        d = expr
        for x, n in zip(syms, k):
            if n:
                d = sympy.diff(d, x, n)
        v = d.subs(at_zero)
        for n in k:
            v /= sympy.factorial(n)
        v = sympy.expand(v)
        if v != 0:
            out[k] = v
    return out


def table_as_sympy(table):
    return {k: sympy.expand(to_sympy_number(v)) for k, v in table.coefficients.items()}

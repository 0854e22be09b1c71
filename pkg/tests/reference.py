"""Independent reference computations used only by the tests.

The characteristic polynomial is rebuilt from scratch in exact arithmetic:
``F_i = (1/m) df/dx_i - lam x_i^(m-1)`` comes from differentiating the form
symbolically, and the resultant of the two binary forms is the determinant
of their Sylvester matrix with formal degree ``m - 1``. Nothing here calls
into the library's oracle.
"""

from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
import sympy as sp

LAM, X1, X2 = sp.symbols("lam x1 x2")


def form(m, entries):
    """``f(x) = sum over all raw index tuples of a * x_i1 ... x_im``."""
    f = 0
    for raw in product((1, 2), repeat=m):
        value = entries.get(tuple(sorted(raw)), 0)
        if value:
            term = sp.Rational(str(value)) if isinstance(value, float) else sp.Rational(value)
            f += term * sp.Mul(*[X1 if i == 1 else X2 for i in raw])
    return sp.expand(f)


def _coefficients(g, m):
    """Coefficients of the binary form ``g`` of degree ``m - 1``, highest power of x1 first."""
    p = sp.Poly(g, X1, X2)
    return [p.coeff_monomial(X1 ** (m - 1 - j) * X2**j) for j in range(m)]


def sylvester(f_coeffs, g_coeffs):
    p, q = len(f_coeffs) - 1, len(g_coeffs) - 1
    size = p + q
    rows = []
    for r in range(q):
        rows.append([0] * r + list(f_coeffs) + [0] * (size - p - 1 - r))
    for r in range(p):
        rows.append([0] * r + list(g_coeffs) + [0] * (size - q - 1 - r))
    return sp.Matrix(rows)


def charpoly_exact(m, entries):
    """Monic characteristic polynomial as a sympy ``Poly`` in ``lam``."""
    f = form(m, entries)
    f1 = sp.expand(sp.diff(f, X1) / m - LAM * X1 ** (m - 1))
    f2 = sp.expand(sp.diff(f, X2) / m - LAM * X2 ** (m - 1))
    res = sylvester(_coefficients(f1, m), _coefficients(f2, m)).det(method="berkowitz")
    poly = sp.Poly(sp.expand(res), LAM)
    return sp.Poly(poly / poly.LC(), LAM)


def charpoly_coeffs(m, entries):
    """Float coefficients, constant term first."""
    return np.array([float(c) for c in reversed(charpoly_exact(m, entries).all_coeffs())])


def fraction_det(rows):
    """Cofactor expansion over ``Fraction``; fine for the small matrices used here."""
    rows = [[Fraction(x) for x in r] for r in rows]
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * fraction_det(minor)
    return total


def dense(t):
    """Full ``n^m`` array of a tensor, filled from its orbit values."""
    shape = (t.dimension,) * t.order
    out = np.zeros(shape)
    for raw in product(range(t.dimension), repeat=t.order):
        out[raw] = t[tuple(i + 1 for i in raw)]
    return out


def dense_apply(a, x):
    """``A x^{m-1}`` by repeated contraction of the last axis."""
    for _ in range(a.ndim - 1):
        a = a @ x
    return a


def binomial_rows(m):
    return [comb(m - 1, j) for j in range(m)]

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trinitymaps.intpoly import (
    IntPoly,
    PolynomialError,
    cyclotomic,
    euler_phi,
    real_cyclotomic,
    resultant,
)
from trinitymaps.norm import is_prime


def sylvester_det(f: IntPoly, g: IntPoly) -> Fraction:
    """Resultant oracle: Sylvester determinant by Fraction elimination."""
    m, n = f.degree, g.degree
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(f.coeffs)):
            row[i + j] = Fraction(c)
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(g.coeffs)):
            row[i + j] = Fraction(c)
        rows.append(row)
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] / rows[col][col]
            for c in range(col, size):
                rows[r][c] -= factor * rows[col][c]
    return det


def float_resultant(f: IntPoly, g: IntPoly) -> complex:
    roots = np.roots(list(reversed(f.coeffs)))
    return f.lc ** g.degree * np.prod([g(complex(r)) for r in roots])


def naive_real_expansion(psi: IntPoly) -> IntPoly:
    r = psi.degree
    y2p1 = IntPoly([1, 0, 1])
    out = IntPoly()
    for j, a in enumerate(psi.coeffs):
        out = out + a * IntPoly.monomial(r - j) * y2p1**j
    return out


def test_cyclotomic_examples():
    assert cyclotomic(5) == IntPoly([1, 1, 1, 1, 1])
    assert cyclotomic(1) == IntPoly([-1, 1])
    assert cyclotomic(9) == IntPoly([1, 0, 0, 1, 0, 0, 1])


def test_cyclotomic_product_over_divisors():
    for k in (12, 30, 45, 64):
        prod = IntPoly([1])
        for d in range(1, k + 1):
            if k % d == 0:
                prod = prod * cyclotomic(d)
        assert prod == IntPoly.monomial(k) - 1


def test_cyclotomic_rejects_zero():
    with pytest.raises(ValueError):
        cyclotomic(0)


@pytest.mark.parametrize(
    "k, coeffs",
    [(3, [1, 1]), (5, [-1, 1, 1]), (9, [1, -3, 0, 1])],
)
def test_real_cyclotomic_examples(k, coeffs):
    assert real_cyclotomic(k) == IntPoly(coeffs)


@pytest.mark.parametrize("k", [3, 5, 7, 9, 11, 15, 21, 25, 29])
def test_real_cyclotomic_matches_float_roots(k):
    roots = [2 * math.cos(2 * math.pi * t / k) for t in range(1, (k + 1) // 2) if math.gcd(t, k) == 1]
    expected = np.rint(np.poly(roots)[::-1]).astype(int).tolist()
    assert list(real_cyclotomic(k).coeffs) == expected


def test_phi_psi_identity_3_to_200():
    for k in range(3, 201):
        psi = real_cyclotomic(k)
        assert psi.degree == euler_phi(k) // 2
        assert psi.lc == 1
        assert naive_real_expansion(psi) == cyclotomic(k)


def test_prime_k_coefficient_facts():
    for k in range(5, 200):
        if is_prime(k):
            psi = real_cyclotomic(k)
            r = psi.degree
            assert psi[r - 1] == 1
            assert psi[0] in (1, -1)


def test_resultant_linear_convention():
    # lc(f)^deg g * g(1) = 1 - 2
    assert resultant(IntPoly([-1, 1]), IntPoly([-2, 1])) == -1


@pytest.mark.parametrize("k, expected", [(5, 121), (7, 169)])
def test_resultant_cyclotomic_examples(k, expected):
    f, g = cyclotomic(k), IntPoly([3, 2, 3])
    approx = float_resultant(f, g)
    assert abs(approx - expected) < 1e-6
    assert resultant(f, g) == expected


def test_resultant_zero_input():
    with pytest.raises(PolynomialError):
        resultant(IntPoly(), IntPoly([1, 1]))


small_polys = st.lists(st.integers(-6, 6), min_size=1, max_size=7).map(IntPoly).filter(
    lambda p: not p.is_zero()
)


@settings(max_examples=300, deadline=None)
@given(small_polys, small_polys)
def test_resultant_matches_sylvester(f, g):
    if f.degree + g.degree == 0:
        assert resultant(f, g) == 1
        return
    assert resultant(f, g) == sylvester_det(f, g)


@settings(max_examples=200, deadline=None)
@given(small_polys, small_polys)
def test_resultant_swap_sign(f, g):
    assert resultant(f, g) == (-1) ** (f.degree * g.degree) * resultant(g, f)


@given(small_polys, small_polys, st.integers(-5, 5))
def test_ring_operations_evaluate(f, g, y):
    assert (f * g)(y) == f(y) * g(y)
    assert (f - g)(y) == f(y) - g(y)


def test_pseudo_remainder_identity():
    f = IntPoly([5, -3, 0, 2, 7])
    g = IntPoly([1, 0, 3])
    r = f.pseudo_remainder(g)
    assert r.degree < g.degree
    # lc(g)^(deg f - deg g + 1) f - r is divisible by g over Z
    scaled = f * g.lc ** (f.degree - g.degree + 1) - r
    roots = np.roots(list(reversed(g.coeffs)))
    for z in roots:
        assert abs(scaled(complex(z))) < 1e-8

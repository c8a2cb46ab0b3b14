"""Exact dense polynomials over the integers.

Coefficients are Python ints stored lowest degree first, so ``IntPoly((1, 0, 2))``
is ``1 + 2*y**2``.  Nothing in here touches floating point.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Sequence


class PolynomialError(ArithmeticError):
    """Raised on an invalid polynomial operation (zero input, inexact division)."""


class IntPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPoly:
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == IntPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for j in range(self.degree, -1, -1):
            a = self.coeffs[j]
            if a == 0:
                continue
            mag = abs(a)
            if j == 0:
                body = str(mag)
            else:
                var = "x" if j == 1 else f"x^{j}"
                body = var if mag == 1 else f"{mag}*{var}"
            sign = "-" if a < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self) -> IntPoly:
        return IntPoly(-a for a in self.coeffs)

    def __add__(self, other: IntPoly | int) -> IntPoly:
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[j] + other[j] for j in range(n))

    __radd__ = __add__

    def __sub__(self, other: IntPoly | int) -> IntPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> IntPoly:
        return _coerce(other) - self

    def __mul__(self, other: IntPoly | int) -> IntPoly:
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> IntPoly:
        if e < 0:
            raise PolynomialError("negative power")
        result, base = IntPoly([1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, y):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * y + a
        return acc

    def content(self) -> int:
        g = 0
        for a in self.coeffs:
            g = gcd(g, a)
        return g

    def exact_div_scalar(self, c: int) -> IntPoly:
        out = []
        for a in self.coeffs:
            q, r = divmod(a, c)
            if r:
                raise PolynomialError(f"{self} is not divisible by {c}")
            out.append(q)
        return IntPoly(out)

    def divmod_monic(self, divisor: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Quotient and remainder by a divisor with leading coefficient +-1."""
        if divisor.is_zero():
            raise PolynomialError("division by the zero polynomial")
        if abs(divisor.lc) != 1:
            raise PolynomialError("divisor must have leading coefficient +-1")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPoly(), IntPoly(rem)
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1 - dd, -1, -1):
            q = rem[i + dd] * divisor.lc
            quot[i] = q
            if q:
                for j, b in enumerate(divisor.coeffs):
                    rem[i + j] -= q * b
        return IntPoly(quot), IntPoly(rem[:dd])

    def pseudo_remainder(self, divisor: IntPoly) -> IntPoly:
        """``lc(divisor)**(deg self - deg divisor + 1) * self`` reduced mod ``divisor``."""
        if divisor.is_zero():
            raise PolynomialError("division by the zero polynomial")
        rem = list(self.coeffs)
        dd, lc = divisor.degree, divisor.lc
        delta = len(rem) - 1 - dd
        if delta < 0:
            return IntPoly(rem)
        for i in range(len(rem) - 1 - dd, -1, -1):
            top = rem[i + dd]
            rem = [lc * a for a in rem]
            for j, b in enumerate(divisor.coeffs):
                rem[i + j] -= top * b
        return IntPoly(rem[:dd])


def _coerce(x: IntPoly | int) -> IntPoly:
    return x if isinstance(x, IntPoly) else IntPoly([x])


def euler_phi(k: int) -> int:
    result, m, q = k, k, 2
    while q * q <= m:
        if m % q == 0:
            while m % q == 0:
                m //= q
            result -= result // q
        q += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> IntPoly:
    """The k-th cyclotomic polynomial, by exact division of ``y**k - 1``."""
    if k < 1:
        raise ValueError(f"cyclotomic index must be >= 1, got {k}")
    num = IntPoly.monomial(k) - 1
    for d in range(1, k):
        if k % d == 0:
            num, rem = num.divmod_monic(cyclotomic(d))
            if not rem.is_zero():
                raise PolynomialError(f"inexact division building Phi_{k}")
    return num


@lru_cache(maxsize=None)
def real_cyclotomic(k: int) -> IntPoly:
    """Minimal polynomial of ``2*cos(2*pi/k)``.

    Solves ``Phi_k(y) = y**r * Psi(y + 1/y)`` for the coefficients of ``Psi``,
    from the top degree down.  Writing ``y**r * (y + 1/y)**j = y**(r-j) (y**2 + 1)**j``,
    coefficient ``a_j`` is the only unknown contributing to ``y**(r+j)`` once
    ``a_{j+1}, ..., a_r`` are fixed.
    """
    if k < 3:
        raise ValueError(f"real cyclotomic index must be >= 3, got {k}")
    phi = cyclotomic(k)
    r = phi.degree // 2
    a = [0] * (r + 1)
    for j in range(r, -1, -1):
        acc = phi[r + j]
        for jj in range(j + 2, r + 1, 2):
            acc -= a[jj] * comb(jj, (jj + j) // 2)
        a[j] = acc
    psi = IntPoly(a)
    if expand_real(psi) != phi:
        raise PolynomialError(f"coefficient matching for Psi_{k} left a residue")
    return psi


def expand_real(psi: IntPoly) -> IntPoly:
    """``y**deg(psi) * psi(y + 1/y)`` as an ordinary polynomial in y."""
    r = psi.degree
    out = [0] * (2 * r + 1)
    for j, aj in enumerate(psi.coeffs):
        if aj:
            for i in range(j + 1):
                out[r - j + 2 * i] += aj * comb(j, i)
    return IntPoly(out)


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Resultant ``lc(f)**deg(g) * prod g(b)`` over the roots b of f.

    This is the Sylvester-matrix resultant, computed by the subresultant
    pseudo-remainder sequence (Cohen, Algorithm 3.3.7) in exact integers.
    """
    if f.is_zero() or g.is_zero():
        raise PolynomialError("resultant of a zero polynomial")
    a, b = f, g
    ca, cb = a.content(), b.content()
    a, b = a.exact_div_scalar(ca), b.exact_div_scalar(cb)
    t = ca ** b.degree * cb ** a.degree
    s = 1
    if a.degree < b.degree:
        a, b = b, a
        if a.degree % 2 and b.degree % 2:
            s = -1
    gg, h = 1, 1
    while b.degree > 0:
        delta = a.degree - b.degree
        if a.degree % 2 and b.degree % 2:
            s = -s
        rem = a.pseudo_remainder(b)
        a = b
        b = rem.exact_div_scalar(gg * h**delta)
        gg = a.lc
        # h <- h^(1-delta) * g^delta, exact
        if delta:
            num = gg**delta
            den = h ** (delta - 1)
            q, r = divmod(num, den)
            if r:
                raise PolynomialError("inexact subresultant scaling")
            h = q
        if b.is_zero():
            return 0
    da = a.degree
    if da == 0:
        return s * t * h
    lb = b.lc
    num = lb**da
    if da > 1:
        den = h ** (da - 1)
        q, r = divmod(num, den)
        if r:
            raise PolynomialError("inexact subresultant scaling")
        h = q
    else:
        h = num
    return s * t * h

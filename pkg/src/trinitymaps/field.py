"""GF(p) and GF(p^2) arithmetic on integer-encoded elements.

An element ``a0 + a1*t`` (with ``t**2 = nu``, nu the smallest quadratic
nonresidue mod p) is encoded as the int ``a0 + a1*p``.  In GF(p) the encoding
is simply the residue.  Contexts are immutable; all functions are pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

from .norm import InputError, VerificationError, factorize, is_prime


class FieldElem(NamedTuple):
    a0: int
    a1: int = 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) via Euler's criterion, in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def smallest_nonresidue(p: int) -> int:
    a = 2
    while legendre(a, p) != -1:
        a += 1
    return a


@dataclass(frozen=True)
class FieldCtx:
    p: int
    degree: int = 1
    nonresidue: Optional[int] = None

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise InputError(f"field characteristic must be an odd prime, got {self.p}")
        if self.degree not in (1, 2):
            raise InputError(f"only GF(p) and GF(p^2) are supported, got degree {self.degree}")
        if self.degree == 2:
            if self.nonresidue is None:
                object.__setattr__(self, "nonresidue", smallest_nonresidue(self.p))
            elif legendre(self.nonresidue, self.p) != -1:
                raise InputError(f"{self.nonresidue} is a square mod {self.p}")
        elif self.nonresidue is not None:
            raise InputError("a prime field carries no nonresidue")

    @classmethod
    def prime(cls, p: int) -> FieldCtx:
        return cls(p, 1)

    @classmethod
    def quadratic(cls, p: int) -> FieldCtx:
        return cls(p, 2)

    @property
    def q(self) -> int:
        return self.p**self.degree

    def describe(self) -> str:
        if self.degree == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^2) = GF({self.p})[t]/(t^2 - {self.nonresidue})"

    # encoding

    def encode(self, a0: int, a1: int = 0) -> int:
        if self.degree == 1 and a1 % self.p:
            raise InputError("nonzero t-coefficient in a prime field")
        return a0 % self.p + (a1 % self.p) * self.p

    def decode(self, x: int) -> FieldElem:
        a1, a0 = divmod(x, self.p)
        return FieldElem(a0, a1)

    def from_int(self, n: int) -> int:
        return n % self.p

    def in_prime_field(self, x: int) -> bool:
        return x < self.p

    # arithmetic

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.degree == 1:
            return (a + b) % p
        a1, a0 = divmod(a, p)
        b1, b0 = divmod(b, p)
        return (a0 + b0) % p + (a1 + b1) % p * p

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        p = self.p
        if self.degree == 1:
            return -a % p
        a1, a0 = divmod(a, p)
        return -a0 % p + (-a1 % p) * p

    def mul(self, a: int, b: int) -> int:
        p = self.p
        if self.degree == 1:
            return a * b % p
        a1, a0 = divmod(a, p)
        b1, b0 = divmod(b, p)
        return (a0 * b0 + self.nonresidue * a1 * b1) % p + (a0 * b1 + a1 * b0) % p * p

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.p
        if self.degree == 1:
            return pow(a, p - 2, p)
        a1, a0 = divmod(a, p)
        n = pow((a0 * a0 - self.nonresidue * a1 * a1) % p, p - 2, p)
        return a0 * n % p + (-a1 * n % p) * p

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.degree == 1:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def is_square(self, a: int) -> bool:
        return a == 0 or self.pow(a, (self.q - 1) // 2) == 1


def sqrt_mod(a: int, ctx: FieldCtx) -> Optional[int]:
    """A square root of ``a`` in the field, or None for a nonsquare.

    Tonelli-Shanks in the cyclic group of order q - 1; the auxiliary nonsquare is
    the one with the smallest encoding, so results are reproducible.
    """
    if a == 0:
        return 0
    if not ctx.is_square(a):
        return None
    q = ctx.q
    s, odd = 0, q - 1
    while odd % 2 == 0:
        odd //= 2
        s += 1
    z = _smallest_nonsquare(ctx)
    m, c = s, ctx.pow(z, odd)
    t, r = ctx.pow(a, odd), ctx.pow(a, (odd + 1) // 2)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = ctx.mul(t2, t2)
            i += 1
        b = ctx.pow(c, 1 << (m - i - 1))
        m, c = i, ctx.mul(b, b)
        t, r = ctx.mul(t, c), ctx.mul(r, b)
    return r


@lru_cache(maxsize=None)
def _smallest_nonsquare(ctx: FieldCtx) -> int:
    for z in range(2, ctx.q):
        if not ctx.is_square(z):
            return z
    raise VerificationError(f"no nonsquare in {ctx.describe()}")


@lru_cache(maxsize=None)
def _group_order_factors(q: int) -> tuple[int, ...]:
    return tuple(r for r, _ in factorize(q - 1)) if q > 2 else ()


def element_order(a: int, ctx: FieldCtx) -> int:
    """Multiplicative order, by stripping prime factors of q - 1."""
    if a == 0:
        raise InputError("zero has no multiplicative order")
    order = ctx.q - 1
    for r in _group_order_factors(ctx.q):
        while order % r == 0 and ctx.pow(a, order // r) == 1:
            order //= r
    return order


def find_zeta(k: int, p: int) -> tuple[int, FieldCtx]:
    """Root of ``3z**2 + 2z + 3`` of multiplicative order k, in GF(p) or GF(p^2).

    The two roots are mutually inverse, so either satisfies ``3(z + 1/z) + 2 = 0``.
    Returns the root with the smaller encoding.
    """
    if k < 5 or k % 2 == 0:
        raise InputError(f"k must be odd and >= 5, got {k}")
    r2k = p % (2 * k)
    if r2k == 1:
        ctx = FieldCtx.prime(p)
    elif r2k == 2 * k - 1:
        ctx = FieldCtx.quadratic(p)
    else:
        raise VerificationError(f"p={p} is not +-1 mod {2 * k}")
    disc = ctx.from_int(2**2 - 4 * 3 * 3)
    base = FieldCtx.prime(p)
    # -32 is a square in GF(p) exactly when the roots lie in GF(p).
    if base.is_square(disc) != (ctx.degree == 1):
        raise VerificationError(
            f"discriminant of 3z^2+2z+3 mod {p} disagrees with p = {r2k} mod {2 * k}"
        )
    root = sqrt_mod(disc, ctx)
    if root is None:
        raise VerificationError(f"discriminant has no square root in {ctx.describe()}")
    inv6 = ctx.inv(ctx.from_int(6))
    minus2 = ctx.from_int(-2)
    roots = sorted(
        ctx.mul(ctx.add(minus2, sgn), inv6) for sgn in (root, ctx.neg(root))
    )
    zeta = roots[0]
    three = ctx.from_int(3)
    for z in roots:
        val = ctx.add(ctx.mul(three, ctx.add(z, ctx.inv(z))), ctx.from_int(2))
        if val != 0:
            raise VerificationError(f"root {ctx.decode(z)} fails 3(z+1/z)+2=0")
        if element_order(z, ctx) != k:
            raise VerificationError(
                f"root {ctx.decode(z)} has order {element_order(z, ctx)}, expected {k}"
            )
    if ctx.mul(roots[0], roots[1]) != 1:
        raise VerificationError("the two roots are not mutually inverse")
    return zeta, ctx


def xi_from_zeta(zeta: int, k: int, ctx: FieldCtx) -> int:
    """The square root ``-zeta**((k+1)/2)`` of zeta, a primitive 2k-th root of unity."""
    if k % 2 == 0:
        raise InputError("k must be odd")
    if zeta == 0 or element_order(zeta, ctx) != k:
        raise VerificationError(f"zeta={ctx.decode(zeta)} is not a primitive {k}-th root of unity")
    xi = ctx.neg(ctx.pow(zeta, (k + 1) // 2))
    if ctx.mul(xi, xi) != zeta:
        raise VerificationError("xi^2 != zeta")
    if element_order(xi, ctx) != 2 * k:
        raise VerificationError(f"xi has order {element_order(xi, ctx)}, expected {2 * k}")
    return xi

"""Norm of ``g = 3h + 2`` in the real cyclotomic ring, and the prime search.

``h = a + 1/a`` for a primitive complex k-th root of unity ``a``; its conjugates
are the roots of :func:`~trinitymaps.intpoly.real_cyclotomic`.  Every quantity in
this module is an exact integer.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .intpoly import IntPoly, real_cyclotomic

log = logging.getLogger(__name__)

#: Miller-Rabin with these bases is deterministic below 3.3e24 (and so for all n < 2**64).
DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
#: Extra fixed witnesses used beyond 2**64, where the answer is "probable prime".
EXTRA_BASES = (41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
DETERMINISTIC_LIMIT = 2**64
TRIAL_DIVISION_LIMIT = 10**6


class InputError(ValueError):
    """Invalid argument to a number-theoretic routine."""


class VerificationError(AssertionError):
    """A property the construction guarantees did not hold."""


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    n = TRIAL_DIVISION_LIMIT
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i in range(n + 1) if sieve[i])


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality: deterministic below 2**64, fixed-witness probable prime above."""
    if n < 2:
        return False
    for q in DETERMINISTIC_BASES:
        if n % q == 0:
            return n == q
    if n < DETERMINISTIC_LIMIT:
        return _miller_rabin(n, DETERMINISTIC_BASES)
    return _miller_rabin(n, DETERMINISTIC_BASES + EXTRA_BASES)


def is_proven_prime(n: int) -> bool:
    return n < DETERMINISTIC_LIMIT and is_prime(n)


def _pollard_brent(n: int, seed: int = 1) -> int:
    """A nontrivial factor of the odd composite n (Brent's cycle detection)."""
    rng = random.Random(seed)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``|n|`` as a sorted list of (prime, exponent)."""
    n = abs(int(n))
    if n < 2:
        raise InputError(f"cannot factorize {n}: need |n| >= 2")
    counts: dict[int, int] = {}
    for q in _small_primes():
        if q * q > n:
            break
        while n % q == 0:
            counts[q] = counts.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack += [root, root]
            continue
        d = _pollard_brent(m)
        stack += [d, m // d]
    return sorted(counts.items())


def format_factorization(factors: list[tuple[int, int]]) -> str:
    if len(factors) == 1 and factors[0][1] == 1:
        return "prime"
    return " x ".join(str(q) if e == 1 else f"{q}^{e}" for q, e in factors)


def norm_g(k: int) -> int:
    """Norm of ``3h + 2``: ``sum_j (-3)**(r-j) * 2**j * a_j`` over the coefficients of Psi_k."""
    if k < 3 or k % 2 == 0:
        raise InputError(f"k must be odd and >= 3, got {k}")
    psi = real_cyclotomic(k)
    r = psi.degree
    return sum((-3) ** (r - j) * 2**j * a for j, a in enumerate(psi.coeffs))


def _require_odd_prime_k(k: int) -> None:
    if k < 5 or not is_prime(k):
        raise InputError(f"k must be an odd prime >= 5, got {k}")


def norm_mod9_check(k: int) -> bool:
    """Compare ``N(g) mod 9`` with ``2**r - 3 * 2**(r-1) * a_{r-1}``.

    For prime k this also checks the specialised form ``-2**((k-3)/2) mod 9``.
    """
    _require_odd_prime_k(k)
    psi = real_cyclotomic(k)
    r = psi.degree
    n = norm_g(k) % 9
    general = (2**r - 3 * 2 ** (r - 1) * psi[r - 1]) % 9
    special = (-(2 ** ((k - 3) // 2))) % 9
    return n == general == special


def unit_check(k: int) -> bool:
    """True iff N(g) is not 0 or +-1 and is prime to 6 (g is a non-unit, no factor 2 or 3)."""
    _require_odd_prime_k(k)
    n = norm_g(k)
    return n not in (0, 1, -1) and math.gcd(n, 6) == 1


@dataclass(frozen=True)
class AdmissiblePrime:
    p: int
    residue_2k: int
    residue_12: int
    epsilon: int
    passes: bool = True
    proven: bool = True

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "residue_2k": self.residue_2k,
            "residue_12": self.residue_12,
            "epsilon": self.epsilon,
            "passes": self.passes,
            "proven_prime": self.proven,
        }


def congruence_ok(p: int, k: int) -> bool:
    return p >= 5 and p % (2 * k) in (1, 2 * k - 1) and p % 12 in (1, 11) and p != k


def classify_prime(p: int, k: int) -> AdmissiblePrime:
    r2k = p % (2 * k)
    eps = 1 if r2k == 1 else -1 if r2k == 2 * k - 1 else 0
    return AdmissiblePrime(
        p=p,
        residue_2k=r2k,
        residue_12=p % 12,
        epsilon=eps,
        passes=congruence_ok(p, k),
        proven=is_proven_prime(p),
    )


def admissible_primes(k: int) -> list[AdmissiblePrime]:
    """Prime factors of N(g), each classified against the congruences mod 2k and 12.

    For prime k every factor must pass (failure is a bug and raises).  For composite
    k the classification is reported as-is.  Failing factors are kept in the list
    with ``passes=False``; callers filter.
    """
    if k < 5 or k % 2 == 0:
        raise InputError(f"k must be odd and >= 5, got {k}")
    out = [classify_prime(q, k) for q, _ in factorize(norm_g(k))]
    if is_prime(k):
        bad = [a.p for a in out if not a.passes]
        if bad:
            raise VerificationError(f"prime factors {bad} of N(g) for k={k} fail the congruences")
    else:
        for a in out:
            if not a.passes:
                log.warning("k=%d: factor %d of N(g) fails the congruences", k, a.p)
    return out


def choose_prime(k: int, override: int | None = None) -> AdmissiblePrime:
    """Smallest passing prime factor of N(g), or the validated override."""
    cands = [a for a in admissible_primes(k) if a.passes]
    if override is not None:
        for a in cands:
            if a.p == override:
                return a
        raise InputError(f"{override} is not an admissible prime factor of N(g) for k={k}")
    if not cands:
        raise InputError(f"no admissible prime divides N(g) for k={k}")
    return cands[0]


@dataclass
class NormReport:
    k: int
    r: int
    psi: IntPoly
    N_g: int
    factorization: list[tuple[int, int]]
    admissible: list[AdmissiblePrime] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "r": self.r,
            "psi": [str(a) for a in self.psi.coeffs],
            "N_g": str(self.N_g),
            "factorization": [[str(q), e] for q, e in self.factorization],
            "admissible": [
                {key: (str(v) if key == "p" else v) for key, v in a.as_dict().items()}
                for a in self.admissible
            ],
        }


def norm_report(k: int) -> NormReport:
    psi = real_cyclotomic(k)
    n = norm_g(k)
    return NormReport(
        k=k,
        r=psi.degree,
        psi=psi,
        N_g=n,
        factorization=factorize(n),
        admissible=admissible_primes(k),
    )

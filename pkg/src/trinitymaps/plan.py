"""Decompose an odd valency m into a constructible base valency d and a lift factor n."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .norm import InputError, choose_prime, factorize
from .psl2 import psl_order


@dataclass(frozen=True)
class LiftPlan:
    m: int
    d: int
    n: int
    base_certificate_ref: str
    predicted_group: str
    base_prime: Optional[int] = None
    base_group_order: Optional[int] = None

    def as_dict(self) -> dict:
        return asdict(self)


def plan(m: int, resolve: bool = False) -> LiftPlan:
    """Base valency d (a prime >= 5, or 9) and odd n with ``m = d * n``.

    Prefers the largest prime factor >= 5 so that the lift factor is smallest.
    With ``resolve`` the base prime p is found (this factors N(g) for k = d,
    which is only practical for small d) and the group exponent is numeric.
    """
    if m < 5 or m % 2 == 0:
        if m == 3:
            raise InputError("valency 3 admits no map with trinity symmetry")
        raise InputError(f"valency must be odd and >= 5, got {m}")
    big = [q for q, _ in factorize(m) if q >= 5]
    if big:
        d = big[-1]
    else:
        d = 9  # m is a power of 3, at least 9
    n = m // d
    p = order = None
    if resolve:
        p = choose_prime(d).p
        order = psl_order(p)
    if n == 1:
        group = f"PSL(2,{p})" if p else "PSL(2,p)"
    elif order is not None:
        group = f"(Z_{n})^{1 + order // 4} x| PSL(2,{p})"
    else:
        group = f"(Z_{n})^(1+|G|/4) x| G, G = PSL(2,p) for the base valency {d}"
    return LiftPlan(
        m=m, d=d, n=n, base_certificate_ref=f"construct {d}",
        predicted_group=group, base_prime=p, base_group_order=order,
    )

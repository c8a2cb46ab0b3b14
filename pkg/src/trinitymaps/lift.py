"""Lifts of maps by corner voltage assignments in ``Z_n^(N/2)``.

Each corner ``{g, gz}`` of a base map with N flags gets its own unit vector.
Crossing the z-edge of a corner from its lower-indexed flag adds that vector;
crossing back subtracts it.  x- and y-edges carry no voltage.  Voltage vectors
are kept sparse: a sorted tuple of ``(coordinate, value)`` with nonzero values.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

from .flagmap import COLORS, MapInvariants, RegularMap, invariants, trinity_check
from .norm import InputError
from .psl2 import ResourceError

DEFAULT_BUDGET = 10**7

Sparse = tuple[tuple[int, int], ...]


class LiftedFlag(NamedTuple):
    base: int
    v: Sparse = ()


@dataclass(frozen=True)
class CornerVoltage:
    base_map: RegularMap
    n: int
    corners: tuple[tuple[int, int], ...]
    corner_of: tuple[int, ...]
    assignment: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.corners)

    def sign(self, flag: int) -> int:
        """+1 if crossing z from ``flag`` adds the corner's vector."""
        return 1 if self.corners[self.corner_of[flag]][0] == flag else -1


def assign_voltages(m: RegularMap, n: int) -> CornerVoltage:
    """Corners in order of their lower flag index, unit vectors in the same order."""
    if n < 1 or n % 2 == 0:
        raise InputError(f"voltage modulus n must be odd and positive, got {n}")
    z = m.perm_z.tolist()
    corners = []
    corner_of = [-1] * m.n_flags
    for f, g in enumerate(z):
        if f < g:
            corner_of[f] = corner_of[g] = len(corners)
            corners.append((f, g))
    return CornerVoltage(
        base_map=m,
        n=n,
        corners=tuple(corners),
        corner_of=tuple(corner_of),
        assignment=tuple(range(len(corners))),
    )


def _shift(v: Sparse, coord: int, delta: int, n: int) -> Sparse:
    d = dict(v)
    val = (d.get(coord, 0) + delta) % n
    if val:
        d[coord] = val
    else:
        d.pop(coord, None)
    return tuple(sorted(d.items()))


def add_vectors(a: Sparse, b: Sparse, n: int) -> Sparse:
    d = dict(a)
    for c, val in b:
        s = (d.get(c, 0) + val) % n
        if s:
            d[c] = s
        else:
            d.pop(c, None)
    return tuple(sorted(d.items()))


def lifted_step(f: LiftedFlag, color: str, cv: CornerVoltage) -> LiftedFlag:
    m = cv.base_map
    if color == "x":
        return LiftedFlag(int(m.perm_x[f.base]), f.v)
    if color == "y":
        return LiftedFlag(int(m.perm_y[f.base]), f.v)
    if color != "z":
        raise InputError(f"unknown colour {color!r}")
    coord = cv.assignment[cv.corner_of[f.base]]
    return LiftedFlag(int(m.perm_z[f.base]), _shift(f.v, coord, cv.sign(f.base), cv.n))


def walk(start: LiftedFlag, word: Iterable[str], cv: CornerVoltage) -> LiftedFlag:
    f = start
    for c in word:
        f = lifted_step(f, c, cv)
    return f


def orbit_order(start: LiftedFlag, word: Sequence[str], cv: CornerVoltage) -> int:
    """Least m >= 1 such that ``word`` applied m times returns to ``start``."""
    if not word:
        return 1
    limit = cv.n * cv.base_map.n_flags + 1
    f = start
    for m in range(1, limit + 1):
        f = walk(f, word, cv)
        if f == start:
            return m
    raise ResourceError(f"word {''.join(word)} did not close within {limit} repetitions")


@dataclass
class LiftComponent:
    flags: list[LiftedFlag]
    index: dict[LiftedFlag, int]
    map: RegularMap


@dataclass
class ComponentReport:
    size: int
    total_flags: int
    component_count: int
    component_sizes_equal: bool
    predicted_count: Optional[int]
    group_order_predicted: Optional[int]
    invariants: MapInvariants
    trinity: tuple[bool, bool]
    theorem_applies: bool
    component: LiftComponent = field(repr=False)

    @property
    def matches_prediction(self) -> bool:
        return self.predicted_count == self.component_count and (
            self.group_order_predicted == self.size
        )

    def as_dict(self) -> dict:
        inv = self.invariants
        return {
            "size": self.size,
            "total_flags": self.total_flags,
            "component_count": self.component_count,
            "component_sizes_equal": self.component_sizes_equal,
            "predicted_count": self.predicted_count,
            "group_order_predicted": self.group_order_predicted,
            "matches_prediction": self.matches_prediction,
            "V": inv.V,
            "E": inv.E,
            "F": inv.F,
            "chi": inv.chi,
            "type": [inv.type_k, inv.type_l],
            "petrie_len": inv.petrie_len,
            "orientable": inv.orientable,
            "trinity": list(self.trinity),
            "theorem_applies": self.theorem_applies,
        }


def predicted_counts(n_flags: int, n: int) -> tuple[Optional[int], Optional[int]]:
    """``(n^(-1+N/4), n^(1+N/4) * N)`` when N is divisible by 4."""
    if n_flags % 4:
        return None, None
    e = n_flags // 4
    return n ** (e - 1), n ** (e + 1) * n_flags


def _bfs(start: LiftedFlag, cv: CornerVoltage, budget: int) -> list[LiftedFlag]:
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for c in COLORS:
            g = lifted_step(f, c, cv)
            if g not in seen:
                seen.add(g)
                if len(seen) > budget:
                    raise ResourceError(
                        f"lift component exceeds budget {budget}; use orbit_order instead"
                    )
                order.append(g)
                queue.append(g)
    return order


def _component_map(flags: list[LiftedFlag], cv: CornerVoltage) -> LiftComponent:
    index = {f: i for i, f in enumerate(flags)}
    perms = [[index[lifted_step(f, c, cv)] for f in flags] for c in COLORS]
    return LiftComponent(flags, index, RegularMap(*perms, base_flag=0))


def total_lifted_flags(cv: CornerVoltage) -> int:
    return cv.base_map.n_flags * cv.n**cv.dim


def component_bfs(
    start: LiftedFlag,
    cv: CornerVoltage,
    budget: int = DEFAULT_BUDGET,
    count_all: bool = True,
) -> ComponentReport:
    """Enumerate the component of ``start`` and analyse it as a map.

    With ``count_all`` every lifted flag is visited, so the number of
    components and their sizes are measured rather than assumed.
    """
    total = total_lifted_flags(cv)
    if count_all and total > budget:
        raise ResourceError(f"{total} lifted flags exceed budget {budget}; use orbit_order")
    flags = _bfs(start, cv, budget)
    comp = _component_map(flags, cv)
    count, equal = 1, True
    if count_all:
        seen = set(flags)
        sizes = [len(flags)]
        for g in range(cv.base_map.n_flags):
            for vals in itertools.product(range(cv.n), repeat=cv.dim):
                f = LiftedFlag(g, tuple((i, a) for i, a in enumerate(vals) if a))
                if f not in seen:
                    other = _bfs(f, cv, budget)
                    seen.update(other)
                    sizes.append(len(other))
        count = len(sizes)
        equal = len(set(sizes)) == 1
    base = cv.base_map
    base_inv = invariants(base)
    inv = invariants(comp.map)
    regular = comp.map.is_regular
    trin = trinity_check(comp.map) if regular else (False, False)
    pc, po = predicted_counts(base.n_flags, cv.n)
    applies = (
        cv.n >= 3
        and base_inv.type_k == base_inv.type_l
        and base_inv.type_k % 2 == 1
        and base_inv.type_k >= 5
        and trinity_check(base) == (True, True)
    )
    return ComponentReport(
        size=len(flags),
        total_flags=total if count_all else -1,
        component_count=count if count_all else -1,
        component_sizes_equal=equal,
        predicted_count=pc,
        group_order_predicted=po,
        invariants=inv,
        trinity=trin,
        theorem_applies=applies,
        component=comp,
    )


@dataclass
class TranslationReport:
    ok: bool
    order: int
    expected_order: Optional[int]
    reason: str = ""


def normal_subgroup_check(comp: LiftComponent, cv: CornerVoltage) -> TranslationReport:
    """Certify ``component automorphisms = (Z_n)^(1+N/4) x| G`` at enumerable scale.

    The translations ``(g, v) -> (g, v + w)`` commute with every lifted step,
    so those preserving the component are exactly the w with
    ``(g0, v0 + w)`` in it.  The check confirms they form a subgroup of the
    expected order, act freely, and have the base map as quotient.
    """
    n, N = cv.n, cv.base_map.n_flags
    _, expected_total = predicted_counts(N, n)
    expected = expected_total // N if expected_total is not None else None
    start = comp.flags[0]
    members = comp.index
    fibre = [f.v for f in comp.flags if f.base == start.base]
    neg0 = tuple((c, -a % n) for c, a in start.v)
    W = {add_vectors(v, neg0, n) for v in fibre}
    for a in W:
        for b in W:
            if add_vectors(a, b, n) not in W:
                return TranslationReport(False, len(W), expected, "translations not closed")
    for w in W:
        if w and any(LiftedFlag(f.base, add_vectors(f.v, w, n)) not in members for f in comp.flags):
            return TranslationReport(False, len(W), expected, "translation leaves the component")
    bases = {}
    for f in comp.flags:
        bases[f.base] = bases.get(f.base, 0) + 1
    if len(bases) != N or set(bases.values()) != {len(W)}:
        return TranslationReport(False, len(W), expected, "quotient is not the base map")
    if expected is not None and len(W) != expected:
        return TranslationReport(False, len(W), expected, "translation group has the wrong order")
    return TranslationReport(True, len(W), expected)

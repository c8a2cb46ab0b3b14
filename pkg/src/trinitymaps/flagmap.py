"""Maps as three involutory permutations of a flag set.

A map is ``(perm_x, perm_y, perm_z)`` on flags ``0..N-1``; for a map built
from a group, flag ``g`` goes to ``g*c`` under colour ``c``.  Vertices, edges
and faces are the orbits of <y,z>, <x,y> and <z,x>.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Callable, Hashable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .norm import InputError

COLORS = ("x", "y", "z")


def compose(first: np.ndarray, then: np.ndarray) -> np.ndarray:
    """Permutation applying ``first`` and then ``then``."""
    return then[first]


def perm_order(perm: np.ndarray) -> int:
    seen = np.zeros(len(perm), dtype=bool)
    order = 1
    pl = perm.tolist()
    for start in range(len(pl)):
        if seen[start]:
            continue
        n, f = 0, start
        while not seen[f]:
            seen[f] = True
            f = pl[f]
            n += 1
        order = math.lcm(order, n)
    return order


def count_orbits(n: int, *perms: np.ndarray) -> int:
    src = np.concatenate([np.arange(n)] * len(perms))
    dst = np.concatenate(perms)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    return connected_components(graph, directed=False)[0]


@dataclass(frozen=True)
class MapInvariants:
    V: int
    E: int
    F: int
    chi: int
    type_k: int
    type_l: int
    petrie_len: int
    orientable: bool

    def as_dict(self) -> dict:
        return asdict(self)


class RegularMap:
    def __init__(self, perm_x, perm_y, perm_z, base_flag: int = 0):
        self.perm_x = np.asarray(perm_x, dtype=np.int64)
        self.perm_y = np.asarray(perm_y, dtype=np.int64)
        self.perm_z = np.asarray(perm_z, dtype=np.int64)
        self.base_flag = base_flag
        n = len(self.perm_x)
        if not (len(self.perm_y) == len(self.perm_z) == n) or n == 0:
            raise InputError("flag permutations must have equal nonzero length")
        idx = np.arange(n)
        for c, p in zip(COLORS, self.perms):
            if np.any(p[p] != idx):
                raise InputError(f"perm_{c} is not an involution")
            if np.any(p == idx):
                raise InputError(f"perm_{c} has a fixed flag")
        if np.any(compose(self.perm_x, self.perm_y) != compose(self.perm_y, self.perm_x)):
            raise InputError("perm_x and perm_y do not commute")
        if count_orbits(n, *self.perms) != 1:
            raise InputError("flag permutations do not act transitively")

    @property
    def perms(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.perm_x, self.perm_y, self.perm_z)

    @property
    def n_flags(self) -> int:
        return len(self.perm_x)

    @cached_property
    def _lists(self) -> tuple[list[int], list[int], list[int]]:
        return tuple(p.tolist() for p in self.perms)  # type: ignore[return-value]

    @cached_property
    def is_regular(self) -> bool:
        """Flag-transitivity of the automorphism group.

        Automorphisms commute with the colour permutations, so if the three
        automorphisms sending the base flag to its x-, y- and z-neighbours all
        exist, their products reach every flag.
        """
        b = self.base_flag
        return all(
            _extend_pointed(self._lists, self._lists, b, p[b]) for p in self._lists
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegularMap):
            return NotImplemented
        return self.base_flag == other.base_flag and all(
            np.array_equal(a, b) for a, b in zip(self.perms, other.perms)
        )

    def __repr__(self) -> str:
        return f"RegularMap(n_flags={self.n_flags})"


def _extend_pointed(p1: Sequence[list[int]], p2: Sequence[list[int]], src: int, dst: int) -> bool:
    """Try to extend ``src -> dst`` to a colour-preserving bijection."""
    phi = [-1] * len(p1[0])
    phi[src] = dst
    stack = [src]
    while stack:
        f = stack.pop()
        img = phi[f]
        for a, b in zip(p1, p2):
            g, h = a[f], b[img]
            cur = phi[g]
            if cur < 0:
                phi[g] = h
                stack.append(g)
            elif cur != h:
                return False
    return True


def from_group_triple(
    elements: Sequence[Hashable],
    x: Hashable,
    y: Hashable,
    z: Hashable,
    mul: Callable[[Hashable, Hashable], Hashable],
    identity: Hashable | None = None,
) -> RegularMap:
    """Flags are group elements; colour c acts by right multiplication by c."""
    index = {g: i for i, g in enumerate(elements)}
    perms = []
    for c in (x, y, z):
        try:
            perms.append([index[mul(g, c)] for g in elements])
        except KeyError:
            raise InputError("element set is not closed under the generators") from None
    base = index[identity] if identity is not None else 0
    return RegularMap(*perms, base_flag=base)


def orientable(m: RegularMap) -> bool:
    """True iff flags 2-colour so that every generator swaps colours."""
    colour = [-1] * m.n_flags
    colour[m.base_flag] = 0
    queue = deque([m.base_flag])
    lists = m._lists
    while queue:
        f = queue.popleft()
        for p in lists:
            g = p[f]
            if colour[g] < 0:
                colour[g] = 1 - colour[f]
                queue.append(g)
            elif colour[g] == colour[f]:
                return False
    return True


def invariants(m: RegularMap) -> MapInvariants:
    n = m.n_flags
    x, y, z = m.perms
    V = count_orbits(n, y, z)
    E = count_orbits(n, x, y)
    F = count_orbits(n, z, x)
    return MapInvariants(
        V=V,
        E=E,
        F=F,
        chi=V - E + F,
        type_k=perm_order(compose(y, z)),
        type_l=perm_order(compose(z, x)),
        petrie_len=perm_order(compose(compose(x, y), z)),
        orientable=orientable(m),
    )


def dual(m: RegularMap) -> RegularMap:
    return RegularMap(m.perm_y, m.perm_x, m.perm_z, base_flag=m.base_flag)


def petrie(m: RegularMap) -> RegularMap:
    return RegularMap(compose(m.perm_x, m.perm_y), m.perm_y, m.perm_z, base_flag=m.base_flag)


def is_isomorphic_pointed(m1: RegularMap, m2: RegularMap) -> bool:
    """Isomorphism test for regular maps, sending base flag to base flag.

    For regular maps a colour-preserving bijection is forced by the image of
    one flag, and any flag can be moved to the base by an automorphism, so a
    single trial decides the question.
    """
    if m1.n_flags != m2.n_flags:
        return False
    for m in (m1, m2):
        if not m.is_regular:
            raise InputError("isomorphism test needs regular (flag-transitive) maps")
    return _extend_pointed(m1._lists, m2._lists, m1.base_flag, m2.base_flag)


def trinity_check(m: RegularMap) -> tuple[bool, bool]:
    """(self-dual, self-Petrie-dual)."""
    return is_isomorphic_pointed(m, dual(m)), is_isomorphic_pointed(m, petrie(m))


def to_dot(m: RegularMap, name: str = "flags") -> str:
    """Graphviz source for the 3-edge-coloured flag graph."""
    lines = [f"graph {name} {{"]
    for c, perm in zip(COLORS, m._lists):
        for f, g in enumerate(perm):
            if f < g:
                lines.append(f'  {f} -- {g} [color="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# small built-in bases


def closure(gens: Sequence[Hashable], mul: Callable, identity: Hashable) -> list:
    seen = {identity}
    queue = deque([identity])
    order = [identity]
    while queue:
        g = queue.popleft()
        for s in gens:
            h = mul(g, s)
            if h not in seen:
                seen.add(h)
                order.append(h)
                queue.append(h)
    return order


def z2_cubed() -> RegularMap:
    """Elementary abelian group of order 8 with its three basis involutions; type (2,2)."""
    xor = lambda a, b: a ^ b  # noqa: E731
    elements = closure((1, 2, 4), xor, 0)
    return from_group_triple(elements, 1, 2, 4, xor, identity=0)


def _perm_mul(a: tuple, b: tuple) -> tuple:
    # right action: apply a, then b
    return tuple(b[i] for i in a)


def tetrahedron() -> RegularMap:
    """The tetrahedron as S4 acting on its vertex labels; type (3,3)."""
    ident = (0, 1, 2, 3)
    x = (0, 1, 3, 2)  # (2 3)
    y = (1, 0, 2, 3)  # (0 1)
    z = (0, 2, 1, 3)  # (1 2)
    elements = closure((x, y, z), _perm_mul, ident)
    return from_group_triple(elements, x, y, z, _perm_mul, identity=ident)


TOYS: dict[str, Callable[[], RegularMap]] = {
    "z2cubed": z2_cubed,
    "tetrahedron": tetrahedron,
}

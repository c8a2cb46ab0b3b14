"""2x2 projective matrix groups over GF(p) / GF(p^2).

Matrices are 4-tuples ``(a, b, c, d)`` of encoded field elements, row-major.
Projective elements are stored in canonical form: the first nonzero entry in
row-major order is scaled to 1, so two matrices are projectively equal iff
their canonical forms are equal.
"""
from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .field import FieldCtx, element_order, find_zeta, legendre, sqrt_mod, xi_from_zeta
from .norm import InputError, VerificationError, choose_prime

log = logging.getLogger(__name__)

Mat = tuple[int, int, int, int]


class ResourceError(RuntimeError):
    """An enumeration exceeded its configured budget."""


class MatrixAlgebra:
    """Matrix operations over one field context, with a fast path for GF(p)."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.one: Mat = (1, 0, 0, 1)
        if ctx.degree == 1:
            p = ctx.p
            self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        else:
            self._inv = {}

    def _inverse(self, a: int) -> int:
        if self.ctx.degree == 1:
            return self._inv[a]
        v = self._inv.get(a)
        if v is None:
            v = self._inv[a] = self.ctx.inv(a)
        return v

    def mul(self, m: Mat, n: Mat) -> Mat:
        a, b, c, d = m
        e, f, g, h = n
        ctx = self.ctx
        if ctx.degree == 1:
            p = ctx.p
            return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)
        mu, ad = ctx.mul, ctx.add
        return (
            ad(mu(a, e), mu(b, g)),
            ad(mu(a, f), mu(b, h)),
            ad(mu(c, e), mu(d, g)),
            ad(mu(c, f), mu(d, h)),
        )

    def scale(self, m: Mat, s: int) -> Mat:
        if self.ctx.degree == 1:
            p = self.ctx.p
            return tuple(x * s % p for x in m)  # type: ignore[return-value]
        return tuple(self.ctx.mul(x, s) for x in m)  # type: ignore[return-value]

    def canon(self, m: Mat) -> Mat:
        for x in m:
            if x:
                return m if x == 1 else self.scale(m, self._inverse(x))
        raise InputError("zero matrix has no projective class")

    def pmul(self, m: Mat, n: Mat) -> Mat:
        return self.canon(self.mul(m, n))

    def det(self, m: Mat) -> int:
        a, b, c, d = m
        return self.ctx.sub(self.ctx.mul(a, d), self.ctx.mul(b, c))

    def trace(self, m: Mat) -> int:
        return self.ctx.add(m[0], m[3])

    def inv(self, m: Mat) -> Mat:
        """Adjugate divided by the determinant (an honest inverse, not just projective)."""
        a, b, c, d = m
        ctx = self.ctx
        det = self.det(m)
        if det == 0:
            raise InputError("singular matrix")
        return self.scale((d, ctx.neg(b), ctx.neg(c), a), ctx.inv(det))

    def is_scalar(self, m: Mat) -> bool:
        return m[1] == 0 and m[2] == 0 and m[0] == m[3] and m[0] != 0

    def proj_equal(self, m: Mat, n: Mat) -> bool:
        return self.canon(m) == self.canon(n)

    def power(self, m: Mat, e: int) -> Mat:
        result, base = self.one, m
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def det_one(self, m: Mat) -> Optional[Mat]:
        """A determinant-1 scalar multiple of m, or None if det(m) is a nonsquare."""
        s = sqrt_mod(self.det(m), self.ctx)
        if s is None:
            return None
        return self.scale(m, self.ctx.inv(s))

    def proj_order(self, m: Mat) -> int:
        """Least n >= 1 with m**n scalar."""
        if self.det(m) == 0:
            raise InputError("singular matrix has no order")
        bound = self.ctx.q + 2
        acc = m
        for n in range(1, bound + 1):
            if self.is_scalar(acc):
                return n
            acc = self.mul(acc, m)
        raise VerificationError("projective order exceeds q + 1")

    def decode(self, m: Mat) -> list[tuple[int, int]]:
        return [tuple(self.ctx.decode(x)) for x in m]  # type: ignore[misc]


def build_generators(xi_k: int, xi_l: int, ctx: FieldCtx) -> tuple[Mat, Mat, int]:
    """Rotation matrices R (order k) and S (order l), and D, all with det 1.

    ``R = diag(xi_k, 1/xi_k)`` and
    ``S = (xi_k - 1/xi_k)^-1 [[-(xi_l + 1/xi_l)/xi_k, -D], [1, (xi_l + 1/xi_l) xi_k]]``
    with ``D = xi_k^2 + xi_k^-2 + xi_l^2 + xi_l^-2``.
    """
    f = ctx
    ik, il = f.inv(xi_k), f.inv(xi_l)
    D = f.add(
        f.add(f.mul(xi_k, xi_k), f.mul(ik, ik)),
        f.add(f.mul(xi_l, xi_l), f.mul(il, il)),
    )
    if D == 0:
        raise VerificationError("D = 0: generator construction degenerates")
    lam = f.add(xi_l, il)
    c = f.inv(f.sub(xi_k, ik))
    R: Mat = (xi_k, 0, 0, ik)
    S: Mat = (
        f.mul(c, f.neg(f.mul(lam, ik))),
        f.mul(c, f.neg(D)),
        c,
        f.mul(c, f.mul(lam, xi_k)),
    )
    return R, S, D


def psl_order(p: int) -> int:
    return p * (p * p - 1) // 2


@dataclass
class GroupTable:
    elements: list[Mat]
    index: dict[Mat, int]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, m: Mat) -> bool:
        return m in self.index


def enumerate_group(
    gens: Sequence[Mat],
    alg: MatrixAlgebra,
    cap: int,
    expected_order: Optional[int] = None,
) -> GroupTable:
    """Closure of ``gens`` under right multiplication, as canonical projective matrices.

    Elements are sorted after closure so that the table does not depend on
    traversal order.
    """
    gens = [alg.canon(g) for g in gens]
    if expected_order is not None and cap < expected_order:
        raise ResourceError(f"group of order {expected_order} exceeds enumeration cap {cap}")
    one = alg.one
    seen = {one}
    queue = deque([one])
    pmul = alg.pmul
    while queue:
        g = queue.popleft()
        for s in gens:
            h = pmul(g, s)
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise ResourceError(f"group exceeds enumeration cap {cap}")
                queue.append(h)
    elements = sorted(seen)
    if expected_order is not None:
        if len(elements) == 60 and expected_order != 60:
            raise VerificationError("generators span the exceptional A5 subgroup")
        if len(elements) != expected_order:
            raise VerificationError(
                f"<R,S> has order {len(elements)}, expected {expected_order}"
            )
    return GroupTable(elements, {m: i for i, m in enumerate(elements)})


def nullspace(rows: list[list[int]], ctx: FieldCtx, ncols: int) -> list[list[int]]:
    """Basis of the right nullspace of a matrix over the field (Gauss-Jordan)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ctx.inv(m[r][col])
        m[r] = [ctx.mul(x, inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                fct = m[i][col]
                m[i] = [ctx.sub(x, ctx.mul(fct, y)) for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = ctx.neg(m[i][fc])
        basis.append(v)
    return basis


def _commutation_rows(a: Mat, b: Mat, sign: int, ctx: FieldCtx) -> list[list[int]]:
    """Linear equations in the entries of T expressing ``T a = sign * b T``."""
    rows = []
    s = ctx.from_int(sign)
    for i in range(2):
        for j in range(2):
            row = [0, 0, 0, 0]
            # (T a)_ij = sum_l T_il a_lj
            for l in range(2):
                row[2 * i + l] = ctx.add(row[2 * i + l], a[2 * l + j])
            # (b T)_ij = sum_l b_il T_lj
            for l in range(2):
                row[2 * l + j] = ctx.sub(row[2 * l + j], ctx.mul(s, b[2 * i + l]))
            rows.append(row)
    return rows


def _nonsingular_in_span(basis: list[list[int]], alg: MatrixAlgebra) -> list[Mat]:
    cands: list[Mat] = [tuple(v) for v in basis]  # type: ignore[misc]
    if len(basis) > 1:
        ctx = alg.ctx
        for coeffs in itertools.product(range(1, 4), repeat=len(basis)):
            v = [0, 0, 0, 0]
            for c, b in zip(coeffs, basis):
                v = [ctx.add(x, ctx.mul(c, y)) for x, y in zip(v, b)]
            cands.append(tuple(v))  # type: ignore[arg-type]
    return [m for m in cands if alg.det(m) != 0]


def _solve_intertwiner(pairs: list[tuple[Mat, Mat]], alg: MatrixAlgebra) -> Optional[Mat]:
    """Nonsingular T with ``T a T^-1 = +-b`` for every (a, b); inputs det 1."""
    ctx = alg.ctx
    for signs in itertools.product((1, -1), repeat=len(pairs)):
        rows = []
        for (a, b), s in zip(pairs, signs):
            rows += _commutation_rows(a, b, s, ctx)
        basis = nullspace(rows, ctx, 4)
        if basis:
            good = _nonsingular_in_span(basis, alg)
            if good:
                return good[0]
    return None


def _det_one_or_fail(m: Mat, alg: MatrixAlgebra, name: str) -> Mat:
    n = alg.det_one(m)
    if n is None:
        raise InputError(f"{name} is not in PSL over {alg.ctx.describe()}")
    return n


@dataclass
class Reflection:
    Z: Mat
    det_is_square: bool
    minus_D_square: bool


def find_reflection(R: Mat, S: Mat, alg: MatrixAlgebra) -> Reflection:
    """Involution Z inverting both R and S by conjugation.

    Among the solutions of ``ZR = +-R^-1 Z`` and ``ZS = +-S^-1 Z`` prefers one
    with square determinant (Z then lies in PSL).  D is read off S projectively
    as ``-S_12 / S_21`` and ``-D`` is checked to be a square mod p.
    """
    ctx = alg.ctx
    R1 = _det_one_or_fail(R, alg, "R")
    S1 = _det_one_or_fail(S, alg, "S")
    pairs = [(R1, alg.inv(R1)), (S1, alg.inv(S1))]
    found: list[Mat] = []
    for signs in itertools.product((1, -1), repeat=2):
        rows = []
        for (a, b), s in zip(pairs, signs):
            rows += _commutation_rows(a, b, s, ctx)
        found += _nonsingular_in_span(nullspace(rows, ctx, 4), alg)
    if not found:
        raise VerificationError("no matrix inverts both R and S")
    square = [z for z in found if ctx.is_square(alg.det(z))]
    Z = alg.canon((square or found)[0])
    if not alg.is_scalar(alg.mul(Z, Z)):
        raise VerificationError("reflection Z is not an involution")
    if not alg.proj_equal(alg.mul(alg.mul(Z, R), alg.inv(Z)), alg.inv(R)):
        raise VerificationError("Z R Z^-1 != R^-1")
    if not alg.proj_equal(alg.mul(alg.mul(Z, S), alg.inv(Z)), alg.inv(S)):
        raise VerificationError("Z S Z^-1 != S^-1")
    D = ctx.neg(ctx.div(S[1], S[2]))
    if not ctx.in_prime_field(D):
        raise VerificationError("D does not lie in the prime field")
    return Reflection(
        Z=Z,
        det_is_square=bool(square),
        minus_D_square=legendre(ctx.neg(D), ctx.p) == 1,
    )


def involution_triple(R: Mat, S: Mat, Z: Mat, alg: MatrixAlgebra) -> tuple[Mat, Mat, Mat]:
    """``(x, y, z) = (ZS, RZ, Z)`` in canonical form, with the relators checked."""
    x, y, z = alg.pmul(Z, S), alg.pmul(R, Z), alg.canon(Z)
    for name, m in (("x", x), ("y", y), ("z", z)):
        if alg.is_scalar(m) or not alg.is_scalar(alg.mul(m, m)):
            raise VerificationError(f"{name} is not an involution")
    if not alg.is_scalar(alg.power(alg.mul(x, y), 2)):
        raise VerificationError("(xy)^2 != 1")
    if not alg.proj_equal(alg.mul(y, z), R):
        raise VerificationError("yz != R")
    if not alg.proj_equal(alg.mul(z, x), S):
        raise VerificationError("zx != S")
    if len({x, y, z}) != 3:
        raise VerificationError("x, y, z are not pairwise distinct")
    return x, y, z


def find_conjugator(
    src: Sequence[Mat], dst: Sequence[Mat], alg: MatrixAlgebra
) -> Optional[Mat]:
    """T (in PGL over the ambient field) with ``T src_i T^-1 = dst_i`` projectively."""
    pairs = [
        (_det_one_or_fail(a, alg, "source"), _det_one_or_fail(b, alg, "target"))
        for a, b in zip(src, dst)
    ]
    T = _solve_intertwiner(pairs, alg)
    if T is None:
        return None
    T = alg.canon(T)
    Ti = alg.inv(T)
    for a, b in zip(src, dst):
        if not alg.proj_equal(alg.mul(alg.mul(T, a), Ti), b):
            raise VerificationError("conjugator failed re-check")
    return T


def duality_target(triple: Sequence[Mat], alg: MatrixAlgebra) -> tuple[Mat, Mat, Mat]:
    x, y, z = triple
    return (y, x, z)


def petrie_target(triple: Sequence[Mat], alg: MatrixAlgebra) -> tuple[Mat, Mat, Mat]:
    x, y, z = triple
    return (alg.pmul(x, y), y, z)


@dataclass
class MapSeed:
    k: int
    p: int
    ctx: FieldCtx
    epsilon: int
    zeta: int
    xi: int
    D: int
    R: Mat
    S: Mat
    Z: Mat
    x: Mat
    y: Mat
    z: Mat
    e: int = 1
    minus_D_square: bool = True
    decisions: dict = field(default_factory=dict)

    @property
    def alg(self) -> MatrixAlgebra:
        return MatrixAlgebra(self.ctx)

    @property
    def triple(self) -> tuple[Mat, Mat, Mat]:
        return (self.x, self.y, self.z)


def build_seed(k: int, p: Optional[int] = None, zeta: Optional[int] = None) -> MapSeed:
    """Run the matrix half of the construction for odd valency k.

    ``p`` defaults to the smallest admissible prime factor of N(g); ``zeta``
    (an encoded field element) defaults to the root with the smaller encoding.
    """
    prime = choose_prime(k, p)
    z0, ctx = find_zeta(k, prime.p)
    if zeta is None:
        zeta = z0
    elif ctx.add(ctx.mul(3, ctx.add(zeta, ctx.inv(zeta))), 2) != 0 or element_order(zeta, ctx) != k:
        raise InputError("supplied zeta is not a valid root")
    xi = xi_from_zeta(zeta, k, ctx)
    alg = MatrixAlgebra(ctx)
    R, S, D = build_generators(xi, xi, ctx)
    expected_D = ctx.mul(ctx.from_int(-4), ctx.inv(ctx.from_int(3)))
    if D != ctx.mul(2, ctx.add(zeta, ctx.inv(zeta))) or D != expected_D:
        raise VerificationError("D != 2(zeta + 1/zeta) = -4/3")
    for name, m in (("R", R), ("S", S)):
        if alg.proj_order(m) != k:
            raise VerificationError(f"ord({name}) = {alg.proj_order(m)}, expected {k}")
    if alg.trace(alg.mul(R, S)) != 0 or alg.proj_order(alg.mul(R, S)) != 2:
        raise VerificationError("RS is not an involution")
    refl = find_reflection(R, S, alg)
    if not refl.minus_D_square:
        raise VerificationError("-D is not a square mod p: the map would be orientable")
    if legendre(3, prime.p) != 1:
        raise VerificationError("3 is not a square mod p")
    x, y, z = involution_triple(R, S, refl.Z, alg)
    decisions = {
        "zeta_root": "smaller encoding of the two roots of 3z^2+2z+3" if zeta == z0 else "supplied",
        "nonresidue": ctx.nonresidue,
        "xi_rule": "-zeta^((k+1)/2)",
        "matrix_signs": "R, S stored with determinant 1; Z, x, y, z in canonical projective form",
        "projective_canonical_form": "first nonzero entry (row-major) scaled to 1",
        "prime_policy": "override" if p is not None else "smallest admissible prime factor of N(g)",
    }
    return MapSeed(
        k=k, p=prime.p, ctx=ctx, epsilon=prime.epsilon, zeta=zeta, xi=xi, D=D,
        R=R, S=S, Z=refl.Z, x=x, y=y, z=z, minus_D_square=refl.minus_D_square,
        decisions=decisions,
    )

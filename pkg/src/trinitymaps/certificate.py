"""End-to-end construction, certificate serialisation and re-verification.

A certificate is a canonical JSON document (sorted keys, every integer written
as a decimal string, field elements as ``{"a0": .., "a1": ..}``).  Given the
same k, prime and decisions it is reproduced byte for byte.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Optional

from .field import FieldCtx, element_order, legendre
from .flagmap import MapInvariants, RegularMap, from_group_triple, invariants, trinity_check
from .norm import (
    InputError,
    VerificationError,
    classify_prime,
    is_prime,
    norm_g,
    norm_report,
)
from .psl2 import (
    Mat,
    MatrixAlgebra,
    MapSeed,
    build_generators,
    build_seed,
    duality_target,
    enumerate_group,
    find_conjugator,
    petrie_target,
    psl_order,
)

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
DEFAULT_GROUP_BUDGET = 10**6


class MalformedCertificate(ValueError):
    """The certificate cannot be parsed into the expected schema."""


def _stringify(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def dumps(cert: dict) -> str:
    return json.dumps(_stringify(cert), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificate(f"not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedCertificate("certificate must be a JSON object")
    return data


def _elem(ctx: FieldCtx, x: int) -> dict:
    a0, a1 = ctx.decode(x)
    return {"a0": a0, "a1": a1}


def _mat(ctx: FieldCtx, m: Mat) -> list:
    return [[_elem(ctx, m[0]), _elem(ctx, m[1])], [_elem(ctx, m[2]), _elem(ctx, m[3])]]


@dataclass
class Construction:
    seed: MapSeed
    group_order: int
    enumerated: bool
    invariants: MapInvariants
    flag_check: Optional[tuple[bool, bool]]
    duality_witness: Optional[Mat]
    petrie_witness: Optional[Mat]
    map: Optional[RegularMap] = field(default=None, repr=False)


def matrix_invariants(seed: MapSeed) -> MapInvariants:
    """Invariants from the group order and element orders alone (no flags needed)."""
    alg = seed.alg
    order = psl_order(seed.p)
    k = alg.proj_order(alg.mul(seed.y, seed.z))
    l = alg.proj_order(alg.mul(seed.z, seed.x))
    V, E, F = order // (2 * k), order // 4, order // (2 * l)
    return MapInvariants(
        V=V, E=E, F=F, chi=V - E + F, type_k=k, type_l=l,
        petrie_len=alg.proj_order(alg.mul(alg.mul(seed.x, seed.y), seed.z)),
        # R and S alone generate the group, so there is no index-2 rotation subgroup
        orientable=False,
    )


def _check_witness_square(T: Mat, triple, alg: MatrixAlgebra) -> None:
    """T^2 must act on the triple as an inner automorphism (here: trivially)."""
    T2 = alg.mul(T, T)
    T2i = alg.inv(T2)
    image = tuple(alg.pmul(alg.mul(T2, a), T2i) for a in triple)
    if image != tuple(alg.canon(a) for a in triple):
        raise VerificationError("duality witness squared does not fix the triple")
    resolved = find_conjugator(triple, image, alg)
    if resolved is None or not alg.is_scalar(alg.mul(alg.inv(resolved), T2)):
        raise VerificationError("duality witness squared is not inner")


def construct(k: int, prime: Optional[int] = None, budget: int = DEFAULT_GROUP_BUDGET) -> Construction:
    """Norm -> prime -> zeta -> xi -> R, S -> Z -> (x, y, z) -> group -> map -> checks."""
    if k == 3:
        raise InputError(
            "no valency-3 map has trinity symmetry: the only regular map of type (3,3) "
            "is the tetrahedron, which is not self-Petrie-dual"
        )
    if k < 5 or k % 2 == 0:
        raise InputError(f"valency must be odd and >= 5, got {k}")
    if not is_prime(k) and k != 9:
        raise InputError(f"k={k} is composite; use `plan {k}` and a lift")
    seed = build_seed(k, prime)
    alg = seed.alg
    triple = seed.triple
    t_dual = find_conjugator(triple, duality_target(triple, alg), alg)
    t_petrie = find_conjugator(triple, petrie_target(triple, alg), alg)
    if t_dual is not None:
        _check_witness_square(t_dual, triple, alg)
    order = psl_order(seed.p)
    if order <= budget:
        G = enumerate_group([seed.R, seed.S], alg, budget, order)
        for name, m in zip("xyz", triple):
            if m not in G:
                raise VerificationError(f"{name} does not lie in <R,S>")
        fmap = from_group_triple(G.elements, *triple, alg.pmul, identity=alg.one)
        inv = invariants(fmap)
        flags = trinity_check(fmap)
        if flags != (True, True):
            raise VerificationError(f"flag-level trinity check failed: {flags}")
        if inv.orientable:
            raise VerificationError("constructed map is orientable")
        matrix_answer = (t_dual is not None, t_petrie is not None)
        if matrix_answer != flags:
            log.warning("matrix-level witnesses %s disagree with flag level %s", matrix_answer, flags)
        return Construction(seed, len(G), True, inv, flags, t_dual, t_petrie, fmap)
    log.info("group order %d exceeds budget %d: flag-level checks skipped", order, budget)
    if t_dual is None or t_petrie is None:
        raise VerificationError("matrix-level duality/Petrie witness missing")
    return Construction(seed, order, False, matrix_invariants(seed), None, t_dual, t_petrie)


def to_certificate(c: Construction) -> dict:
    s = c.seed
    ctx = s.ctx
    nr = norm_report(s.k)
    matrix_answer = (c.duality_witness is not None, c.petrie_witness is not None)
    decisions = dict(s.decisions)
    decisions["voltage_sign"] = "lower-indexed flag of a corner adds +e when crossing z"
    decisions["authority"] = "flag level" if c.flag_check is not None else "matrix level (flags skipped)"
    return {
        "schema_version": SCHEMA_VERSION,
        "k": s.k,
        "p": s.p,
        "field": {"p": ctx.p, "degree": ctx.degree, "nonresidue": ctx.nonresidue},
        "epsilon": s.epsilon,
        "e": s.e,
        "zeta": _elem(ctx, s.zeta),
        "xi": _elem(ctx, s.xi),
        "D": _elem(ctx, s.D),
        "R": _mat(ctx, s.R),
        "S": _mat(ctx, s.S),
        "Z": _mat(ctx, s.Z),
        "x": _mat(ctx, s.x),
        "y": _mat(ctx, s.y),
        "z": _mat(ctx, s.z),
        "group_order": c.group_order,
        "group_enumerated": c.enumerated,
        "invariants": c.invariants.as_dict(),
        "duality_witness": None if c.duality_witness is None else _mat(ctx, c.duality_witness),
        "petrie_witness": None if c.petrie_witness is None else _mat(ctx, c.petrie_witness),
        "flag_check": {
            "performed": c.flag_check is not None,
            "self_dual": None if c.flag_check is None else c.flag_check[0],
            "self_petrie": None if c.flag_check is None else c.flag_check[1],
        },
        "matrix_check": {"self_dual": matrix_answer[0], "self_petrie": matrix_answer[1]},
        "norm_report": nr.as_dict(),
        "decisions": decisions,
    }


# verification


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


def _int(d: dict, key: str) -> int:
    try:
        return int(d[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCertificate(f"field {key!r} missing or not an integer") from exc


def _parse_elem(ctx: FieldCtx, raw: Any, name: str) -> int:
    try:
        a0, a1 = int(raw["a0"]), int(raw["a1"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCertificate(f"{name} is not a field element") from exc
    if not (0 <= a0 < ctx.p and 0 <= a1 < ctx.p) or (ctx.degree == 1 and a1):
        raise MalformedCertificate(f"{name} is not reduced for {ctx.describe()}")
    return ctx.encode(a0, a1)


def _parse_mat(ctx: FieldCtx, raw: Any, name: str) -> Mat:
    try:
        (a, b), (c, d) = raw
    except (TypeError, ValueError) as exc:
        raise MalformedCertificate(f"{name} is not a 2x2 matrix") from exc
    return tuple(_parse_elem(ctx, e, f"{name} entry") for e in (a, b, c, d))  # type: ignore[return-value]


def _parse(cert: dict):
    if cert.get("schema_version") != SCHEMA_VERSION:
        raise MalformedCertificate(f"unsupported schema_version {cert.get('schema_version')!r}")
    k, p = _int(cert, "k"), _int(cert, "p")
    fdesc = cert.get("field")
    if not isinstance(fdesc, dict):
        raise MalformedCertificate("field descriptor missing")
    nr = fdesc.get("nonresidue")
    try:
        ctx = FieldCtx(_int(fdesc, "p"), _int(fdesc, "degree"), None if nr is None else int(nr))
    except (InputError, ValueError) as exc:
        raise MalformedCertificate(f"bad field descriptor: {exc}") from exc
    mats = {name: _parse_mat(ctx, cert.get(name), name) for name in ("R", "S", "Z", "x", "y", "z")}
    elems = {name: _parse_elem(ctx, cert.get(name), name) for name in ("zeta", "xi", "D")}
    witnesses = {
        name: None if cert.get(name) is None else _parse_mat(ctx, cert[name], name)
        for name in ("duality_witness", "petrie_witness")
    }
    for key in ("invariants", "flag_check", "norm_report"):
        if not isinstance(cert.get(key), dict):
            raise MalformedCertificate(f"{key} missing")
    return k, p, ctx, mats, elems, witnesses


def verify(cert: dict, budget: int = DEFAULT_GROUP_BUDGET) -> VerifyReport:
    """Re-derive every claim in ``cert`` from its raw stored values.

    Raises :class:`MalformedCertificate` if the document does not parse.
    """
    k, p, ctx, M, el, W = _parse(cert)
    rep = VerifyReport()
    alg = MatrixAlgebra(ctx)
    f = ctx

    # number theory
    rep.add("k odd >= 5", k >= 5 and k % 2 == 1, f"k={k}")
    rep.add("p prime", is_prime(p) and p == ctx.p, f"p={p}")
    n = norm_g(k) if k >= 3 and k % 2 else 0
    rep.add("p divides N(g)", n != 0 and n % p == 0, f"N(g)={n}")
    nr = cert["norm_report"]
    rep.add("stored N(g)", str(nr.get("N_g")) == str(n), f"stored {nr.get('N_g')}")
    cls = classify_prime(p, k)
    rep.add("congruence p = +-1 mod 2k and 12", cls.passes, f"p mod {2 * k}={cls.residue_2k}, p mod 12={cls.residue_12}")
    stored = [a for a in nr.get("admissible", []) if str(a.get("p")) == str(p)]
    rep.add(
        "congruence residues match stored",
        len(stored) == 1
        and str(stored[0].get("residue_2k")) == str(cls.residue_2k)
        and str(stored[0].get("residue_12")) == str(cls.residue_12)
        and str(stored[0].get("epsilon")) == str(cls.epsilon)
        and str(cert.get("epsilon")) == str(cls.epsilon),
        "recomputed residues differ from the certificate" if stored else "prime missing from norm report",
    )
    rep.add("field degree matches epsilon", (ctx.degree == 1) == (cls.epsilon == 1), ctx.describe())
    rep.add("3 is a square mod p", legendre(3, p) == 1)

    # roots of unity
    zeta, xi, D = el["zeta"], el["xi"], el["D"]
    ok = zeta != 0 and f.add(f.mul(3, f.add(zeta, f.inv(zeta))), 2) == 0
    rep.add("3(zeta + 1/zeta) + 2 = 0", ok)
    rep.add("ord(zeta) = k", zeta != 0 and element_order(zeta, ctx) == k)
    rep.add("xi^2 = zeta", f.mul(xi, xi) == zeta)
    rep.add("ord(xi) = 2k", xi != 0 and element_order(xi, ctx) == 2 * k)
    rep.add("D = 2(zeta + 1/zeta)", zeta != 0 and D == f.mul(2, f.add(zeta, f.inv(zeta))) and D != 0)
    rep.add("-D is a square mod p", ctx.in_prime_field(D) and legendre(f.neg(D), p) == 1)

    # matrices
    R, S, Z, x, y, z = (M[n_] for n_ in ("R", "S", "Z", "x", "y", "z"))
    if xi != 0 and f.mul(xi, xi) != 1 and all(alg.det(m) for m in M.values()):
        R0, S0, _ = build_generators(xi, xi, ctx)
        rep.add("R matches generator formula", alg.proj_equal(R, R0))
        rep.add("S matches generator formula", alg.proj_equal(S, S0))
    else:
        rep.add("matrices nonsingular", False)
        return rep
    rep.add("ord(R) = k", alg.proj_order(R) == k)
    rep.add("ord(S) = k", alg.proj_order(S) == k)
    rep.add("ord(RS) = 2", alg.proj_order(alg.mul(R, S)) == 2)
    rep.add("Z^2 = 1", alg.is_scalar(alg.mul(Z, Z)) and not alg.is_scalar(Z))
    rep.add("Z R Z^-1 = R^-1", alg.proj_equal(alg.mul(alg.mul(Z, R), alg.inv(Z)), alg.inv(R)))
    rep.add("Z S Z^-1 = S^-1", alg.proj_equal(alg.mul(alg.mul(Z, S), alg.inv(Z)), alg.inv(S)))
    rep.add("det Z is a square", ctx.is_square(alg.det(Z)))
    rep.add("x = ZS", alg.proj_equal(x, alg.mul(Z, S)))
    rep.add("y = RZ", alg.proj_equal(y, alg.mul(R, Z)))
    rep.add("z = Z", alg.proj_equal(z, Z))
    rep.add(
        "x, y, z involutions",
        all(alg.is_scalar(alg.mul(m, m)) and not alg.is_scalar(m) for m in (x, y, z)),
    )
    rep.add("(xy)^2 = 1", alg.is_scalar(alg.power(alg.mul(x, y), 2)))
    triple = (x, y, z)

    # matrix-level duality witnesses
    answers = []
    for key, target in (
        ("duality_witness", duality_target(triple, alg)),
        ("petrie_witness", petrie_target(triple, alg)),
    ):
        T = W[key]
        if T is None:
            answers.append(find_conjugator(triple, target, alg) is not None)
            rep.add(f"{key} absent and none exists", not answers[-1])
            continue
        answers.append(True)
        good = alg.det(T) != 0 and all(
            alg.proj_equal(alg.mul(alg.mul(T, a), alg.inv(T)), b) for a, b in zip(triple, target)
        )
        rep.add(f"{key} conjugates the triple", good)
    mc = cert.get("matrix_check", {})
    rep.add(
        "stored matrix check",
        mc.get("self_dual") is answers[0] and mc.get("self_petrie") is answers[1],
    )

    # group and flags
    expected = psl_order(p)
    rep.add("stored group order", str(cert.get("group_order")) == str(expected), f"expected {expected}")
    stored_inv = cert["invariants"]
    fc = cert["flag_check"]
    if expected <= budget:
        try:
            G = enumerate_group([R, S], alg, budget)
        except Exception as exc:  # noqa: BLE001 - any failure is a verification failure
            rep.add("enumerate <R,S>", False, str(exc))
            return rep
        rep.add("|<R,S>| = p(p^2-1)/2", len(G) == expected, f"got {len(G)}")
        rep.add("x, y, z in <R,S>", all(m in G for m in (alg.canon(x), alg.canon(y), alg.canon(z))))
        if not rep.ok:
            return rep
        fmap = from_group_triple(G.elements, alg.canon(x), alg.canon(y), alg.canon(z), alg.pmul, identity=alg.one)
        inv = invariants(fmap).as_dict()
        rep.add(
            "stored invariants",
            all(str(stored_inv.get(key)) == str(val) for key, val in inv.items()),
            f"recomputed {inv}",
        )
        flags = trinity_check(fmap)
        rep.add("flag-level trinity", flags == (True, True), f"got {flags}")
        if fc.get("performed"):
            rep.add("stored flag check", (fc.get("self_dual"), fc.get("self_petrie")) == flags)
        rep.add("matrix and flag levels agree", tuple(answers) == flags)
    else:
        rep.add("flag-level check skipped (over budget)", True, f"|G|={expected} > {budget}")
        rep.add("witnesses present", all(answers))
    return rep


def map_from_certificate(cert: dict, budget: int = DEFAULT_GROUP_BUDGET) -> RegularMap:
    k, p, ctx, M, _, _ = _parse(cert)
    alg = MatrixAlgebra(ctx)
    G = enumerate_group([M["R"], M["S"]], alg, budget, psl_order(p))
    return from_group_triple(
        G.elements, alg.canon(M["x"]), alg.canon(M["y"]), alg.canon(M["z"]), alg.pmul, identity=alg.one
    )

"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 invalid input or malformed
file, 3 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import certificate as certmod
from .flagmap import TOYS, invariants, to_dot
from .lift import DEFAULT_BUDGET, LiftedFlag, assign_voltages, component_bfs, normal_subgroup_check, orbit_order
from .norm import InputError, VerificationError, factorize, format_factorization, norm_g
from .plan import plan
from .psl2 import ResourceError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

#: Published values of N(g) for odd k in 5..29.
REFERENCE_NORMS = {
    5: -11, 7: -13, 9: -73, 11: 263, 13: -131, 15: -239, 17: -4079,
    19: 15503, 21: 5209, 23: -4093, 25: 56149, 27: -16417, 29: 3161869,
}
REFERENCE_FACTORS = {19: [(37, 1), (419, 1)], 29: [(59, 1), (53591, 1)]}

log = logging.getLogger("trinitymaps")


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(certmod._stringify(data), sort_keys=True, indent=2))
    else:
        print(text)


def table_rows(lo: int, hi: int) -> list[dict]:
    rows = []
    for k in range(lo + (lo % 2 == 0), hi + 1, 2):
        if k < 3:
            continue
        n = norm_g(k)
        fac = factorize(n) if abs(n) >= 2 else []
        ref = REFERENCE_NORMS.get(k)
        ref_fac = REFERENCE_FACTORS.get(k, [(abs(ref), 1)] if ref is not None else None)
        rows.append({
            "k": k,
            "N_g": n,
            "factorization": [[q, e] for q, e in fac],
            "reference": ref,
            "matches": None if ref is None else (n == ref and fac == ref_fac),
        })
    return rows


def cmd_table(args) -> int:
    lo = args.lo if args.lo is not None else args.from_
    hi = args.hi if args.hi is not None else args.to
    if lo is None or hi is None:
        raise InputError("table needs a range: table K1 K2 or --from K1 --to K2")
    if lo > hi:
        raise InputError(f"empty range {lo}..{hi}")
    rows = table_rows(lo, hi)
    lines = [f"{'k':>4}  {'N(g)':>12}  factorization of |N(g)|"]
    for r in rows:
        fac = [(q, e) for q, e in r["factorization"]]
        mark = "" if r["matches"] is None else ("  ok" if r["matches"] else "  MISMATCH")
        lines.append(f"{r['k']:>4}  {r['N_g']:>+12d}  {format_factorization(fac) if fac else '-'}{mark}")
    _emit(args, {"rows": rows}, "\n".join(lines))
    return EXIT_FAIL if any(r["matches"] is False for r in rows) else EXIT_OK


def cmd_construct(args) -> int:
    c = certmod.construct(args.k, args.prime, budget=args.budget)
    cert = certmod.to_certificate(c)
    text = certmod.dumps(cert)
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        inv = c.invariants
        s = c.seed
        print(f"valency {s.k}: PSL(2,{s.p}) over {s.ctx.describe()}, epsilon={s.epsilon:+d}")
        print(f"  zeta={tuple(s.ctx.decode(s.zeta))} xi={tuple(s.ctx.decode(s.xi))} D={tuple(s.ctx.decode(s.D))}")
        print(f"  group order {c.group_order} ({'enumerated' if c.enumerated else 'from p'})")
        print(f"  V={inv.V} E={inv.E} F={inv.F} chi={inv.chi} type=({inv.type_k},{inv.type_l}) "
              f"petrie={inv.petrie_len} orientable={inv.orientable}")
        if c.flag_check is None:
            print("  flag-level check skipped (over budget); matrix witnesses are authoritative")
        else:
            print(f"  flag-level: self_dual={c.flag_check[0]} self_petrie={c.flag_check[1]}")
        print(f"  matrix witnesses: duality={c.duality_witness is not None} petrie={c.petrie_witness is not None}")
        if args.out:
            print(f"  certificate written to {args.out}")
    return EXIT_OK


def _read_cert(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise certmod.MalformedCertificate(f"cannot read {path}: {exc}") from exc
    return certmod.loads(text)


def cmd_verify(args) -> int:
    rep = certmod.verify(_read_cert(args.file), budget=args.budget)
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail and not c.ok else "")
             for c in rep.checks]
    lines.append("certificate verified" if rep.ok else f"{len(rep.failed)} check(s) failed")
    _emit(args, rep.as_dict(), "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_plan(args) -> int:
    lp = plan(args.m, resolve=args.resolve)
    text = (f"m={lp.m} = {lp.d} x {lp.n}: construct valency {lp.d}"
            + ("" if lp.n == 1 else f", then lift with n={lp.n}")
            + f"\n  group: {lp.predicted_group}")
    _emit(args, lp.as_dict(), text)
    return EXIT_OK


def cmd_lift(args) -> int:
    if args.n < 3 or args.n % 2 == 0:
        raise InputError(f"lift factor n must be odd and >= 3, got {args.n}")
    if args.toy:
        if args.toy not in TOYS:
            raise InputError(f"unknown toy {args.toy!r}; choose from {sorted(TOYS)}")
        base = TOYS[args.toy]()
        source = f"toy {args.toy}"
    else:
        base = certmod.map_from_certificate(_read_cert(args.base), budget=args.budget)
        source = args.base
    cv = assign_voltages(base, args.n)
    start = LiftedFlag(base.base_flag)
    d = invariants(base)
    if args.mode == "exhaustive":
        rep = component_bfs(start, cv, budget=args.budget)
        tr = normal_subgroup_check(rep.component, cv)
        data = rep.as_dict() | {
            "base": source, "n": args.n,
            "translation_group_order": tr.order, "translation_check": tr.ok,
        }
        inv = rep.invariants
        text = (f"lift of {source} with n={args.n}: {rep.total_flags} lifted flags, "
                f"{rep.component_count} components of {rep.size} (predicted {rep.predicted_count})\n"
                f"  component: type ({inv.type_k},{inv.type_l}) petrie={inv.petrie_len} "
                f"V={inv.V} E={inv.E} F={inv.F} trinity={rep.trinity}\n"
                f"  translation group order {tr.order} (expected {tr.expected_order}): {'ok' if tr.ok else tr.reason}")
        ok = rep.component_sizes_equal and tr.ok and rep.trinity == (True, True)
        if rep.theorem_applies:
            ok = ok and rep.matches_prediction
    else:
        words = ("yz", "zx", "xy", "xyz")
        orders = {w: orbit_order(start, w, cv) for w in words}
        expect = {
            "yz": args.n * d.type_k, "zx": args.n * d.type_l, "xy": 2, "xyz": args.n * d.petrie_len,
        }
        data = {"base": source, "n": args.n, "orders": orders, "expected": expect}
        text = f"orbit orders for lift of {source} with n={args.n}:\n" + "\n".join(
            f"  {w:>3}: {orders[w]} (expected {expect[w]})" for w in words
        )
        ok = orders == expect
    _emit(args, data, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_export(args) -> int:
    m = certmod.map_from_certificate(_read_cert(args.file), budget=args.budget)
    Path(args.dot).write_text(to_dot(m))
    _emit(args, {"flags": m.n_flags, "dot": args.dot}, f"wrote {m.n_flags}-flag graph to {args.dot}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trinitymaps",
        description="Regular self-dual, self-Petrie-dual maps of odd valency.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("table", cmd_table, "tabulate N(g) and its factorization")
    p.add_argument("lo", nargs="?", type=int)
    p.add_argument("hi", nargs="?", type=int)
    p.add_argument("--from", dest="from_", type=int)
    p.add_argument("--to", type=int)

    p = add("construct", cmd_construct, "build and certify the map for valency K")
    p.add_argument("k", type=int)
    p.add_argument("--prime", type=int)
    p.add_argument("--out")
    p.add_argument("--budget", type=int, default=certmod.DEFAULT_GROUP_BUDGET)

    p = add("verify", cmd_verify, "re-check a certificate")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=certmod.DEFAULT_GROUP_BUDGET)

    p = add("plan", cmd_plan, "decompose valency M into base and lift factor")
    p.add_argument("m", type=int)
    p.add_argument("--resolve", action="store_true", help="also find the base prime")

    p = add("lift", cmd_lift, "lift a base map by a corner voltage assignment")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--base")
    src.add_argument("--toy")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "orbit"), default="exhaustive")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = add("export-flaggraph", cmd_export, "write the flag graph of a certificate as DOT")
    p.add_argument("file")
    p.add_argument("--dot", required=True)
    p.add_argument("--budget", type=int, default=certmod.DEFAULT_GROUP_BUDGET)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, certmod.MalformedCertificate) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 resource bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd
from typing import Sequence

from . import catalog, linalg
from .codes import (
    DEFAULT_MAX_CATALOG,
    CyclicCode,
    build,
    enumerate_all,
    enumerate_self_dual,
    irreducible_decompose,
    make_context,
    mds_family,
)
from .cyclotomic import CycContext, CycPartition, cosets, set_transform
from .errors import ChainCodesError, SizeLimitError
from .ring import FAMILIES, is_prime

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    g = parent.add_argument_group("ring and length")
    g.add_argument("--p", type=int, default=2, help="residue characteristic (default 2)")
    g.add_argument("--n", type=int, default=1, help="q = p^n (default 1)")
    g.add_argument("--q", type=int, help="residue field size; overrides --p/--n")
    g.add_argument("--s", type=int, default=2, help="nilpotency index (default 2)")
    g.add_argument("--family", choices=FAMILIES, default="galois-ring")
    g.add_argument("--length", type=int, default=7, help="code length ell (default 7)")
    o = parent.add_argument_group("output and bounds")
    o.add_argument("--format", choices=("table", "csv", "json", "markdown"), default="table")
    o.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    o.add_argument("--max-enum", type=int, default=DEFAULT_MAX_CATALOG,
                   help="bound on catalog size and enumerated spans")
    o.add_argument("--max-weight-enum", type=int, default=linalg.DEFAULT_MAX_WEIGHT_ENUM,
                   help="bound on words enumerated for a minimum weight")
    return parent


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="chaincodes",
        description="Cyclic codes over finite chain rings via cyclotomic partitions.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub.add_parser("cosets", parents=[common], help="q-cyclotomic cosets modulo the length")
    sub.add_parser("ring-info", parents=[common], help="describe R, S, xi and eta")

    p = sub.add_parser("info", parents=[common], help="report on one code")
    p.add_argument("--partition", required=True, help='e.g. "0=0,1=1,3=2"')
    p.add_argument("--min-weight", action="store_true", help="also compute the minimum weight")

    p = sub.add_parser("algebra", parents=[common], help="sum, meet or dual of codes")
    p.add_argument("op", choices=("sum", "meet", "dual"))
    p.add_argument("partitions", nargs="+")

    p = sub.add_parser("enumerate", parents=[common], help="every cyclic code of the length")
    p.add_argument("--with-weights", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="compare against golden data")
    p.add_argument("--golden", help="golden CSV (default: the bundled table)")
    p.add_argument("--identities-only", action="store_true")
    p.add_argument("--random-duals", type=int, default=0, metavar="N",
                   help="also check N seeded random duals against the kernel oracle")

    sub.add_parser("mds", parents=[common],
                   help="MDS evaluation code over S = R (needs p = 2, length q - 1)")

    p = sub.add_parser("selfdual", parents=[common], help="list self-dual codes")
    p.add_argument("--no-oracle", action="store_true", help="skip the kernel cross-check")
    return parser


def _ring_params(args) -> tuple[int, int]:
    if args.q is not None:
        q = args.q
        for p in range(2, q + 1):
            if q % p == 0:
                break
        else:
            raise UsageError(f"--q {q} is not a prime power")
        n, x = 0, q
        while x % p == 0:
            x //= p
            n += 1
        if x != 1 or not is_prime(p):
            raise UsageError(f"--q {q} is not a prime power")
        return p, n
    if not is_prime(args.p):
        raise UsageError(f"--p {args.p} is not prime")
    if args.n < 1:
        raise UsageError("--n must be positive")
    return args.p, args.n


def _context(args):
    p, n = _ring_params(args)
    if args.s < 1 or args.length < 1:
        raise UsageError("--s and --length must be positive")
    q = p ** n
    if gcd(q, args.length) != 1:
        raise UsageError(f"gcd(length={args.length}, q={q}) != 1")
    return make_context(p, n, args.s, args.length, args.family)


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _fmt_set(A) -> str:
    return "{" + ",".join(map(str, sorted(A))) + "}"


def cmd_cosets(args) -> int:
    p, n = _ring_params(args)
    q = p ** n
    if gcd(q, args.length) != 1:
        raise UsageError(f"gcd(length={args.length}, q={q}) != 1")
    ctx = CycContext(args.length, q, 1)
    sets, reps, count = cosets(ctx)
    rows = []
    for rep, C in zip(reps, sets):
        opp = set_transform(C, "opposite")
        rows.append({"rep": rep, "coset": _fmt_set(C), "size": len(C),
                     "opposite_rep": min(opp.members)})
    if args.format == "json":
        _emit(json.dumps({"ell": ctx.ell, "q": q, "order": ctx.m, "count": count,
                          "cosets": [dict(r, coset=sorted(C)) for r, C in zip(rows, sets)]},
                         indent=2) + "\n")
        return EXIT_OK
    if args.format in ("table", "markdown"):
        _emit(f"ell={ctx.ell} q={q} ord_ell(q)={ctx.m} cosets={count}\n")
    _emit(catalog.format_rows(rows, ["rep", "coset", "size", "opposite_rep"], args.format))
    return EXIT_OK


def cmd_ring_info(args) -> int:
    ctx = _context(args)
    S = ctx.ring
    info = {
        "R": {"q": ctx.q, "s": ctx.s, "size": ctx.q ** ctx.s},
        "S": S.to_json() | {"name": S.name, "size": S.size, "Q": S.Q},
        "m": ctx.m,
        "ell": ctx.ell,
        "xi": list(S.xi.c),
        "xi_order": S.xi.multiplicative_order(),
        "eta": list(ctx.eta.c),
        "eta_order": ctx.eta.multiplicative_order(),
    }
    if args.format == "json":
        _emit(json.dumps(info, indent=2) + "\n")
        return EXIT_OK
    rows = [{"field": k, "value": json.dumps(v, separators=(",", ":"))} for k, v in info.items()]
    _emit(catalog.format_rows(rows, ["field", "value"], args.format))
    return EXIT_OK


def _code_details(c: CyclicCode) -> dict:
    return {
        "components": [{"level": t, "rep": z} for t, z in irreducible_decompose(c)],
        "standard_form": c.standard.to_json(),
    }


def cmd_info(args) -> int:
    ctx = _context(args)
    c = build(ctx, CycPartition.parse(args.partition, ctx.cyc))
    labels = catalog.labels_for(ctx)
    rep = c.report(labels.get(c.partition.to_string()), args.min_weight, args.max_weight_enum)
    if args.format == "json":
        _emit(json.dumps(rep.to_dict() | _code_details(c), indent=2) + "\n")
        return EXIT_OK
    _emit(catalog.format_reports([rep], args.format))
    if args.format == "table":
        comps = ", ".join(f"theta^{t} C({z})" for t, z in irreducible_decompose(c)) or "none"
        _emit(f"components: {comps}\n")
    return EXIT_OK


def cmd_algebra(args) -> int:
    ctx = _context(args)
    codes = [build(ctx, CycPartition.parse(text, ctx.cyc)) for text in args.partitions]
    result = catalog.apply_op(args.op, codes)
    labels = catalog.labels_for(ctx)
    rep = result.report(labels.get(result.partition.to_string()))
    if args.format == "json":
        _emit(json.dumps(rep.to_dict(), indent=2) + "\n")
    else:
        if args.format == "table":
            _emit(f"result: {result.partition}\n")
        _emit(catalog.format_reports([rep], args.format))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    ctx = _context(args)
    reports = enumerate_all(ctx, args.max_enum, catalog.labels_for(ctx),
                            args.with_weights, args.max_weight_enum)
    _emit(catalog.format_reports(reports, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    ctx = _context(args)
    path = args.golden or catalog.bundled_catalog()
    golden = catalog.load_golden(path, ctx)
    failed = False
    lines = []
    if not args.identities_only:
        reports = enumerate_all(ctx, args.max_enum)
        diffs = catalog.compare_golden(reports, golden)
        matched = len(golden) - len({key for key, _ in diffs} & set(golden))
        lines.append(f"catalog: {len(reports)} codes, golden: {len(golden)} rows")
        lines.extend(f"DIFF {msg}" for _, msg in diffs)
        status = "PASS" if not diffs else "FAIL"
        lines.append(f"{status} golden rows {matched}/{len(golden)}")
        failed |= bool(diffs)
    for res in catalog.check_identities(ctx, golden, True, args.max_enum):
        detail = f"partition={'ok' if res.partition_ok else 'FAIL'}"
        detail += f" words={'ok' if res.words_ok else 'FAIL'}"
        lines.append(f"{'PASS' if res.ok else 'FAIL'} identity {res.name} ({detail})")
        failed |= not res.ok
    if args.random_duals:
        checks = catalog.dual_spot_checks(ctx, args.random_duals, args.seed, args.max_enum)
        bad = [k for k, ok in checks if not ok]
        lines.append(f"{'PASS' if not bad else 'FAIL'} random duals "
                     f"{len(checks) - len(bad)}/{len(checks)} (seed {args.seed})")
        lines.extend(f"DIFF dual {k}" for k in bad)
        failed |= bool(bad)
    _emit("\n".join(lines) + "\n")
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_mds(args) -> int:
    p, n = _ring_params(args)
    rep = mds_family(p, n, args.s, args.family, args.max_weight_enum)
    data = rep.to_dict()
    if args.format == "json":
        _emit(json.dumps(data, indent=2) + "\n")
    else:
        rows = [{"field": k, "value": json.dumps(v, separators=(",", ":"))}
                for k, v in data.items()]
        _emit(catalog.format_rows(rows, ["field", "value"], args.format))
    ok = rep.mds and rep.dual_matches and rep.self_orthogonal
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_selfdual(args) -> int:
    ctx = _context(args)
    codes = enumerate_self_dual(ctx)
    labels = catalog.labels_for(ctx)
    failed = False
    rows = []
    for c in codes:
        row = catalog.report_row(c.report(labels.get(c.partition.to_string())))
        row["label"] = labels.get(c.partition.to_string(), "")
        if not args.no_oracle:
            ok = linalg.same_span(linalg.kernel(c.generator), c.generator)
            row["oracle"] = "ok" if ok else "FAIL"
            failed |= not ok
        rows.append(row)
    cols = ["label", "partition", "type", "cardinality"] + ([] if args.no_oracle else ["oracle"])
    if args.format == "table":
        _emit(f"{len(rows)} self-dual code(s)\n")
    _emit(catalog.format_rows(rows, cols, args.format))
    return EXIT_MISMATCH if failed else EXIT_OK


COMMANDS = {
    "cosets": cmd_cosets,
    "ring-info": cmd_ring_info,
    "info": cmd_info,
    "algebra": cmd_algebra,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "mds": cmd_mds,
    "selfdual": cmd_selfdual,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"chaincodes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeLimitError as exc:
        print(f"chaincodes: resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ChainCodesError, ValueError) as exc:
        print(f"chaincodes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

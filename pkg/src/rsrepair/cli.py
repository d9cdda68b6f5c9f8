"""Command-line entry point: ``rsrepair <command> ...``.

Exit status is 0 on success, 1 when a module rejects the input or a repair
fails to reproduce the erased symbol, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__
from .bounds import bounds_report
from .errors import RepairError
from .gf import FieldTower, dual_basis, from_hex, make_tower, to_hex
from .repair import RepairScheme, read_scheme, repair, repair_batch, validate, write_scheme
from .rs import RsCode, encode_many
from .schemes import ConstructionId, build, default_points, hdfs_code
from .search import SearchConfig, exhaustive_search, verify_against_table
from .sim import ClusterConfig, campaign, provision, summarize

# Top-level keys of every JSON report; output is checked against this in tests.
SCHEMAS: dict[str, Any] = {
    "field": ["m", "d", "t", "q", "modulus", "generator", "subfield_generator", "basis", "dual_basis"],
    "scheme": {
        "keys": ["construction", "field", "n", "k", "t", "points", "per_star",
                 "bandwidth_subsymbols", "bandwidth_bits", "max_locality"],
        "per_star": ["alpha_star", "dims", "subsymbols", "bits", "locality"],
    },
    "repair": {
        "keys": ["construction", "n", "k", "trials", "seed", "repairs", "all_ok",
                 "max_downloaded_subsymbols", "transcript"],
        "repairs": ["alpha_star", "trials", "ok", "downloaded_subsymbols", "downloaded_bits", "locality"],
        "transcript": ["alpha_star", "queries", "responses", "reconstructed",
                       "downloaded_subsymbols", "downloaded_bits", "locality"],
    },
    "bounds": ["n", "k", "t", "d_locality", "subfield_size", "subsymbol_bits",
               "linear_lb_subsymbols", "linear_lb_bits", "linear_lb_ceiling",
               "cutset_lb_subsymbols", "cutset_lb_ceiling", "trivial_lb_subsymbols",
               "naive_subsymbols", "binding", "scheme_subsymbols", "scheme_bits", "optimal"],
    "search": {
        "keys": ["n", "k", "candidates_per_star", "tuples_per_star", "per_star", "max_bits",
                 "elapsed_s", "table", "scheme_out"],
        "per_star": ["alpha_star", "choice", "scalars", "subsymbols", "bits"],
    },
    "sim": {
        "keys": ["construction", "n", "k", "m_stripes", "seed", "reports", "summary", "conserved"],
        "reports": ["failed", "m_stripes", "subsymbols_per_stripe", "downstream_bits",
                    "upstream_bits", "naive_downstream_bits", "verified"],
    },
}


class _Usage(Exception):
    pass


def _hex(text: str) -> int:
    try:
        return from_hex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a hex value: {text!r}") from exc


def _emit(args, payload: dict[str, Any], table: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(table)


def _rows(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(h) for h in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _tower(args) -> FieldTower:
    if args.m is None or args.d is None:
        raise _Usage("--m and --d are required")
    return make_tower(args.m, args.d, args.modulus)


def _code_and_scheme(args) -> tuple[RsCode, RepairScheme, str | None]:
    """From --scheme-in, or from --construction with tower and size flags."""
    if getattr(args, "scheme_in", None):
        with open(args.scheme_in) as fp:
            scheme = read_scheme(fp)
        return scheme.code, scheme, None
    cid = ConstructionId(args.construction)
    if cid is ConstructionId.HDFS14_10:
        code, scheme = build(cid)
        return code, scheme, cid.value
    tower = _tower(args)
    if args.k is None:
        raise _Usage(f"--k is required for construction {cid.value}")
    if cid is not ConstructionId.TRACE and args.n is None:
        raise _Usage(f"--n is required for construction {cid.value}")
    code, scheme = build(cid, tower, args.n, args.k)
    return code, scheme, cid.value


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_field(args) -> int:
    tower = _tower(args)
    f = tower.field
    payload = {
        "m": tower.m,
        "d": tower.d,
        "t": tower.t,
        "q": tower.q,
        "modulus": to_hex(f.modulus),
        "generator": to_hex(f.generator),
        "subfield_generator": to_hex(tower.subfield_generator),
        "basis": [to_hex(z) for z in tower.basis],
        "dual_basis": [to_hex(v) for v in dual_basis(tower, tower.basis)],
    }
    table = "\n".join(f"{k:>18}  {v}" for k, v in payload.items())
    _emit(args, payload, table)
    return 0


def _scheme_payload(report, construction: str | None) -> dict[str, Any]:
    out = {"construction": construction}
    out.update(report.to_dict())
    return out


def _scheme_table(report) -> str:
    rows = [
        (to_hex(r.alpha_star), r.subsymbols, r.bits, r.locality)
        for r in (report.per_star[a] for a in report.code.points)
    ]
    if len(rows) > 40:
        rows = rows[:20] + [("...", "", "", "")] + rows[-5:]
    body = _rows(["alpha*", "subsymbols", "bits", "locality"], rows)
    return (
        f"{body}\nbandwidth: {report.bandwidth_subsymbols} sub-symbols = "
        f"{report.bandwidth_bits} bits, max locality {report.max_locality}"
    )


def cmd_scheme_build(args) -> int:
    code, scheme, name = _code_and_scheme(args)
    report = validate(scheme)
    if args.scheme_out:
        with open(args.scheme_out, "w") as fp:
            write_scheme(scheme, fp)
    _emit(args, _scheme_payload(report, name), _scheme_table(report))
    return 0


def cmd_scheme_validate(args) -> int:
    _, scheme, _ = _code_and_scheme(args)
    report = validate(scheme)
    _emit(args, _scheme_payload(report, None), _scheme_table(report))
    return 0


def _erase_list(code: RsCode, erase: str, flag: str = "--erase") -> list[int]:
    if erase == "all":
        return list(code.points)
    try:
        idx = int(erase)
    except ValueError as exc:
        raise _Usage(f"{flag} must be an index or 'all', got {erase!r}") from exc
    if not 0 <= idx < code.n:
        raise _Usage(f"{flag} {idx} is outside 0..{code.n - 1}")
    return [code.points[idx]]


def cmd_repair(args) -> int:
    if args.trials < 1:
        raise _Usage("--trials must be >= 1")
    code, scheme, name = _code_and_scheme(args)
    targets = _erase_list(code, args.erase)
    rng = np.random.default_rng(args.seed)
    words = encode_many(code, rng.integers(0, code.field.size, size=(args.trials, code.k)))
    rows, first = [], None
    for a in targets:
        batch = repair_batch(scheme, words, a)
        ok = bool(np.array_equal(batch.reconstructed, words[:, code.index(a)]))
        tr = repair(scheme, words[0], a)
        if first is None:
            first = tr
        rows.append({
            "alpha_star": to_hex(a),
            "trials": args.trials,
            "ok": ok,
            "downloaded_subsymbols": tr.downloaded_subsymbols,
            "downloaded_bits": tr.downloaded_bits,
            "locality": tr.locality,
        })
    all_ok = all(r["ok"] for r in rows)
    payload = {
        "construction": name,
        "n": code.n,
        "k": code.k,
        "trials": args.trials,
        "seed": args.seed,
        "repairs": rows,
        "all_ok": all_ok,
        "max_downloaded_subsymbols": max(r["downloaded_subsymbols"] for r in rows),
        "transcript": first.to_dict(),
    }
    shown = rows if len(rows) <= 40 else rows[:20] + rows[-5:]
    table = _rows(
        ["alpha*", "trials", "ok", "subsymbols", "bits", "locality"],
        [tuple(r.values()) for r in shown],
    ) + f"\nall repairs exact: {all_ok}"
    _emit(args, payload, table)
    return 0 if all_ok else 1


def cmd_bounds(args) -> int:
    for flag in ("n", "k", "m", "d"):
        if getattr(args, flag) is None:
            raise _Usage(f"--{flag} is required")
    rep = bounds_report(args.n, args.k, args.m, args.d, locality=args.locality,
                        achieved_subsymbols=args.achieved)
    rows = [
        ("linear (sub-symbols)", f"{rep.linear_lb_subsymbols:.6f}", rep.linear_lb_ceiling),
        ("linear (bits)", f"{rep.linear_lb_bits:.6f}", rep.linear_lb_ceiling * rep.subsymbol_bits),
        ("cut-set (sub-symbols)", f"{rep.cutset_lb_subsymbols:.6f}", rep.cutset_lb_ceiling),
        ("trivial (sub-symbols)", rep.trivial_lb_subsymbols, rep.trivial_lb_subsymbols),
        ("naive (sub-symbols)", rep.naive_subsymbols, rep.naive_subsymbols),
    ]
    table = _rows(["bound", "value", "ceiling"], rows) + f"\nbinding regime: {rep.binding}"
    if rep.scheme_subsymbols is not None:
        table += f"\nachieved {rep.scheme_subsymbols} sub-symbols, optimal: {rep.optimal}"
    _emit(args, rep.to_dict(), table)
    return 0


def cmd_search(args) -> int:
    if args.construction == ConstructionId.HDFS14_10.value:
        code = hdfs_code()
    else:
        tower = _tower(args)
        if args.n is None or args.k is None:
            raise _Usage("--n and --k are required unless --construction hdfs14_10")
        code = RsCode(tower, default_points(tower, args.n), args.k)
    cfg = SearchConfig(
        roots_in_A_only=args.roots_in_A,
        max_degree=args.max_degree,
        per_star_budget=args.budget,
        parallel=args.jobs > 1,
        jobs=args.jobs,
        scalars=args.scalars,
    )
    result = exhaustive_search(code, code.tower, cfg)
    if args.scheme_out:
        with open(args.scheme_out, "w") as fp:
            write_scheme(result.scheme, fp)
    table_cmp = None
    if args.construction == ConstructionId.HDFS14_10.value:
        table_cmp = verify_against_table(result).to_dict()
    payload = result.to_dict()
    payload["table"] = table_cmp
    payload["scheme_out"] = args.scheme_out
    text = _rows(
        ["alpha*", "choice", "subsymbols", "bits"],
        [(p["alpha_star"], p["choice"], p["subsymbols"], p["bits"]) for p in payload["per_star"]],
    ) + (
        f"\nmax {result.max_bits} bits; {result.candidates_per_star} candidates, "
        f"{result.tuples_per_star} tuples per alpha*; {result.elapsed:.2f} s"
    )
    if table_cmp is not None:
        text += f"\ntable: improvements {table_cmp['improvements']}, regressions {table_cmp['regressions']}"
    _emit(args, payload, text)
    return 0


def cmd_sim(args) -> int:
    code, scheme, name = _code_and_scheme(args)
    cluster = provision(ClusterConfig(code, scheme, args.stripes, args.seed))
    targets = _erase_list(code, args.fail, "--fail")
    reports = campaign(cluster, targets, jobs=args.jobs)
    summary = summarize(reports)
    payload = {
        "construction": name,
        "n": code.n,
        "k": code.k,
        "m_stripes": args.stripes,
        "seed": args.seed,
        "reports": [r.to_dict() for r in reports],
        "summary": summary,
        "conserved": cluster.conserved(),
    }
    shown = reports if len(reports) <= 40 else reports[:20] + reports[-5:]
    table = _rows(
        ["failed", "downstream bits", "upstream bits", "naive bits", "verified"],
        [(to_hex(r.failed), r.downstream_bits, r.upstream_bits, r.naive_downstream_bits, r.verified)
         for r in shown],
    ) + f"\nmax downstream {summary['max_downstream_bits']} bits; cluster conserved: {payload['conserved']}"
    _emit(args, payload, table)
    return 0 if summary["all_verified"] and payload["conserved"] else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_tower(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, help="extension degree of F over GF(2)")
    p.add_argument("--d", type=int, help="degree of the subfield B over GF(2)")
    p.add_argument("--modulus", type=_hex, help="field modulus in hex, degree-m bit included")


def _add_code(p: argparse.ArgumentParser, default: str | None = None) -> None:
    _add_tower(p)
    p.add_argument("--n", type=int, help="code length")
    p.add_argument("--k", type=int, help="code dimension")
    p.add_argument("--construction", choices=[c.value for c in ConstructionId], default=default)


def _add_json(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="emit JSON instead of a table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsrepair", description="Linear repair schemes for Reed-Solomon codes.")
    parser.add_argument("--version", action="version", version=f"rsrepair {__version__}")
    parser.add_argument("--schema", action="store_true", help="print the JSON report shapes and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("field", help="describe GF(2^m) over GF(2^d)")
    _add_tower(p)
    _add_json(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("scheme", help="build or validate a repair scheme")
    ssub = p.add_subparsers(dest="scheme_command")
    b = ssub.add_parser("build", help="build a named construction and report its bandwidth")
    _add_code(b, default=None)
    b.add_argument("--scheme-out", help="write the scheme file here")
    _add_json(b)
    b.set_defaults(func=cmd_scheme_build, needs_construction=True)
    v = ssub.add_parser("validate", help="validate a scheme file")
    v.add_argument("--scheme-in", required=True)
    _add_json(v)
    v.set_defaults(func=cmd_scheme_validate)

    p = sub.add_parser("repair", help="repair erased symbols of random codewords")
    _add_code(p)
    p.add_argument("--scheme-in")
    p.add_argument("--erase", default="0", help="position index or 'all'")
    p.add_argument("--trials", type=int, default=1, help="random codewords per position")
    p.add_argument("--seed", type=int, default=0)
    _add_json(p)
    p.set_defaults(func=cmd_repair, needs_source=True)

    p = sub.add_parser("bounds", help="lower bounds on repair bandwidth")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--locality", type=int, help="number of helpers for the cut-set bound (default n-1)")
    p.add_argument("--achieved", type=int, help="achieved bandwidth in sub-symbols, for the optimal flag")
    _add_json(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", help="exhaustive search for a low-bandwidth scheme")
    _add_code(p, default=ConstructionId.HDFS14_10.value)
    p.add_argument("--scheme-out")
    p.add_argument("--roots-in-A", dest="roots_in_A", action=argparse.BooleanOptionalAction, default=True,
                   help="monic candidates with distinct roots in A (default on)")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--scalars", action="store_true", help="also scale polynomials by F*/B* representatives")
    p.add_argument("--budget", type=int, help="maximum tuples per alpha*")
    p.add_argument("--jobs", type=int, default=1)
    _add_json(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sim", help="simulate failures in a striped cluster")
    _add_code(p)
    p.add_argument("--scheme-in")
    p.add_argument("--stripes", type=int, default=100)
    p.add_argument("--fail", default="all", help="position index or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    _add_json(p)
    p.set_defaults(func=cmd_sim, needs_source=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        print(json.dumps(SCHEMAS, indent=2))
        return 0
    func = getattr(args, "func", None)
    if func is None:
        parser.print_usage(sys.stderr)
        print("rsrepair: error: a command is required", file=sys.stderr)
        return 2
    if getattr(args, "needs_construction", False) and args.construction is None:
        parser.error("--construction is required")
    if getattr(args, "needs_source", False) and not (args.construction or args.scheme_in):
        parser.error("one of --construction or --scheme-in is required")
    try:
        return func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except RepairError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

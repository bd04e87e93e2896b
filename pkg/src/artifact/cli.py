"""Command line: ``artifact verify`` and ``artifact tables``.

Exit codes: 0 when every check passes (or is inapplicable), 1 when some
check fails, 2 on usage or configuration errors.  ``ARTIFACT_PRECISION``
and ``ARTIFACT_LEVEL`` set defaults for ``--precision`` and ``--level``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .report import normalize_payload
from .suites import SUITES, SuiteParams, instances, run_instances

__all__ = ["main", "build_parser", "run_suite", "tables", "REPORT_VERSION"]

REPORT_VERSION = 1


class UsageError(ValueError):
    pass


def _env_int(name: str):
    val = os.environ.get(name)
    if val is None or val == "":
        return None
    try:
        return int(val)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {val!r}") from None


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, default=5, help="the prime (default 5)")
    sp.add_argument("--f", type=int, default=1, help="residue degree on the quaternion side")
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--case", help="irreducible | reducible-nonsplit | reducible-split (or irred, nonsplit, split)")
    sp.add_argument("--precision", type=int, help="p-adic precision N of lattice computations")
    sp.add_argument("--level", type=int, help="level n of the quotient U^1/Z^1 U^n")
    sp.add_argument("--chi-exp", type=int, help="exponent k of the character xi^k")
    sp.add_argument("--chi-row", type=int, choices=(1, 2, 3, 4), help="row of the (a, b) selection table")
    sp.add_argument("--json", metavar="PATH", help="write a machine-readable report ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"artifact {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--quiet", action="store_true", help="only print the summary line")
    _common(v)
    t = sub.add_parser("tables", help="print weight tables")
    t.add_argument("kind", choices=("bdj", "khare", "ab-choice"))
    t.add_argument("--ratio-equal", action="store_true", help="the two unramified characters agree")
    t.add_argument("--tres-ramifie", action="store_true")
    _common(t)
    return ap


def _suite_params(ns) -> SuiteParams:
    precision = ns.precision if ns.precision is not None else _env_int("ARTIFACT_PRECISION")
    level = ns.level if ns.level is not None else _env_int("ARTIFACT_LEVEL")
    if precision is not None and precision < 1:
        raise UsageError("--precision must be positive")
    if level is not None and level < 2:
        raise UsageError("--level must be at least 2")
    if ns.f < 1:
        raise UsageError("--f must be positive")
    return SuiteParams(ns.p, ns.f, ns.a, ns.b, ns.r, ns.s, ns.case, precision, level, ns.chi_exp, ns.chi_row)


def _document(params: dict, checks: list[dict]) -> str:
    doc = {"version": REPORT_VERSION, "params": normalize_payload(params), "checks": checks}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(path: str, text: str, out) -> None:
    if path == "-":
        out.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def run_suite(suite: str, params: SuiteParams, output=None, json_path: str | None = None, jobs: int = 1, quiet: bool = False) -> int:
    """Run a suite and report; returns the exit status."""
    out = output or sys.stdout
    try:
        jobs_list = instances(suite, params)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    reports = run_instances(jobs_list, jobs)
    failed = [r for r in reports if not r.ok]
    if not quiet and json_path != "-":
        for r in reports:
            print(f"{r.status.upper():5s} {r.check_id}", file=out)
            if r.status == "fail":
                print(f"      expected {json.dumps(r.expected)}", file=out)
                print(f"      computed {json.dumps(r.computed)}", file=out)
    if json_path:
        doc = _document({"suite": suite, **params.as_dict()}, [r.as_dict(with_time=False) for r in reports])
        _write(json_path, doc, out)
    if json_path != "-":
        print(f"{suite}: {len(reports) - len(failed)}/{len(reports)} checks pass", file=out)
    return 1 if failed else 0


def _sigma(lab) -> str:
    return f"sigma_{{{lab[0]},{lab[1]}}}"


def tables(kind: str, ns, output=None) -> int:
    from . import weights as wt

    out = output or sys.stdout
    p = ns.p
    if ns.r is None or ns.s is None:
        raise UsageError("tables need --r and --s")
    case = ns.case or "irreducible"
    if kind == "ab-choice":
        x = wt.RhoBarParams(case, ns.r, ns.s, p)
        rows = wt.ab_rows(x)
        if ns.chi_row is not None:
            rows = [rows[ns.chi_row - 1]]
        data = [{"row": int(name[3:]), "chi": chi, "a": ab[0], "b": ab[1]} for name, chi, ab in rows]
        text = "\n".join(f"row {d['row']}: chi = xi^{d['chi']}  ->  (a, b) = ({d['a']}, {d['b']})" for d in data)
    else:
        x = wt.RhoBarParams(case, ns.r, ns.s, p, ns.ratio_equal, ns.tres_ramifie)
        W = wt.bdj_weights(x) if kind == "bdj" else wt.khare_weights(x)
        elems = W.sorted()
        data = {"subcase": W.subcase, "weights": elems}
        shown = ", ".join(_sigma(e) for e in elems) if kind == "bdj" else ", ".join(f"xi^{e}" for e in elems)
        text = f"{kind} ({x.case}, sub-case {W.subcase}, p={p}, r={x.r}, s={x.s}): {{{shown}}}"
    if ns.json:
        _write(ns.json, _document({"table": kind, **x.as_dict()}, data), out)
    if ns.json != "-":
        print(text, file=out)
    return 0


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if ns.command == "verify":
            return run_suite(ns.suite, _suite_params(ns), json_path=ns.json, jobs=ns.jobs, quiet=ns.quiet)
        return tables(ns.kind, ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

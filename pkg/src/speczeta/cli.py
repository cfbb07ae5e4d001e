"""Command-line front end: ``speczeta eval | table | check | experiment``.

Records go to standard output (or ``--out``) as CSV or newline-delimited
JSON; diagnostics and one-line summaries go to standard error.

Exit codes: 0 success, 1 domain error or failed check, 2 usage error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from decimal import Decimal, InvalidOperation
from typing import Callable, Iterable, Optional, Sequence

from .errors import PoleError, ZetaError
from .experiments import (
    cofactor_spanning_trees,
    catalan_table,
    complete_graph_spectrum,
    cycle_spectrum,
    cycle_to_Z_limit,
    euler_value_recovery,
    first_nonincreasing_violation,
    laplacian_from_edges,
    rh_ratio_experiment,
    spanning_trees,
    torus2d_logdet_limit,
    verlinde_dimension,
)
from .identities import (
    CheckReport,
    check_nilsson_identity,
    check_padic_kernels,
    check_poisson_circle,
    check_strip_equivalence,
    check_xi_circle,
    check_xi_p,
    check_xi_Z,
)
from .specialfn import make_character
from .zetas import ZetaSpace, evaluate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_UNSIGNED = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"^(?P<re>{_NUM})(?:(?P<im>[+-]{_UNSIGNED})i)?$")
_IMAG_RE = re.compile(rf"^(?P<im>{_NUM})i$")


# ----------------------------------------------------------------- argument types


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``a+bi``, ``a-bi`` or ``bi``."""
    t = text.strip().replace(" ", "")
    m = _REAL_RE.match(t)
    if m:
        return complex(float(m.group("re")), float(m.group("im") or 0.0))
    m = _IMAG_RE.match(t)
    if m:
        return complex(0.0, float(m.group("im")))
    raise argparse.ArgumentTypeError(f"not a complex number of the form a+bi: {text!r}")


def _axis(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(text)
    # decimal arithmetic so 0.05:0.45:0.05 yields exactly the typed decimals
    try:
        start, end, step = (Decimal(p) for p in parts)
    except InvalidOperation:
        raise ValueError(text) from None
    if not step > 0 or end < start:
        raise ValueError(text)
    count = int((end - start) // step) + 1
    return [float(start + k * step) for k in range(count)]


def parse_grid(text: str) -> list[complex]:
    """``re_start:re_end:re_step[,im_start:im_end:im_step]``, Re major and Im minor.

    A single complex number is accepted as a one-point grid.
    """
    if ":" not in text:
        return [parse_complex(text)]
    try:
        re_part, _, im_part = text.partition(",")
        res = _axis(re_part)
        ims = _axis(im_part) if im_part else [0.0]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid spec {text!r}") from None
    return [complex(r, i) for r in res for i in ims]


def parse_space(text: str) -> ZetaSpace:
    try:
        return ZetaSpace.parse(text)
    except ZetaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_int_list(text: str) -> list[int]:
    """``a..b`` (inclusive) or a comma-separated list."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list {text!r}")
    return out


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# ----------------------------------------------------------------- output


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return format(value, ".17g")
    return str(value)


def _json_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) and math.isnan(value):
        return "null"
    if isinstance(value, float) and math.isinf(value):
        return json.dumps(repr(value))
    if isinstance(value, (int, float)):
        return _fmt(value)
    return json.dumps(str(value))


def _csv_cell(text: str) -> str:
    if any(c in text for c in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def render(records: Sequence[dict], fmt: str) -> str:
    """CSV with a header row, or one JSON object per line; LF line endings."""
    buf = io.StringIO()
    if fmt == "json":
        for rec in records:
            buf.write("{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in rec.items()) + "}\n")
        return buf.getvalue()
    if not records:
        return ""
    keys = list(records[0])
    buf.write(",".join(keys) + "\n")
    for rec in records:
        buf.write(",".join(_csv_cell(_fmt(rec.get(k, ""))) for k in keys) + "\n")
    return buf.getvalue()


def _split(z: complex, prefix: str) -> dict:
    z = complex(z)
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


def _report_record(rep: CheckReport) -> dict:
    return {"kind": "check-report", **rep.as_dict()}


def _convergence_records(records, experiment: str) -> list[dict]:
    out = []
    for r in records:
        rec = {"kind": "convergence-record", "experiment": experiment, "n": r.n}
        rec.update(_split(r.value, "value"))
        rec.update(_split(r.target, "target"))
        rec["abs_error"] = r.abs_error
        out.append(rec)
    return out


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ----------------------------------------------------------------- commands


def cmd_eval(args) -> tuple[list[dict], int, str]:
    value = evaluate(args.space, args.s, args.route)
    rec = {"kind": "value", "space": str(args.space), "route": args.route or "default"}
    rec.update(_split(args.s, "s"))
    rec.update(_split(value, "value"))
    return [rec], EXIT_OK, ""


def cmd_table(args) -> tuple[list[dict], int, str]:
    grid = args.s

    def row(s: complex) -> dict:
        # a pole inside the grid becomes a NaN row so the table stays rectangular
        try:
            value = evaluate(args.space, s, args.route)
        except PoleError:
            value = complex(math.nan, math.nan)
        rec = {"kind": "table-row", "space": str(args.space)}
        rec.update(_split(s, "s"))
        rec.update(_split(value, "value"))
        return rec

    return _pmap(row, grid, args.threads), EXIT_OK, ""


_IDENTITIES = ("xi-z", "xi-circle", "xi-p", "poisson", "padic-kernels", "nilsson")


def cmd_check(args) -> tuple[list[dict], int, str]:
    name = args.identity
    grid = args.s
    kw = {} if args.tol is None else {"tol": args.tol}
    if name == "xi-z":
        rep = check_xi_Z(grid, **kw)
    elif name == "xi-circle":
        rep = check_xi_circle(grid, **kw)
    elif name == "xi-p":
        rep = check_xi_p(args.p if args.p is not None else 2, grid, **kw)
    elif name == "poisson":
        rep = check_poisson_circle(**kw)
    elif name == "padic-kernels":
        primes = None if args.p is None else [args.p]
        rep = check_padic_kernels(primes, **kw)
    elif name == "nilsson":
        if grid is not None and (len(grid) != 1 or grid[0].imag != 0.0):
            raise UsageError("nilsson takes a single real --s")
        s = 5.0 if grid is None else grid[0].real
        rep = check_nilsson_identity(args.p if args.p is not None else 2, args.valuation, s, **kw)
    elif name.startswith("strip:"):
        try:
            space = ZetaSpace.parse(name[len("strip:"):])
        except ZetaError as exc:
            raise UsageError(str(exc)) from None
        rep = check_strip_equivalence(space, grid, **kw)
    else:
        raise UsageError(f"unknown identity {name!r}; choose from {', '.join(_IDENTITIES)} or strip:<space>")
    summary = f"{rep.identity_name}: {'PASS' if rep.passed else 'FAIL'} ({rep.metric} deviation " \
              f"{rep.max_scaled_deviation if rep.metric == 'scaled' else rep.max_abs_deviation:.3g} " \
              f"<= {rep.tolerance:g} over {rep.points_checked} points, {rep.skipped} skipped)"
    return [_report_record(rep)], EXIT_OK if rep.passed else EXIT_FAIL, summary


def _require(value, flag: str, experiment: str):
    if value is None:
        raise UsageError(f"experiment {experiment} needs {flag}")
    return value


def _single_s(args, experiment: str, default: complex) -> complex:
    if args.s is None:
        return default
    if len(args.s) != 1:
        raise UsageError(f"experiment {experiment} takes a single --s value")
    return args.s[0]


def cmd_experiment(args) -> tuple[list[dict], int, str]:
    name = args.name
    if name == "verlinde":
        gs = args.g or list(range(2, 6))
        ms = args.m or list(range(1, 11))
        pairs = [(g, m) for g in gs for m in ms]
        results = _pmap(lambda gm: verlinde_dimension(*gm), pairs, args.threads)
        recs = [
            {"kind": "table-row", "experiment": "verlinde", "g": r.g, "m": r.m, "value": r.value,
             "nearest": r.nearest, "distance": r.distance, "passed": r.is_integer}
            for r in results
        ]
        ok = all(r.is_integer for r in results)
        return recs, EXIT_OK if ok else EXIT_FAIL, f"verlinde: {'PASS' if ok else 'FAIL'} ({len(recs)} values)"
    if name == "cycle-limit":
        s = _single_s(args, name, 0.25)
        recs = cycle_to_Z_limit(s, args.n or [10, 100, 1000, 10000])
        return _convergence_records(recs, name), EXIT_OK, _final_summary(name, recs)
    if name == "euler":
        m = (args.m or [1])
        if len(m) != 1:
            raise UsageError("experiment euler takes a single --m")
        recs = euler_value_recovery(m[0], args.n or [10, 100, 1000])
        return _convergence_records(recs, name), EXIT_OK, _final_summary(name, recs)
    if name == "rh-ratio":
        modulus = args.modulus if args.modulus is not None else 5
        chi = make_character(modulus, args.chi if args.chi is not None else (modulus - 1) // 2)
        s = _single_s(args, name, complex(0.5, 10.0))
        recs = rh_ratio_experiment(chi, s, args.n or [10, 100, 1000], allow_outside=args.allow_outside)
        return _convergence_records(recs, name), EXIT_OK, _final_summary(name, recs)
    if name == "logdet-z2":
        recs = torus2d_logdet_limit(args.n or [16, 32, 64, 128])
        return _convergence_records(recs, name), EXIT_OK, _final_summary(name, recs)
    if name == "catalan":
        n = args.n or [10]
        if len(n) != 1:
            raise UsageError("experiment catalan takes a single --n (the largest n)")
        rows = catalan_table(n[0])
        recs = [
            {"kind": "table-row", "experiment": "catalan", "n": r.n, "zeta_value": r.zeta_value,
             "central_binomial": r.central_binomial, "catalan": r.catalan, "passed": r.ok}
            for r in rows
        ]
        ok = all(r.ok for r in rows)
        return recs, EXIT_OK if ok else EXIT_FAIL, f"catalan: {'PASS' if ok else 'FAIL'} ({len(rows)} rows)"
    if name == "spanning-trees":
        recs = []
        for n in args.n or list(range(3, 13)):
            for graph, spec, edges in (
                ("cycle", cycle_spectrum(n), [(i, (i + 1) % n) for i in range(n)]),
                ("complete", complete_graph_spectrum(n), [(i, j) for i in range(n) for j in range(i + 1, n)]),
            ):
                count = spanning_trees(spec)
                exact = cofactor_spanning_trees(laplacian_from_edges(n, edges))
                recs.append({"kind": "table-row", "experiment": "spanning-trees", "graph": graph, "n": n,
                             "spectral": count, "cofactor": exact, "passed": count == exact})
        ok = all(r["passed"] for r in recs)
        return recs, EXIT_OK if ok else EXIT_FAIL, f"spanning-trees: {'PASS' if ok else 'FAIL'} ({len(recs)} graphs)"
    raise UsageError(f"unknown experiment {name!r}")


def _final_summary(name: str, recs) -> str:
    last = recs[-1]
    violation = first_nonincreasing_violation(recs)
    trend = "non-increasing" if violation is None else f"increases at n = {recs[violation].n}"
    return f"{name}: final error {last.abs_error:.3g} at n = {last.n}; error {trend}"


# ----------------------------------------------------------------- parser


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write records to this file instead of standard output")
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    common.add_argument("--tol", type=float)
    common.add_argument("--route")

    parser = argparse.ArgumentParser(prog="speczeta", description="Evaluate and cross-check zeta functions of Laplacian spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate one zeta value")
    p_eval.add_argument("--space", type=parse_space, required=True)
    p_eval.add_argument("--s", type=parse_complex, required=True)

    p_table = sub.add_parser("table", parents=[common], help="tabulate over a grid of s")
    p_table.add_argument("--space", type=parse_space, required=True)
    p_table.add_argument("--s", type=parse_grid, required=True)

    p_check = sub.add_parser("check", parents=[common], help="run an identity check")
    p_check.add_argument("identity")
    p_check.add_argument("--s", type=parse_grid)
    p_check.add_argument("--p", type=int)
    p_check.add_argument("--valuation", type=int, default=0)

    p_exp = sub.add_parser("experiment", parents=[common], help="run an experiment")
    p_exp.add_argument("name")
    p_exp.add_argument("--s", type=parse_grid)
    p_exp.add_argument("--g", type=parse_int_list)
    p_exp.add_argument("--m", type=parse_int_list)
    p_exp.add_argument("--n", type=parse_int_list)
    p_exp.add_argument("--modulus", type=int)
    p_exp.add_argument("--chi", type=int)
    p_exp.add_argument("--allow-outside", action="store_true")
    return parser


_COMMANDS = {"eval": cmd_eval, "table": cmd_table, "check": cmd_check, "experiment": cmd_experiment}


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        records, code, summary = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"speczeta: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZetaError as exc:
        print(f"speczeta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = render(records, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    if summary:
        print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

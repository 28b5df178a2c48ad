"""Command line front end: ``coarse-dyn verify ...``, ``coarse-dyn list``,
``coarse-dyn dump-grid``.

Exit status is 0 when every claim of the report passes, 1 when some claim
fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .coarse_maps import compose
from .constructions import get_map
from .errors import CoarseDynError, DomainError, PrecisionError, WindowError
from .exact import MIN_PRECISION, ExactReal, precision, working_precision
from .metric_core import Window
from . import verifier

SCHEMA_HINTS = {
    "squares": "--k K>=1 --n N>=1 [--window LO:HI] [--step Q]",
    "strips": "--k K>=1 (--n N | --l L) [--window LO:HI] [--step Q]",
    "qwerty": "--F F --G G>1 [--C C>0] [--A A] [--D D] [--s S] [--N N]",
    "grid": "--scenario hypothesis [--window LO:HI] [--step Q] [--n-range A:B]",
    "decompose": "[--n-range A:B] [--window LO:HI] [--step Q]",
    "section": "--scenario grid|strip [--k K] [--window LO:HI] [--step Q] [--n-range A:B]",
}

DEFAULT_WINDOWS = {
    "squares": ("1:100", "1/8", None),
    "strips": ("0:64", "1/2", None),
    "grid": ("0:16", "1/2", "1:16"),
    "decompose": ("0:8", "1", "2:64"),
    "section": ("0:16", "1/2", "1:16"),
}


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _window(args, scenario: str) -> Window:
    interval, step, n_range = DEFAULT_WINDOWS[scenario]
    try:
        return Window.parse(args.window or interval, args.step or step, args.n_range or n_range)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad window: {exc}") from exc


def _require(args, scenario: str, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{scenario} needs --{', --'.join(missing)}")


def run_verify(args) -> verifier.ScenarioReport:
    s = args.target
    if s == "squares":
        _require(args, s, "k", "n")
        return verifier.scenario_squares(args.k, args.n, _window(args, s))
    if s == "strips":
        _require(args, s, "k")
        if args.n is None and args.l is None:
            raise UsageError("strips needs --n or --l")
        n = args.n if args.n is not None else args.l * (args.k + 1)
        return verifier.scenario_strips(args.k, n, _window(args, s))
    if s == "qwerty":
        return verifier.scenario_qwerty(args.F, args.G, args.C, args.A, args.D, args.s, args.N)
    if s == "grid":
        if (args.scenario or "hypothesis") != "hypothesis":
            raise UsageError("grid supports --scenario hypothesis")
        return verifier.grid_hypothesis_check(_window(args, s))
    if s == "decompose":
        w = _window(args, s)
        return verifier.scenario_decompose(w.n_range, Window(w.lo, w.hi, w.step))
    if s == "section":
        kind = args.scenario or "grid"
        if kind not in ("grid", "strip"):
            raise UsageError("section supports --scenario grid|strip")
        if kind == "strip":
            w = Window.parse(args.window or "0:64", args.step or "1/2")
        else:
            w = _window(args, s)
        return verifier.scenario_section(kind, args.k or 2, w)
    raise UsageError(f"unknown scenario {s!r}")


def format_report(report: verifier.ScenarioReport, fmt: str, timing: bool = False) -> str:
    data = report.to_dict(timing=timing)
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "claim", "paper_anchor", "verdict", "bound", "value", "witness"])
        for c in data["claims"]:
            w.writerow([data["scenario"], c["id"], c["paper_anchor"], c["verdict"], c["bound_exact"],
                        json.dumps(c["value"], sort_keys=True), json.dumps(c["witness"], sort_keys=True)])
        return buf.getvalue()
    lines = [f"{data['scenario']} {json.dumps(data['params'], sort_keys=True)}"]
    for c in data["claims"]:
        extra = f" bound={c['bound_exact']}" if c["bound_exact"] is not None else ""
        if c["value"] is not None and not isinstance(c["value"], dict):
            extra += f" value={c['value']}"
        lines.append(f"  {c['verdict']}  {c['id']}: {c['paper_anchor']}{extra}")
    lines.append("ALL PASS" if report.passed else "SOME CLAIMS FAILED")
    if timing and data["runtime_ms"] is not None:
        lines.append(f"runtime {data['runtime_ms']} ms")
    return "\n".join(lines) + "\n"


def list_scenarios() -> str:
    return "".join(f"{sid} → {anchor}\n" for sid, anchor in verifier.SCENARIOS.items())


def _resolve(expr: str):
    # "a*b" composes right to left, as in a o b.
    parts = [get_map(p.strip()) for p in expr.split("*")]
    spec = parts[-1]
    for outer in reversed(parts[:-1]):
        spec = compose(outer, spec)
    return spec


def dump_grid(args) -> str:
    a, b = _resolve(args.a), _resolve(args.b)
    if a.domain != b.domain:
        raise UsageError(f"{a.id} and {b.id} have different domains")
    interval, step, n_range = ("0:16", "1/2", "1:8") if a.domain.kind.startswith("grid") else ("1:16", "1/2", None)
    w = Window.parse(args.window or interval, args.step or step, args.n_range or n_range)
    rows = verifier.sup_table(a, b, w)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    if not rows:
        return ""
    fields = rows[0][0]._fields
    cod = rows[0][1]._fields
    out.writerow([f"x.{f}" for f in fields] + [f"a.{f}" for f in cod] + [f"b.{f}" for f in cod] + ["dist"])
    for x, fx, gx, d in rows:
        out.writerow([_cell(c) for p in (x, fx, gx) for c in p] + [str(d)])
    return buf.getvalue()


def _cell(c) -> str:
    if isinstance(c, ExactReal):
        return str(c.as_fraction()) if c.is_rational else repr(float(c))
    return str(c)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coarse-dyn", description="Exact checks for coarse dynamical systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", help="rational interval LO:HI")
    common.add_argument("--step", help="rational grid step, e.g. 1/8")
    common.add_argument("--n-range", dest="n_range", help="square index range A:B for the grid spaces")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--precision", type=int, help=f"mantissa bits for roots (>= {MIN_PRECISION})")

    v = sub.add_parser("verify", parents=[common], help="run a scenario and report PASS/FAIL claims")
    v.add_argument("target", choices=list(verifier.SCENARIOS))
    v.add_argument("--k", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--l", type=int, help="strips: use n = l(k+1)")
    v.add_argument("--scenario", help="grid: hypothesis; section: grid|strip")
    v.add_argument("--format", choices=["json", "csv", "text"], default="text")
    v.add_argument("--timing", action="store_true", help="include runtime_ms in the report")
    for name, default in (("F", "4"), ("G", "2"), ("C", "1"), ("A", "0"), ("D", "1"), ("s", "1")):
        v.add_argument(f"--{name}", type=_fraction, default=Fraction(default), help=f"qwerty (default {default})")
    v.add_argument("--N", type=int, default=40, help="qwerty recurrence length")

    sub.add_parser("list", help="list scenarios")

    d = sub.add_parser("dump-grid", parents=[common], help="CSV table of two maps over a window")
    d.add_argument("--a", default="grid.PsiInv*grid.phi", help="map id; '*' composes")
    d.add_argument("--b", default="id.grid_x", help="map id; '*' composes")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "list":
        sys.stdout.write(list_scenarios())
        return 0
    try:
        bits = args.precision if args.precision is not None else working_precision()
        with precision(bits):
            if args.command == "dump-grid":
                _emit(dump_grid(args), args.output)
                return 0
            report = run_verify(args)
    except (UsageError, DomainError, WindowError, PrecisionError) as exc:
        hint = SCHEMA_HINTS.get(getattr(args, "target", None), "")
        parser.exit(2, f"coarse-dyn: error: {exc}\n" + (f"usage hint: {args.target} {hint}\n" if hint else ""))
    except CoarseDynError as exc:
        parser.exit(2, f"coarse-dyn: error: {exc}\n")
    _emit(format_report(report, args.format, args.timing), args.output)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line runner: ``annuli <subcommand> --config FILE [--set key=value ...]``.

Subcommands: profile, locate, jensen, fmt, borel, logderiv, logderiv-curve,
smt-scan, admissibility.  Each writes one CSV: a comment row embedding the
full config, a header row, the data rows, and (for reports with a verdict)
a trailing ``# summary:`` comment row.  Floats use shortest round-trip
formatting, so output is byte-identical across runs and thread counts.

Exit codes: 0 ok, 1 config error, 2 numerical failure, 3 I/O error.
Numerical warnings (nudged radii, flagged error estimates) do not change the
exit code; they fill the ``warnings`` column.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .config import ExperimentConfig, parse_config
from .errors import AnnuliError, ConfigError, DomainError
from .functions import CurveModel
from .lemmas import admissibility_index, borel_check, logderiv_check, logderiv_curve_check, parse_phi
from .locator import divisors_upto, locate_divisor
from .nevanlinna import fmt_residual, function_divisors, green_jensen_check, nevanlinna_profile
from .parallel import THREADS_ENV, pmap, resolve_threads
from .smt import smt_scan
from .zoo import parse_function

SUBCOMMANDS = ("profile", "locate", "jensen", "fmt", "borel", "logderiv", "logderiv-curve",
               "smt-scan", "admissibility")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


def fmt_value(x) -> str:
    """Locale-independent, round-trip formatting of a table cell."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    if isinstance(x, complex):
        return repr(x)
    return str(x)


def _summary_text(summary: dict) -> str:
    return " ".join(f"{k}={fmt_value(v)}" for k, v in summary.items())


def render_csv(subcommand: str, cfg: ExperimentConfig, columns, rows, summary=None) -> str:
    buf = io.StringIO()
    buf.write(f"# annuli {subcommand} config={json.dumps(dict(cfg.items()), sort_keys=False)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt_value(x) for x in row])
    if summary:
        buf.write(f"# summary: {_summary_text(summary)}\n")
    return buf.getvalue()


# ---------------------------------------------------------------- subcommands

def _model(cfg):
    return parse_function(cfg.function, cfg.annulus())


def _run_profile(cfg, threads):
    prof = nevanlinna_profile(_model(cfg), cfg.grid(), cfg.levels, a=cfg.a if cfg.a is not None else "inf",
                              threads=threads)
    return prof.columns(), prof.rows(), None


def _run_locate(cfg, threads):
    f = _model(cfg)
    t = cfg.locate_radius
    if t >= cfg.R0:
        raise DomainError("locate radius must be < R0")
    zeros, poles, located = divisors_upto(f, t, prefer_exact=False)
    if located is None:
        located = locate_divisor(f, t)
    rows = [list(r) for r in located.rows()]
    summary = {"t": located.t, "residual_winding": located.residual_winding,
               "boxes": located.boxes_evaluated, "zeros": zeros.degree(), "poles": poles.degree()}
    if located.nudges:
        summary["nudged_t"] = located.nudges[-1][1]
    return ["re", "im", "multiplicity", "kind"], rows, summary


def _run_jensen(cfg, threads):
    f = _model(cfg)
    grid = cfg.grid()
    divs = function_divisors(f, min(cfg.R0, grid.radii[-1] * (1 + 1e-3) + 1e-3))
    res = pmap(lambda r: green_jensen_check(f, r, divisors=divs), grid.radii, threads)
    rows = []
    for r, g in zip(grid.radii, res):
        warn = f"radius nudged from {r!r} to {g.radius!r}" if g.radius != r else ""
        rows.append([g.radius, g.lhs, g.rhs, g.gap, g.flux, g.error, warn])
    summary = {"max_gap": max(g.gap for g in res)}
    return ["r", "lhs", "rhs", "gap", "flux", "err_estimate", "warnings"], rows, summary


def _run_fmt(cfg, threads):
    tab = fmt_residual(_model(cfg), cfg.a if cfg.a is not None else "inf", cfg.grid(), threads)
    rows = [[r, t, n, m, q, e, "; ".join(w)] for r, t, n, m, q, e, w in
            zip(tab.radii, tab.T_area, tab.N, tab.m, tab.residual, tab.error, tab.warnings)]
    return (["r", "T_area", "N", "m", "fmt_residual", "err_estimate", "warnings"], rows,
            {"variation": tab.variation})


def _report(rep):
    return rep.columns(), rep.rows(), rep.summary()


def _run_borel(cfg, threads):
    return _report(borel_check(parse_phi(cfg.phi, cfg.R0), cfg.lam, cfg.grid()))


def _run_logderiv(cfg, threads):
    return _report(logderiv_check(_model(cfg), cfg.epsilon, cfg.grid(), cfg.lam, threads))


def _run_logderiv_curve(cfg, threads):
    curve = CurveModel("torus", _model(cfg), cfg.lattice)
    return _report(logderiv_curve_check(curve, cfg.grid(), cfg.epsilon, cfg.lam, threads))


def _run_smt(cfg, threads):
    if cfg.a is None:
        raise DomainError("smt-scan needs a finite nonzero target a")
    return _report(smt_scan(_model(cfg), cfg.a, cfg.k_max, cfg.grid(), threads))


def _run_admissibility(cfg, threads):
    return _report(admissibility_index(_model(cfg), cfg.grid(), threads))


RUNNERS = {
    "profile": _run_profile, "locate": _run_locate, "jensen": _run_jensen, "fmt": _run_fmt,
    "borel": _run_borel, "logderiv": _run_logderiv, "logderiv-curve": _run_logderiv_curve,
    "smt-scan": _run_smt, "admissibility": _run_admissibility,
}


def run(subcommand: str, cfg: ExperimentConfig, threads: int | None = None) -> str:
    """Run one subcommand and return the CSV text."""
    if subcommand not in RUNNERS:
        raise ConfigError(f"unknown subcommand {subcommand!r}", position="argv")
    columns, rows, summary = RUNNERS[subcommand](cfg, resolve_threads(threads))
    return render_csv(subcommand, cfg, columns, rows, summary)


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="annuli", description="Value-distribution experiments on annuli.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config key (repeatable)")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${THREADS_ENV} or 1)")
    p.add_argument("--output", help="output CSV path; overrides the config's output key")
    return p


def _load_config(args) -> ExperimentConfig:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", position=args.config) from None
        cfg = parse_config(text)
        return cfg.with_overrides(args.overrides) if args.overrides else cfg
    return parse_config("\n".join(args.overrides))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.output:
            cfg = cfg.with_overrides([f"output={args.output}"])
        threads = resolve_threads(args.threads)
    except (ConfigError, ValueError) as exc:
        print(f"annuli: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        text = run(args.subcommand, cfg, threads)
    except ConfigError as exc:
        print(f"annuli: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"annuli: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AnnuliError as exc:
        print(f"annuli: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        if cfg.output == "-":
            sys.stdout.write(text)
        else:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"annuli: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``matbands --potential q.json --out results/``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import ALL_CHECKS, analyze
from .bloch import ConvergenceError, SolverConfig
from .monodromy import OracleError
from .potential import PotentialError, dump_potential, load_potential
from .unperturbed import AsymptoticParams, ThresholdError

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3

log = logging.getLogger("matbands")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _c1(text):
    if text == "fit":
        return text
    return _positive_float(text)


def _verify(text):
    if text == "all":
        return ALL_CHECKS
    if text == "none":
        return ()
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [x for x in names if x not in ALL_CHECKS]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown check(s) {bad}; choose from {', '.join(ALL_CHECKS)}, all, none")
    return tuple(x for x in ALL_CHECKS if x in names)


def _thresholds(text):
    if text == "auto":
        return text
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'auto' or N,N1,N2,N3") from None
    if len(values) != 4:
        raise argparse.ArgumentTypeError("expected four integers N,N1,N2,N3")
    return tuple(values)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="matbands",
                description="Bloch bands, gaps and asymptotic checks for periodic matrix "
                            "Schroedinger operators.")
    p.add_argument("--potential", required=True, type=Path, help="potential JSON document")
    p.add_argument("--kmax", type=_positive_int, default=None,
                   help="initial plane-wave truncation K (default: from --nbands)")
    p.add_argument("--tgrid", type=_positive_int, default=101,
                   help="quasimomentum samples on [-pi, pi] (default 101)")
    p.add_argument("--nbands", type=_positive_int, default=16)
    p.add_argument("--c1", type=_c1, default="fit", help="radius constant or 'fit'")
    p.add_argument("--thresholds", type=_thresholds, default="auto",
                   help="'auto' or N,N1,N2,N3")
    p.add_argument("--verify", type=_verify, default=ALL_CHECKS,
                   help="all, none or a comma list of " + ",".join(ALL_CHECKS))
    p.add_argument("--oracle", choices=("on", "off"), default="off")
    p.add_argument("--tol", type=_positive_float, default=1e-8,
                   help="Galerkin convergence tolerance")
    p.add_argument("--dps", type=int, default=60,
                   help="decimal digits for thin-gap resolution (0 disables)")
    p.add_argument("--out", type=Path, default=Path("matbands-out"))
    p.add_argument("--format", choices=("csv", "structured"), default="csv")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def band_table(grid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "n", "lambda"])
    for i, t in enumerate(grid.t_values):
        for n in range(grid.n_bands):
            w.writerow([f"{t:.17g}", n + 1, f"{grid.values[n, i]:.17g}"])
    return buf.getvalue()


def report_document(result) -> dict:
    verdicts = {name: v.to_dict() for name, v in result.verdicts.items()}
    if "theorem4" in verdicts:
        v = verdicts["theorem4"]
        v.setdefault("applicable", v["status"] != "not-applicable")
    doc = {
        "gaps": [g.to_dict() for g in result.gaps],
        "bands": [{"n": b.n, "lo": b.lo, "hi": b.hi, "t_lo": b.t_lo, "t_hi": b.t_hi}
                  for b in result.bands],
        "verdicts": verdicts,
        "passed": result.passed,
    }
    if result.oracle is not None:
        doc["oracle"] = result.oracle
    return doc


def manifest_document(args, raw: bytes, potential, result) -> dict:
    fit = result.fit
    return {
        "version": __version__,
        "potential": {"path": str(args.potential), "sha256": hashlib.sha256(raw).hexdigest(),
                      "document": dump_potential(potential)},
        "solver": {**asdict(result.config), "effective_truncation": result.grid.truncation,
                   "residual": result.grid.residual},
        "mean_spectrum": {"values": result.spectrum.distinct_values.tolist(),
                          "multiplicities": list(result.spectrum.multiplicities)},
        "asymptotics": {**asdict(result.params),
                        "c1_mode": "fit" if args.c1 == "fit" else "fixed",
                        "thresholds_mode": "auto" if args.thresholds == "auto" else "fixed",
                        "fit": None if fit is None else {"c1": fit.c1, "raw": fit.raw,
                                                         "witness": fit.witness}},
        "verify": list(args.verify),
        "oracle": args.oracle,
        "dps": args.dps,
        "format": args.format,
    }


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        raw = args.potential.read_bytes()
    except OSError as exc:
        print(f"matbands: cannot read potential: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        potential = load_potential(raw.decode("utf-8"))
    except (PotentialError, UnicodeDecodeError) as exc:
        print(f"matbands: invalid potential {args.potential}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        config = SolverConfig(truncation=args.kmax, t_samples=args.tgrid,
                              n_bands=args.nbands, convergence_tol=args.tol)
        if args.thresholds == "auto":
            params = AsymptoticParams(c1=1.0 if args.c1 == "fit" else args.c1)
        else:
            N, N1, N2, N3 = args.thresholds
            params = AsymptoticParams(c1=1.0 if args.c1 == "fit" else args.c1,
                                      N=N, N1=N1, N2=N2, N3=N3)
    except ValueError as exc:
        print(f"matbands: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        result = analyze(potential, config, params, fit=args.c1 == "fit",
                         auto=args.thresholds == "auto", checks=args.verify,
                         dps=max(args.dps, 0), oracle=args.oracle == "on")
    except ConvergenceError as exc:
        print(f"matbands: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OracleError as exc:
        print(f"matbands: oracle failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ThresholdError as exc:
        print(f"matbands: {exc}; pass --thresholds explicitly", file=sys.stderr)
        return EXIT_SOLVER

    args.out.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        (args.out / "bands.csv").write_text(band_table(result.grid))
    else:
        (args.out / "bands.json").write_text(_json({
            "t": result.grid.t_values.tolist(),
            "lambda": result.grid.values.tolist()}))
    (args.out / "report.json").write_text(_json(report_document(result)))
    (args.out / "manifest.json").write_text(_json(manifest_document(args, raw, potential,
                                                                     result)))
    if result.oracle is not None and not result.oracle["passed"]:
        print("matbands: Galerkin and monodromy eigenvalues disagree", file=sys.stderr)
        return EXIT_SOLVER
    if not result.passed:
        failed = [k for k, v in result.verdicts.items() if not v.passed]
        print(f"matbands: verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def main():
    sys.exit(run())

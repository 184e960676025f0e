"""Command-line harness.

Subcommands: ``check``, ``rigidity``, ``simplex-rigidity``, ``scan-f`` and
``geodesic-dump``. Reports are JSON (see :mod:`bornrigidity.report`);
``geodesic-dump`` writes one CSV per curve.

Exit codes: 0 when nothing failed, 1 on FAIL or PREMISE_VIOLATED, 2 on a
usage or configuration error, 3 on INCONCLUSIVE.
"""

import argparse
import csv
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import report
from ._validation import TOL_EQ, TOL_INEQ, DomainError
from .admissibility import (
    FQ_FLOOR,
    H1_LENGTH_TOL,
    check_admissibility,
    default_suite,
    fisher_profile,
    sample_states,
)
from .escort import FIT_TOL, GRID, SCANS, escort_rigidity_test
from .projective import RNG_ALGORITHM
from .readouts import EscortReadout, parse_generator, parse_readout
from .rigidity import parse_self_map, readout_rigidity_check, simplex_rigidity_check

SEED_ENV = "BORNRIGIDITY_SEED"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

CSV_COLUMNS = ("s", "F_Q", "F_cl", "ratio", "d_FS_nearest_vertex")


@dataclass
class RunConfig:
    command: str
    d: int = 2
    readout: str | None = None
    generator: str | None = None
    map: str | None = None
    modes: list = field(default_factory=list)
    dims: list = field(default_factory=list)
    grid: int = GRID
    curves: int = 100
    circles: int = 20
    samples: int = 1000
    nodes: int = 64
    seed: int = 0
    tol_eq: float = TOL_EQ
    tol_ineq: float = TOL_INEQ
    h1_tol: float = H1_LENGTH_TOL
    out_path: str | None = None
    rng: str = RNG_ALGORITHM

    def validate(self):
        if self.d < 2:
            raise DomainError("--d must be at least 2")
        for name in ("curves", "samples", "nodes", "grid"):
            if getattr(self, name) < 1:
                raise DomainError(f"--{name} must be at least 1")
        if self.circles < 0:
            raise DomainError("--circles must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise DomainError("--seed must be a 64-bit unsigned integer")
        need = {"check": "readout", "rigidity": "readout", "geodesic-dump": "readout",
                "simplex-rigidity": "map", "scan-f": "generator"}
        if getattr(self, need[self.command]) is None:
            raise DomainError(f"{self.command} needs --{'f' if need[self.command] == 'generator' else need[self.command]}")
        if self.command == "geodesic-dump" and self.out_path is None:
            raise DomainError("geodesic-dump needs --out DIR")
        return self


def _emit(cfg, verdicts, witnesses):
    text = report.dumps(report.build_report(asdict(cfg), verdicts, witnesses)) + "\n"
    if cfg.out_path is None:
        sys.stdout.write(text)
    else:
        Path(cfg.out_path).write_text(text)


def _suite(cfg):
    return default_suite(cfg.d, cfg.seed, n_pairs=cfg.curves, n_circles=cfg.circles, nodes=cfg.nodes)


def run_check(cfg):
    P = parse_readout(cfg.readout)
    suite = _suite(cfg)
    rep = check_admissibility(P, suite, sample_states(cfg.d, cfg.seed, cfg.samples), cfg.tol_eq, cfg.tol_ineq, cfg.h1_tol)
    body = rep.to_dict()
    for v in body["verdicts"]:
        v["readout"] = body["readout"]
    _emit(cfg, body["verdicts"], [w.to_dict() for w in rep.witnesses])
    return EXIT_OK if rep.passed else EXIT_FAIL


def _verdict_exit(verdict):
    if verdict.confirmed:
        return EXIT_OK
    return EXIT_INCONCLUSIVE if verdict.conclusion == "INCONCLUSIVE" else EXIT_FAIL


def run_rigidity(cfg):
    if cfg.command == "simplex-rigidity":
        T = parse_self_map(cfg.map)
        verdict = simplex_rigidity_check(T, cfg.d, cfg.seed, cfg.samples, cfg.tol_eq, cfg.tol_ineq)
        subject = {"map": T.name}
    else:
        P = parse_readout(cfg.readout)
        suite = _suite(cfg)
        samples = sample_states(cfg.d, cfg.seed, cfg.samples)
        if isinstance(P, EscortReadout):
            verdict = escort_rigidity_test(P.generator, suite, samples, cfg.tol_eq)
        else:
            verdict = readout_rigidity_check(P, suite, samples, cfg.tol_eq, cfg.tol_ineq)
        subject = {"readout": P.spec}
    out = {**subject, **verdict.to_dict()}
    _emit(cfg, [out], [verdict.witness.to_dict()] if verdict.witness else [])
    return _verdict_exit(verdict)


def run_scan_f(cfg):
    f = parse_generator(cfg.generator)
    reports = []
    for mode in cfg.modes:
        if mode == "normalization":
            reports.append(SCANS[mode](f, cfg.dims or (3, 4, 5), cfg.grid, cfg.tol_eq))
        elif mode == "linear":
            reports.append(SCANS[mode](f, cfg.grid, FIT_TOL))
        else:
            reports.append(SCANS[mode](f, cfg.grid, cfg.tol_eq))
    _emit(cfg, [r.to_dict() for r in reports], [r.witness.to_dict() for r in reports if r.witness])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _fmt(x):
    return format(float(x), ".17g")


def run_geodesic_dump(cfg):
    """One CSV per suite curve over its interior nodes."""
    P = parse_readout(cfg.readout)
    suite = _suite(cfg)
    out = Path(cfg.out_path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DomainError(f"cannot create output directory {out}: {exc}") from exc
    header = list(CSV_COLUMNS) + [f"R_{i + 1}" for i in range(cfg.d)]
    for idx, curve in enumerate(suite.curves):
        s, fcl, fq = fisher_profile(P, curve, cfg.nodes)
        R = P.sqrt_transform(curve(s))
        ratio = np.where(fq >= FQ_FLOOR, fcl / np.maximum(fq, FQ_FLOOR), np.nan)
        nearest = np.arccos(np.clip(np.max(np.abs(curve(s)), axis=1), 0.0, 1.0))
        path = out / f"curve_{idx:04d}_{curve.label.replace('(', '_').replace(')', '').replace(',', '_')}.csv"
        try:
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(header)
                for k in range(s.size):
                    writer.writerow([_fmt(v) for v in (s[k], fq[k], fcl[k], ratio[k], nearest[k], *R[k])])
        except OSError as exc:
            raise DomainError(f"cannot write {path}: {exc}") from exc
    return EXIT_OK


COMMANDS = {
    "check": run_check,
    "rigidity": run_rigidity,
    "simplex-rigidity": run_rigidity,
    "scan-f": run_scan_f,
    "geodesic-dump": run_geodesic_dump,
}


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _modes(text):
    modes = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in modes if m not in SCANS]
    if bad or not modes:
        raise argparse.ArgumentTypeError(f"modes must be among {', '.join(SCANS)}")
    return modes


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer, got {raw!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--tol-eq", type=float, default=TOL_EQ)
    common.add_argument("--tol-ineq", type=float, default=TOL_INEQ)
    common.add_argument("--out", default=None, help="report path (stdout if omitted); a directory for geodesic-dump")

    suite = argparse.ArgumentParser(add_help=False)
    suite.add_argument("--d", type=int, default=2, help="number of outcomes")
    suite.add_argument("--curves", type=int, default=100, help="Haar pair geodesics in the suite")
    suite.add_argument("--circles", type=int, default=20, help="Haar great circles in the suite")
    suite.add_argument("--nodes", type=int, default=64, help="intervals per curve")
    suite.add_argument("--samples", type=int, default=1000, help="Haar states for the Born deviation")
    suite.add_argument("--h1-tol", type=float, default=H1_LENGTH_TOL)

    parser = argparse.ArgumentParser(prog="bornrigidity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common, suite], help="run H1, H2, H3 and the Born deviation")
    p.add_argument("--readout", required=True)
    p = sub.add_parser("rigidity", parents=[common, suite], help="readout rigidity verdict")
    p.add_argument("--readout", required=True)
    p = sub.add_parser("simplex-rigidity", parents=[common], help="simplex self-map rigidity verdict")
    p.add_argument("--map", required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--samples", type=int, default=200)
    p = sub.add_parser("scan-f", parents=[common], help="functional-equation scans of a generator")
    p.add_argument("--f", dest="generator", required=True)
    p.add_argument("--mode", dest="modes", type=_modes, default=["normalization"])
    p.add_argument("--dims", type=_int_list, default=[3, 4, 5])
    p.add_argument("--grid", type=int, default=GRID)
    p = sub.add_parser("geodesic-dump", parents=[common, suite], help="per-node CSV dumps along suite curves")
    p.add_argument("--readout", required=True)
    return parser


def config_from_args(args):
    kw = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    kw["out_path"] = args.out
    kw["seed"] = args.seed if args.seed is not None else _default_seed()
    if args.command != "scan-f":
        kw.pop("dims", None)
    return RunConfig(**kw).validate()


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except (DomainError, ValueError, OSError) as exc:
        print(f"bornrigidity {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

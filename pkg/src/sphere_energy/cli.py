"""Command line interface: ``sphere-energy <command> ...``.

Exit status is 0 on success, 1 when ``--strict-exit`` is set and a test
rejects at ``--alpha``, and 2 on bad input or usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import energy_stats, verify
from .measures import DiscreteMeasure, fingerprint
from .sphere_core import MIN_NORM, Hemisphere, UnitVector

WEIGHTS_HEADER = "# weights"
SIG_DIGITS = 12


class ParseError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    seed: int = 0
    samples: int = 100_000
    permutations: int = 999
    r: float = 1.0
    alpha: float = 0.05
    output_format: str = "json"
    options: dict = field(default_factory=dict)


def parse_points(path) -> tuple[list[UnitVector], np.ndarray]:
    """Read a CSV of points, one per row.

    A first line ``# weights`` marks the last column as atom weights;
    otherwise every point gets weight ``1 / rows``. Rows are normalized to
    unit length. Blank lines are skipped.

    Raises
    ------
    ParseError
        On ragged rows, non-numeric fields or (near) zero vectors; the
        message names the 1-based line number.
    """
    points, weights = [], []
    has_weights = False
    arity = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            fields = [f.strip() for f in row]
            if not any(fields):
                continue
            if lineno == 1 and fields[0].lower().replace(" ", "") == "#weights":
                has_weights = True
                continue
            if arity is None:
                arity = len(fields)
                if arity < (3 if has_weights else 2):
                    raise ParseError(f"line {lineno}: too few columns")
            elif len(fields) != arity:
                raise ParseError(
                    f"line {lineno}: expected {arity} fields, got {len(fields)}")
            try:
                values = [float(f) for f in fields]
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
            coords = values[:-1] if has_weights else values
            if not all(math.isfinite(v) for v in values):
                raise ParseError(f"line {lineno}: non-finite value")
            if math.hypot(*coords) < MIN_NORM:
                raise ParseError(f"line {lineno}: vector norm below {MIN_NORM:g}")
            points.append(UnitVector(coords))
            if has_weights:
                weights.append(values[-1])
    if not points:
        raise ParseError(f"{path}: no points")
    if has_weights:
        w = np.array(weights)
    else:
        w = np.full(len(points), 1.0 / len(points))
    return points, w


def _round(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIG_DIGITS}g}")
    if isinstance(value, dict):
        return {k: _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_round(v) for v in value]
    return value


def format_report(report: dict, output_format: str) -> str:
    report = _round(report)
    if output_format == "json":
        return json.dumps(report, sort_keys=True)
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else k, value[k])
        elif isinstance(value, list):
            lines.append(f"{prefix}\t" + ",".join(json.dumps(v) for v in value))
        else:
            lines.append(f"{prefix}\t{json.dumps(value)}")

    walk("", report)
    return "\n".join(lines)


def _config_echo(cfg: RunConfig) -> dict:
    return {"command": cfg.command, "inputs": [str(p) for p in cfg.inputs],
            "seed": cfg.seed, "samples": cfg.samples,
            "permutations": cfg.permutations, "r": cfg.r, "alpha": cfg.alpha,
            **{k: v for k, v in cfg.options.items() if k != "samples_given"}}


def _reference_sampler(spec: str, dim: int):
    if spec == "uniform":
        return energy_stats.uniform_sampler(dim)
    parts = spec.split(":", 2)
    if parts[0] == "vmf" and len(parts) == 3:
        try:
            kappa = float(parts[1])
        except ValueError:
            raise ParseError(f"bad kappa in --ref {spec!r}") from None
        poles, _ = parse_points(parts[2])
        if poles[0].dim != dim:
            raise ParseError("vmf pole dimension differs from the sample")
        return energy_stats.vmf_sampler(poles[0], kappa)
    raise ParseError(f"unknown reference {spec!r}; use uniform or "
                     "vmf:<kappa>:<pole-file>")


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute a configured command; returns ``(exit_status, report)``."""
    cmd = cfg.command
    opts = cfg.options
    rejected = False
    if cmd == "test-independence":
        xs, _ = parse_points(cfg.inputs[0])
        ys, _ = parse_points(cfg.inputs[1])
        result = energy_stats.independence_test(
            energy_stats.PairedSample(xs, ys), cfg.r, cfg.permutations, cfg.seed)
        report = result.to_dict()
        rejected = result.p_value <= cfg.alpha
    elif cmd == "test-two-sample":
        a, _ = parse_points(cfg.inputs[0])
        b, _ = parse_points(cfg.inputs[1])
        result = energy_stats.two_sample_test(a, b, cfg.r, cfg.permutations,
                                              cfg.seed)
        report = result.to_dict()
        rejected = result.p_value <= cfg.alpha
    elif cmd == "test-gof":
        a, _ = parse_points(cfg.inputs[0])
        sampler = _reference_sampler(opts["ref"], a[0].dim)
        m = opts.get("m") or max(len(a), 200)
        result = energy_stats.gof_test(a, sampler, m, cfg.r, cfg.permutations,
                                       cfg.seed)
        report = result.to_dict()
        rejected = result.p_value <= cfg.alpha
    elif cmd == "cluster":
        pts, _ = parse_points(cfg.inputs[0])
        result = energy_stats.energy_cluster(pts, opts["k"], cfg.r)
        report = {"labels": result.labels.tolist(),
                  "merges": [list(mg) for mg in result.merges]}
    elif cmd == "fingerprint":
        atoms, weights = parse_points(cfg.inputs[0])
        dirs, _ = parse_points(opts["directions"])
        restriction = None
        if opts.get("restrict"):
            rp, _ = parse_points(opts["restrict"])
            restriction = Hemisphere(rp[0])
        fp = fingerprint(DiscreteMeasure(atoms, weights), dirs, restriction)
        report = {"masses": fp.masses.tolist(),
                  "directions": fp.directions.tolist()}
    elif cmd == "verify":
        check = opts["check"]
        kwargs = {"seed": cfg.seed}
        if check == "identity":
            kwargs["samples"] = cfg.samples
        elif opts.get("trials") is not None:
            kwargs["trials"] = opts["trials"]
        if check == "energy" and opts.get("samples_given"):
            kwargs["samples"] = cfg.samples
        report = verify.CHECKS[check](**kwargs)
    else:
        raise ParseError(f"unknown command {cmd!r}")
    report = {**report, "config": _config_echo(cfg)}
    status = 1 if (rejected and opts.get("strict_exit")) else 0
    return status, report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--permutations", type=int, default=999)
    common.add_argument("-r", "--r", type=float, default=1.0,
                        help="metric exponent in (0, 1]")
    common.add_argument("--alpha", type=float, default=0.05)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--strict-exit", action="store_true",
                        help="exit 1 when a test rejects at --alpha")

    parser = argparse.ArgumentParser(
        prog="sphere-energy",
        description="Energy statistics with angular distances on spheres.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("test-independence", parents=[common],
                       help="distance covariance permutation test")
    p.add_argument("x")
    p.add_argument("y")
    p = sub.add_parser("test-two-sample", parents=[common],
                       help="energy distance permutation test")
    p.add_argument("a")
    p.add_argument("b")
    p = sub.add_parser("test-gof", parents=[common],
                       help="goodness of fit against a reference distribution")
    p.add_argument("a")
    p.add_argument("--ref", required=True,
                   help="uniform or vmf:<kappa>:<pole-file>")
    p.add_argument("--m", type=int, default=None,
                   help="reference draws (default max(n, 200))")
    p = sub.add_parser("cluster", parents=[common],
                       help="energy-linkage hierarchical clustering")
    p.add_argument("points")
    p.add_argument("--k", type=int, required=True)
    p = sub.add_parser("verify", parents=[common],
                       help="numerical checks of the hemisphere identities")
    p.add_argument("check", choices=sorted(verify.CHECKS))
    p.add_argument("--trials", type=int, default=None)
    p = sub.add_parser("fingerprint", parents=[common],
                       help="hemisphere masses of a measure")
    p.add_argument("measure")
    p.add_argument("--directions", required=True)
    p.add_argument("--restrict", default=None,
                   help="file whose first row is the pole of a restricting hemisphere")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    positional = {"test-independence": ("x", "y"), "test-two-sample": ("a", "b"),
                  "test-gof": ("a",), "cluster": ("points",),
                  "fingerprint": ("measure",), "verify": ()}
    inputs = [getattr(args, name) for name in positional[args.command]]
    options = {"strict_exit": args.strict_exit}
    for name in ("ref", "m", "k", "check", "trials", "directions", "restrict"):
        if hasattr(args, name):
            options[name] = getattr(args, name)
    options["samples_given"] = args.samples is not None
    return RunConfig(
        command=args.command, inputs=inputs, seed=args.seed,
        samples=args.samples if args.samples is not None else 100_000,
        permutations=args.permutations, r=args.r, alpha=args.alpha,
        output_format=args.format, options=options)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cfg = config_from_args(args)
    try:
        status, report = run(cfg)
    except (OSError, ValueError) as exc:
        print(f"sphere-energy: error: {exc}", file=sys.stderr)
        return 2
    print(format_report(report, cfg.output_format))
    return status


if __name__ == "__main__":
    sys.exit(main())

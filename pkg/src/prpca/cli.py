"""Command line interface.

Subcommands: ``recover`` (denoise one PGM image), ``simulate`` (run a
synthetic grid to CSV), ``diagnose`` (identifiability report for a stored
instance). Exit codes: 0 success, 2 format or input error, 3 solver
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import diagnostics, image, simulation
from .errors import FormatError, NumericalFailure, PrpcaError
from .interpolation import projector_pair

RECOVER_CSV_HEADER = "width,height,kind,sigma,seed,lambda1,lambda2,rmse,seconds,iterations,clamped,status"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prpca", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    rec = sub.add_parser("recover", help="denoise a binary PGM image")
    rec.add_argument("--in", dest="infile", required=True, help="input PGM")
    rec.add_argument("--kind", choices=("identity", "single", "double"), required=True)
    rec.add_argument("--sigma", type=float, required=True, help="noise level")
    rec.add_argument("--clean", help="clean reference PGM for RMSE")
    rec.add_argument(
        "--seed",
        type=int,
        help="when given, add N(0, sigma^2) noise to the input before recovering",
    )
    rec.add_argument("--lambda1", type=float)
    rec.add_argument("--lambda2", type=float)
    rec.add_argument("--max-iters", type=int, default=500)
    rec.add_argument("--out", required=True, help="recovered PGM path")
    rec.add_argument("--metrics", help="optional metrics CSV path")
    rec.add_argument(
        "--no-timing",
        action="store_true",
        help="zero the seconds column so repeated runs are byte identical",
    )

    sim = sub.add_parser("simulate", help="run a synthetic grid to CSV")
    sim.add_argument("--spec", required=True, help="key=value spec file")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--no-timing", action="store_true", help="zero the seconds column")

    dia = sub.add_parser("diagnose", help="identifiability report for an instance directory")
    dia.add_argument("--instance", required=True, help="directory with x0.csv, y0.csv, config.txt")
    dia.add_argument("--out", required=True, help="key=value report path")
    dia.add_argument("--csv", help="optional single-row CSV path")
    return parser


def _parse_keyvalues(text: str, where: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{where} line {lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _parse_spec_file(path: str) -> list[simulation.SimulationSpec]:
    """Expand a key=value file into specs; comma-separated values form a
    grid over their cross product."""
    values = _parse_keyvalues(Path(path).read_text(encoding="utf-8"), path)
    for required in ("N", "r", "sigma", "rho_s"):
        if required not in values:
            raise FormatError(f"spec file {path} is missing {required}=")
    gridded = {
        "N": [int(v) for v in values["N"].split(",")],
        "r": [int(v) for v in values["r"].split(",")],
        "sigma": [float(v) for v in values["sigma"].split(",")],
        "rho_s": [float(v) for v in values["rho_s"].split(",")],
    }
    kinds = tuple(k.strip() for k in values.get("kinds", "identity,single").split(","))
    fixed = {
        "reps": int(values.get("reps", "1")),
        "seed": int(values.get("seed", "0")),
        "solver_kinds": kinds,
        "max_iters": int(values.get("max_iters", "1000")),
        "rel_tol": float(values.get("rel_tol", "1e-7")),
    }
    if "lambda1" in values:
        fixed["lambda1"] = float(values["lambda1"])
    if "lambda2" in values:
        fixed["lambda2"] = float(values["lambda2"])
    specs = []
    for N in gridded["N"]:
        M = int(values["M"]) if "M" in values else N
        for r in gridded["r"]:
            for sigma in gridded["sigma"]:
                for rho_s in gridded["rho_s"]:
                    specs.append(
                        simulation.SimulationSpec(
                            N=N, M=M, r=r, sigma=sigma, rho_s=rho_s, **fixed
                        )
                    )
    return specs


def _cmd_recover(args) -> int:
    img = image.load_pgm(args.infile)
    clean = image.load_pgm(args.clean) if args.clean else None
    noisy = img
    if args.seed is not None:
        noisy = image.add_noise(img, args.sigma, args.seed)
        if clean is None:
            clean = img
    recovered, metrics = image.recover(
        noisy,
        kind=args.kind,
        sigma=args.sigma,
        clean=clean,
        lambda1=args.lambda1,
        lambda2=args.lambda2,
        max_iters=args.max_iters,
    )
    image.save_pgm(recovered, args.out)
    if args.metrics:
        seconds = 0.0 if args.no_timing else metrics["seconds"]
        row = [
            str(img.width),
            str(img.height),
            args.kind,
            format(args.sigma, ".12g"),
            "" if args.seed is None else str(args.seed),
            format(metrics["lambda1"], ".12g"),
            format(metrics["lambda2"], ".12g"),
            format(metrics["rmse"], ".12g"),
            format(seconds, ".6f"),
            str(metrics["iterations"]),
            str(metrics["clamped"]),
            "ok",
        ]
        with open(args.metrics, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(RECOVER_CSV_HEADER + "\n" + ",".join(row) + "\n")
    return 0


def _cmd_simulate(args) -> int:
    specs = _parse_spec_file(args.spec)
    rows = simulation.run_grid(specs)
    simulation.write_csv(rows, args.out, include_timing=not args.no_timing)
    return 0


def _load_instance_dir(path: str):
    root = Path(path)
    x0_path, y0_path = root / "x0.csv", root / "y0.csv"
    config_path = root / "config.txt"
    for p in (x0_path, y0_path, config_path):
        if not p.exists():
            raise FormatError(f"instance directory is missing {p.name}")
    X0 = np.atleast_2d(np.loadtxt(x0_path, delimiter=",", dtype=float))
    Y0 = np.atleast_2d(np.loadtxt(y0_path, delimiter=",", dtype=float))
    e_path = root / "e.csv"
    E = np.atleast_2d(np.loadtxt(e_path, delimiter=",", dtype=float)) if e_path.exists() else np.zeros_like(Y0)
    config = _parse_keyvalues(config_path.read_text(encoding="utf-8"), str(config_path))
    return X0, Y0, E, config


def _cmd_diagnose(args) -> int:
    X0, Y0, E, config = _load_instance_dir(args.instance)
    N, M = Y0.shape
    kind = config.get("kind", "single")
    pair = projector_pair(kind, N, M)
    for required in ("lambda1", "lambda2"):
        if required not in config:
            raise FormatError(f"config.txt must set {required}= (the report is penalty dependent)")
    from .projectors import lowrank_projector

    inputs = diagnostics.BoundInputs(
        r=lowrank_projector(X0).rank,
        s=int(np.count_nonzero(Y0)),
        c=float(config.get("c", "1.1")),
        rho=float(config.get("rho", np.sqrt(M / N))),
        lambda1=float(config["lambda1"]),
        lambda2=float(config["lambda2"]),
        eta0=float(config.get("eta0", "1.0")),
    )
    report = diagnostics.build_report(X0, Y0, E, pair, inputs)
    Path(args.out).write_text(report.to_text(), encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(
            report.csv_header() + "\n" + report.to_csv_row() + "\n", encoding="utf-8"
        )
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "recover":
            return _cmd_recover(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_diagnose(args)
    except NumericalFailure as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return 3
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PrpcaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

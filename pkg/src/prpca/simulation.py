"""Synthetic-experiment harness: instance generation, RMSE metrics, grid
execution, CSV reporting.

Randomness contract
-------------------
Every draw comes from a Philox counter-based generator keyed by
``(seed, rep_index * 256 + purpose_code)`` where the purpose codes are
fixed small integers per draw site (low-rank factors, sparse mask, sparse
values, noise). Gaussians are produced by the Box-Muller transform over the
generator's uniforms. Identical (spec, seed) therefore yield bitwise
identical instances regardless of execution order, and independent draw
sites never share a stream.
"""

from __future__ import annotations

import dataclasses
import time

import numpy as np

from . import linalg
from .errors import InvalidParameter, PrpcaError, ShapeError
from .interpolation import ProjectorPair, projector_pair
from .solver import SolveConfig, default_penalties, solve

CSV_HEADER = "N,M,r,sigma,rho_s,rep,kind,rmse_lowrank,rmse_sparse,rmse_theta,seconds,iterations,status"

_KIND_ORDER = {"identity": 0, "single": 1, "double": 2}

_PURPOSES = {
    "lowrank_u": 1,
    "lowrank_v": 2,
    "sparse_mask": 3,
    "sparse_value": 4,
    "noise": 5,
    "image_noise": 6,
}


def stream(seed: int, rep_index: int, purpose: str) -> np.random.Generator:
    """Philox stream split by (seed, rep_index, purpose)."""
    if seed < 0 or rep_index < 0:
        raise InvalidParameter("seed and rep_index must be nonnegative")
    code = _PURPOSES[purpose]
    key = np.array([np.uint64(seed), np.uint64(rep_index * 256 + code)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def gaussian(gen: np.random.Generator, shape: tuple[int, ...], sigma: float) -> np.ndarray:
    """N(0, sigma^2) draws via Box-Muller over the generator's uniforms."""
    count = int(np.prod(shape))
    pairs = (count + 1) // 2
    u1 = gen.random(pairs)
    u2 = gen.random(pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]
    return sigma * z.reshape(shape)


@dataclasses.dataclass(frozen=True)
class SimulationSpec:
    N: int
    M: int
    r: int
    sigma: float
    rho_s: float
    reps: int
    seed: int
    solver_kinds: tuple[str, ...] = ("identity", "single")
    lambda1: float | None = None
    lambda2: float | None = None
    max_iters: int = 1000
    rel_tol: float = 1e-7

    def __post_init__(self):
        if self.N % 2 or self.M % 2 or self.N < 4 or self.M < 4:
            raise InvalidParameter("N and M must be even and at least 4")
        if not 0.0 <= self.rho_s <= 1.0:
            raise InvalidParameter("rho_s must lie in [0, 1]")
        if not 0 <= self.r <= min(self.N, self.M) // 2:
            raise InvalidParameter("r must satisfy 0 <= r <= min(N, M) / 2")
        if self.reps < 1:
            raise InvalidParameter("reps must be at least 1")
        if self.sigma < 0:
            raise InvalidParameter("sigma must be nonnegative")
        if self.seed < 0:
            raise InvalidParameter("seed must be nonnegative")
        unknown = set(self.solver_kinds) - set(_KIND_ORDER)
        if unknown:
            raise InvalidParameter(f"unsupported solver kinds: {sorted(unknown)}")


@dataclasses.dataclass(frozen=True)
class Instance:
    Z: np.ndarray
    X0: np.ndarray
    Y0: np.ndarray
    Theta: np.ndarray
    E: np.ndarray
    pair0: ProjectorPair


def generate_instance(spec: SimulationSpec, rep_index: int) -> Instance:
    """One synthetic dataset Z = P0 X0 Q0^T + Y0 + E.

    P0 = Q0 are single interpolation matrices; X0 = U0 V0^T with half-size
    Gaussian factors of entry deviation sigma; Y0 entries are nonzero with
    probability rho_s, uniform on [-5, 5]; E is Gaussian noise. The draw is
    deterministic given (spec.seed, rep_index).
    """
    if rep_index < 0:
        raise InvalidParameter("rep_index must be nonnegative")
    n, m = spec.N // 2, spec.M // 2
    U0 = gaussian(stream(spec.seed, rep_index, "lowrank_u"), (n, spec.r), spec.sigma)
    V0 = gaussian(stream(spec.seed, rep_index, "lowrank_v"), (m, spec.r), spec.sigma)
    X0 = U0 @ V0.T if spec.r else np.zeros((n, m))
    mask = stream(spec.seed, rep_index, "sparse_mask").random((spec.N, spec.M)) < spec.rho_s
    values = -5.0 + 10.0 * stream(spec.seed, rep_index, "sparse_value").random((spec.N, spec.M))
    Y0 = np.where(mask, values, 0.0)
    E = gaussian(stream(spec.seed, rep_index, "noise"), (spec.N, spec.M), spec.sigma)
    pair0 = projector_pair("single", spec.N, spec.M)
    Theta = pair0.apply(X0) + Y0
    return Instance(Z=Theta + E, X0=X0, Y0=Y0, Theta=Theta, E=E, pair0=pair0)


def rmse(A, B) -> float:
    """Frobenius distance normalized by sqrt(entry count)."""
    Am = linalg.as_matrix(A, "A")
    Bm = linalg.as_matrix(B, "B")
    if Am.shape != Bm.shape:
        raise ShapeError(f"shape mismatch {Am.shape} vs {Bm.shape}")
    return float(np.linalg.norm(Am - Bm) / np.sqrt(Am.size))


def run_grid(spec_list) -> list[dict]:
    """Solve every (spec, rep, kind) cell and return one row dict per cell.

    Rows come out in canonical order (spec position, rep, kind) no matter
    how execution is scheduled. Solver errors are recorded in the row's
    ``status`` instead of aborting the grid.
    """
    specs = list(spec_list)
    if not specs:
        raise InvalidParameter("spec_list must be nonempty")
    rows = []
    for spec in specs:
        lam1, lam2 = spec.lambda1, spec.lambda2
        if lam1 is None or lam2 is None:
            d1, d2 = default_penalties(spec.N, spec.sigma)
            lam1 = d1 if lam1 is None else lam1
            lam2 = d2 if lam2 is None else lam2
        kinds = sorted(spec.solver_kinds, key=_KIND_ORDER.__getitem__)
        for rep in range(spec.reps):
            inst = generate_instance(spec, rep)
            for kind in kinds:
                row = {
                    "N": spec.N,
                    "M": spec.M,
                    "r": spec.r,
                    "sigma": spec.sigma,
                    "rho_s": spec.rho_s,
                    "rep": rep,
                    "kind": kind,
                    "rmse_lowrank": float("nan"),
                    "rmse_sparse": float("nan"),
                    "rmse_theta": float("nan"),
                    "seconds": 0.0,
                    "iterations": 0,
                    "status": "ok",
                }
                try:
                    pair = projector_pair(kind, spec.N, spec.M)
                    config = SolveConfig(
                        Z=inst.Z,
                        pair=pair,
                        lambda1=lam1,
                        lambda2=lam2,
                        max_iters=spec.max_iters,
                        rel_tol=spec.rel_tol,
                        accelerate=True,
                    )
                    start = time.perf_counter()
                    result = solve(config)
                    elapsed = time.perf_counter() - start
                    lowrank_hat = pair.apply(result.Xhat)
                    row["rmse_lowrank"] = rmse(lowrank_hat, inst.pair0.apply(inst.X0))
                    row["rmse_sparse"] = rmse(result.Yhat, inst.Y0)
                    row["rmse_theta"] = rmse(result.ThetaHat, inst.Theta)
                    row["seconds"] = elapsed
                    row["iterations"] = result.iterations
                except PrpcaError as exc:
                    row["status"] = type(exc).__name__
                rows.append(row)
    return rows


def _format_cell(key: str, value) -> str:
    if key in ("N", "M", "r", "rep", "iterations"):
        return str(int(value))
    if key in ("kind", "status"):
        return str(value)
    if key == "seconds":
        return format(float(value), ".6f")
    return format(float(value), ".12g")


def write_csv(rows, path, include_timing: bool = True) -> None:
    """Write rows in the canonical schema as UTF-8.

    ``include_timing=False`` zeroes the seconds column, which is the only
    run-dependent field, making repeated runs byte identical.
    """
    lines = [CSV_HEADER]
    keys = CSV_HEADER.split(",")
    for row in rows:
        cells = []
        for key in keys:
            value = row[key]
            if key == "seconds" and not include_timing:
                value = 0.0
            cells.append(_format_cell(key, value))
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

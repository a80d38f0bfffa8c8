"""Proximal-gradient solvers for the penalized recovery problem

    minimize 0.5 ||Z - P X Q^T - Y||_F^2 + lambda1 ||X||_* + lambda2 ||Y||_1

over X (n x m) and Y (N x M). The plain iteration alternates a gradient
step with singular value thresholding on X and soft thresholding on Y; the
accelerated variant adds the Nesterov momentum sequence
t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2 in the style of FISTA
(Beck and Teboulle, 2009). A solve call is single threaded and
deterministic given its config; distinct configs may run concurrently.
"""

from __future__ import annotations

import dataclasses
import math
import time

import numpy as np

from . import kernels, linalg, operators
from .errors import InvalidParameter, NumericalFailure, ShapeError
from .interpolation import ProjectorPair

STEP_MODES = ("fixed_lipschitz", "backtracking")


@dataclasses.dataclass
class SolveConfig:
    """Inputs of one solve.

    ``momentum_gradient`` only matters when ``accelerate`` is set: True
    evaluates the gradient at the extrapolated point (the standard
    accelerated scheme and the default); False evaluates it at the previous
    iterate while still proxing from the extrapolated point, a variant kept
    for comparison because it forfeits the accelerated convergence rate.
    """

    Z: np.ndarray
    pair: ProjectorPair
    lambda1: float
    lambda2: float
    max_iters: int = 1000
    rel_tol: float = 1e-7
    step_mode: str = "fixed_lipschitz"
    accelerate: bool = False
    momentum_gradient: bool = True


@dataclasses.dataclass
class SolveResult:
    Xhat: np.ndarray
    Yhat: np.ndarray
    ThetaHat: np.ndarray
    objective_trace: list[float]
    iterations: int
    wall_time: float
    converged: bool


def _validate(config: SolveConfig) -> np.ndarray:
    Z = linalg.as_matrix(config.Z, "Z")
    if not (config.lambda1 > 0 and config.lambda2 > 0):
        raise InvalidParameter("lambda1 and lambda2 must be positive")
    if config.rel_tol < 0:
        raise InvalidParameter("rel_tol must be nonnegative (0 runs max_iters exactly)")
    if config.max_iters < 1:
        raise InvalidParameter("max_iters must be at least 1")
    if config.step_mode not in STEP_MODES:
        raise InvalidParameter(f"step_mode must be one of {STEP_MODES}")
    N, M, _, _ = config.pair.shape()
    if Z.shape != (N, M):
        raise ShapeError(f"Z has shape {Z.shape}, pair expects {(N, M)}")
    return Z


def objective(X, Y, config: SolveConfig) -> float:
    """0.5 ||Z - P X Q^T - Y||_F^2 + lambda1 ||X||_* + lambda2 ||Y||_1."""
    Z = _validate(config)
    Xa = linalg.as_matrix(X, "X")
    Ya = linalg.as_matrix(Y, "Y")
    N, M, n, m = config.pair.shape()
    if Xa.shape != (n, m) or Ya.shape != (N, M):
        raise ShapeError(f"expected X {(n, m)} and Y {(N, M)}, got {Xa.shape} and {Ya.shape}")
    resid = Z - config.pair.apply(Xa) - Ya
    return (
        0.5 * float(np.sum(resid * resid))
        + config.lambda1 * linalg.norm(Xa, "nuclear")
        + config.lambda2 * linalg.norm(Ya, "vec1")
    )


def gradients(X, Y, config: SolveConfig) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradients of the smooth loss: (P^T R Q, R) for the residual
    R = P X Q^T + Y - Z."""
    Z = _validate(config)
    Xa = linalg.as_matrix(X, "X")
    Ya = linalg.as_matrix(Y, "Y")
    N, M, n, m = config.pair.shape()
    if Xa.shape != (n, m) or Ya.shape != (N, M):
        raise ShapeError(f"expected X {(n, m)} and Y {(N, M)}, got {Xa.shape} and {Ya.shape}")
    R = config.pair.apply(Xa) + Ya - Z
    return config.pair.adjoint(R), R


def lipschitz_bound(pair: ProjectorPair) -> float:
    """A Lipschitz constant of the joint gradient.

    The smooth loss is 0.5 ||B u - vec(Z)||^2 for B = [Q kron P, I], whose
    squared top singular value is sigma_max(P)^2 sigma_max(Q)^2 + 1.
    """
    return (pair.smax_P * pair.smax_Q) ** 2 + 1.0


def default_penalties(N: int, sigma: float) -> tuple[float, float]:
    """Penalty levels (sqrt(2 N) * sigma, sqrt(2) * sigma).

    The standard choice for noisy low-rank plus sparse recovery at noise
    level sigma (Zhou et al., 2010).
    """
    if N < 1:
        raise InvalidParameter("N must be at least 1")
    if not sigma > 0:
        raise InvalidParameter("sigma must be positive")
    return math.sqrt(2.0 * N) * sigma, math.sqrt(2.0) * sigma


def _smooth_loss(Z, pair, X, Y) -> float:
    R = Z - pair.apply(X) - Y
    return 0.5 * float(np.sum(R * R))


def solve(config: SolveConfig) -> SolveResult:
    """Run the proximal-gradient iteration until the relative objective
    change drops below ``rel_tol`` or ``max_iters`` is reached.

    Both variants start from X = Y = 0. With the fixed Lipschitz step and
    no acceleration the objective trace is nonincreasing. Non-finite
    iterates abort with NumericalFailure carrying the trace so far.
    """
    Z = _validate(config)
    pair = config.pair
    lam1, lam2 = config.lambda1, config.lambda2
    N, M, n, m = pair.shape()
    L_base = lipschitz_bound(pair)
    backtracking = config.step_mode == "backtracking"
    L = L_base / 4.0 if backtracking else L_base

    X = np.zeros((n, m))
    Y = np.zeros((N, M))
    X_prev, Y_prev = X, Y
    t = t_prev = 1.0

    start = time.perf_counter()
    f = 0.5 * float(np.sum(Z * Z))  # objective at the zero start
    trace = [f]
    converged = False
    iterations = 0

    for k in range(config.max_iters):
        if config.accelerate:
            w = (t_prev - 1.0) / t
            Fx = X + w * (X - X_prev)
            Fy = Y + w * (Y - Y_prev)
        else:
            Fx, Fy = X, Y

        if config.accelerate and not config.momentum_gradient:
            Gx, Gy = gradients(X, Y, config)
        else:
            R = pair.apply(Fx) + Fy - Z
            Gx, Gy = pair.adjoint(R), R

        while True:
            X_new, X_nuclear = operators.svt_and_nuclear(Fx - Gx / L, lam1 / L)
            Y_new = kernels.soft_threshold(Fy - Gy / L, lam2 / L)
            if not backtracking:
                break
            model = (
                _smooth_loss(Z, pair, Fx, Fy)
                + float(np.sum(Gx * (X_new - Fx)) + np.sum(Gy * (Y_new - Fy)))
                + 0.5 * L * float(np.sum((X_new - Fx) ** 2) + np.sum((Y_new - Fy) ** 2))
            )
            actual = _smooth_loss(Z, pair, X_new, Y_new)
            if actual <= model + 1e-12 * (1.0 + abs(model)):
                break
            L *= 2.0

        X_prev, Y_prev = X, Y
        X, Y = X_new, Y_new
        if config.accelerate:
            t_prev, t = t, (1.0 + math.sqrt(1.0 + 4.0 * t * t)) / 2.0

        f_prev = f
        f = _smooth_loss(Z, pair, X, Y) + lam1 * X_nuclear + lam2 * float(np.abs(Y).sum())
        if not math.isfinite(f):
            raise NumericalFailure(f"non-finite objective at iteration {k + 1}", trace=trace)
        trace.append(f)
        iterations = k + 1
        if abs(f - f_prev) / (1.0 + abs(f)) < config.rel_tol:
            converged = True
            break

    wall = time.perf_counter() - start
    theta = pair.apply(X) + Y
    return SolveResult(
        Xhat=X,
        Yhat=Y,
        ThetaHat=theta,
        objective_trace=trace,
        iterations=iterations,
        wall_time=wall,
        converged=converged,
    )

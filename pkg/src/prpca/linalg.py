"""Dense real-matrix primitives: thin SVD, norms, pseudoinverse, projectors.

Everything operates on float64 ndarrays and is pure, so concurrent use is
safe. Numerical rank is decided by the module-wide cutoff
``RANK_CUTOFF * sigma_max``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidMatrix, InvalidParameter, NumericalFailure

# Singular values below RANK_CUTOFF * sigma_max are treated as exact zeros.
RANK_CUTOFF = 1e-12

NORM_KINDS = (
    "vec0",
    "vec1",
    "vec2",
    "vecinf",
    "nuclear",
    "spectral",
    "one_to_one",
    "inf_to_inf",
    "star",
)


class SvdFactors(NamedTuple):
    """Thin SVD ``M = U @ diag(S) @ V.T`` with ``k = min(rows, cols)``.

    U has orthonormal columns (rows x k), S is nonincreasing and
    nonnegative, V has orthonormal columns (cols x k).
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a nonempty finite float64 2-d array."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidMatrix(f"{name} must be a nonempty 2-d array, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidMatrix(f"{name} contains NaN or Inf entries")
    return arr


def svd_thin(M) -> SvdFactors:
    """Thin SVD with singular values sorted nonincreasing."""
    A = as_matrix(M)
    try:
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return SvdFactors(U, s, Vt.T)


def singular_values(M) -> np.ndarray:
    A = as_matrix(M)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def norm(M, kind: str, rho: float | None = None) -> float:
    """Matrix norm of the requested kind.

    Entrywise kinds: ``vec0`` (nonzero count), ``vec1``, ``vec2``
    (Frobenius), ``vecinf``. Spectral kinds: ``nuclear``, ``spectral``.
    Operator kinds: ``one_to_one`` (max absolute column sum),
    ``inf_to_inf`` (max absolute row sum), and ``star`` which for a scale
    ``rho > 0`` is ``max(rho * one_to_one, inf_to_inf / rho)``.
    """
    A = as_matrix(M)
    if kind == "vec0":
        return float(np.count_nonzero(A))
    if kind == "vec1":
        return float(np.abs(A).sum())
    if kind == "vec2":
        return float(np.linalg.norm(A))
    if kind == "vecinf":
        return float(np.abs(A).max())
    if kind == "nuclear":
        return float(singular_values(A).sum())
    if kind == "spectral":
        return float(singular_values(A)[0])
    if kind == "one_to_one":
        return float(np.abs(A).sum(axis=0).max())
    if kind == "inf_to_inf":
        return float(np.abs(A).sum(axis=1).max())
    if kind == "star":
        if rho is None or not rho > 0:
            raise InvalidParameter("the star norm needs rho > 0")
        return max(rho * norm(A, "one_to_one"), norm(A, "inf_to_inf") / rho)
    raise InvalidParameter(f"unknown norm kind {kind!r}")


def pseudoinverse(M) -> np.ndarray:
    """Moore-Penrose inverse via thin SVD with the numerical-rank cutoff."""
    U, s, V = svd_thin(M)
    cutoff = RANK_CUTOFF * (s[0] if s.size else 0.0)
    inv = np.where(s > cutoff, np.divide(1.0, s, out=np.zeros_like(s), where=s > 0), 0.0)
    return (V * inv) @ U.T


def column_space_projector(M) -> np.ndarray:
    """Orthogonal projector onto the column space of M, i.e. M @ pinv(M).

    Computed as Ur @ Ur.T from the thin SVD so the result is symmetric to
    roundoff.
    """
    U, s, _ = svd_thin(M)
    if s[0] == 0.0:
        raise InvalidMatrix("cannot project onto the column space of a zero matrix")
    r = int(np.count_nonzero(s > RANK_CUTOFF * s[0]))
    Ur = U[:, :r]
    return Ur @ Ur.T

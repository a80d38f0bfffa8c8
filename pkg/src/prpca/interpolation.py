"""Interpolation operators, admissible (P, Q) pairs, and the constructive
split of a piecewise smooth matrix into an interpolated core plus a sparse
remainder.

The normalized interpolation matrix of even size N is the N x N/2 banded
matrix whose products are row-wise smooth: even output rows copy the input,
the first row duplicates the second, and every other odd row is the average
of its two neighbours.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import kernels, linalg
from .errors import (
    InvalidMatrix,
    InvalidProjectorPair,
    UnsupportedDimension,
)

PAIR_KINDS = ("identity", "single", "double", "row_only", "col_only", "block", "custom")

# Full-column-rank test threshold for P and Q.
_MIN_SIGMA = 1e-10


def interpolation_matrix(N: int) -> np.ndarray:
    """Dense N x N/2 normalized interpolation matrix (N even, >= 4)."""
    if N % 2 != 0 or N < 4:
        raise UnsupportedDimension(f"interpolation matrix needs an even size >= 4, got {N}")
    n = N // 2
    J = np.zeros((N, n))
    rows = np.arange(n)
    J[2 * rows + 1, rows] = 1.0
    J[0, 0] = 1.0
    J[2 * rows[:-1] + 2, rows[:-1]] = 0.5
    J[2 * rows[1:], rows[1:]] = 0.5
    return J


def _interp_product(N: int, depth: int) -> np.ndarray:
    """Dense product of `depth` nested interpolation matrices of top size N."""
    P = interpolation_matrix(N)
    size = N // 2
    for _ in range(depth - 1):
        P = P @ interpolation_matrix(size)
        size //= 2
    return P


def _sigma_extremes(A: np.ndarray) -> tuple[float, float]:
    """(sigma_max, sigma_min) via the eigenvalues of A^T A."""
    eigs = np.maximum(np.linalg.eigvalsh(A.T @ A), 0.0)
    return float(np.sqrt(eigs[-1])), float(np.sqrt(eigs[0]))


class ProjectorPair:
    """A pre-specified (P, Q) pair with cached spectral data.

    P is N x n, Q is M x m, both of full column rank. ``apply`` realizes
    X -> P X Q^T and ``adjoint`` its transpose R -> P^T R Q; for the
    interpolation kinds these are computed by the banded kernels instead of
    dense products. apply/adjoint are pure and safe to call concurrently;
    the pseudoinverse and column-projector caches are built lazily and
    idempotently on first access.
    """

    def __init__(self, P, Q, kind: str = "custom", *, row_depth: int = 0, col_depth: int = 0):
        if kind not in PAIR_KINDS:
            raise InvalidProjectorPair(f"unknown pair kind {kind!r}")
        self.P = linalg.as_matrix(P, "P")
        self.Q = linalg.as_matrix(Q, "Q")
        self.kind = kind
        self._row_depth = row_depth
        self._col_depth = col_depth
        self.N, self.n = self.P.shape
        self.M, self.m = self.Q.shape
        if self.N < self.n or self.M < self.m:
            raise InvalidProjectorPair("P and Q must be tall and thin (N >= n, M >= m)")
        # extreme singular values from the small Gram matrices; the solver
        # must never factor anything larger than the core size
        self.smax_P, self.smin_P = _sigma_extremes(self.P)
        self.smax_Q, self.smin_Q = _sigma_extremes(self.Q)
        if self.smin_P <= _MIN_SIGMA or self.smin_Q <= _MIN_SIGMA:
            raise InvalidProjectorPair("P and Q must have full column rank")
        self._p_identity = self.N == self.n and np.array_equal(self.P, np.eye(self.N))
        self._q_identity = self.M == self.m and np.array_equal(self.Q, np.eye(self.M))
        self._cache: dict[str, np.ndarray] = {}

    def _cached(self, key: str, build) -> np.ndarray:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def pinv_P(self) -> np.ndarray:
        return self._cached(
            "pinv_P",
            lambda: np.eye(self.N) if self._p_identity else linalg.pseudoinverse(self.P),
        )

    @property
    def pinv_Q(self) -> np.ndarray:
        return self._cached(
            "pinv_Q",
            lambda: np.eye(self.M) if self._q_identity else linalg.pseudoinverse(self.Q),
        )

    @property
    def colproj_P(self) -> np.ndarray:
        return self._cached(
            "colproj_P",
            lambda: np.eye(self.N) if self._p_identity else linalg.column_space_projector(self.P),
        )

    @property
    def colproj_Q(self) -> np.ndarray:
        return self._cached(
            "colproj_Q",
            lambda: np.eye(self.M) if self._q_identity else linalg.column_space_projector(self.Q),
        )

    def shape(self) -> tuple[int, int, int, int]:
        return self.N, self.M, self.n, self.m

    def apply(self, X) -> np.ndarray:
        """P @ X @ Q.T using banded kernels where the structure allows."""
        A = np.asarray(X, dtype=np.float64)
        if self._row_depth:
            for _ in range(self._row_depth):
                A = kernels.interp_rows_apply(A)
        elif not self._p_identity:
            A = self.P @ A
        if self._col_depth:
            for _ in range(self._col_depth):
                A = kernels.interp_cols_apply(A)
        elif not self._q_identity:
            A = A @ self.Q.T
        return A

    def adjoint(self, R) -> np.ndarray:
        """P.T @ R @ Q, the transpose of :meth:`apply`."""
        A = np.asarray(R, dtype=np.float64)
        if self._row_depth:
            for _ in range(self._row_depth):
                A = kernels.interp_rows_adjoint(A)
        elif not self._p_identity:
            A = self.P.T @ A
        if self._col_depth:
            for _ in range(self._col_depth):
                A = kernels.interp_cols_adjoint(A)
        elif not self._q_identity:
            A = A @ self.Q
        return A

    def __repr__(self):
        return f"ProjectorPair(kind={self.kind!r}, P={self.N}x{self.n}, Q={self.M}x{self.m})"


def _require_even(value: int, least: int, what: str) -> None:
    if value % 2 != 0 or value < least:
        raise UnsupportedDimension(f"{what} needs an even size >= {least}, got {value}")


def projector_pair(kind: str, N: int, M: int) -> ProjectorPair:
    """Build one of the named (P, Q) constructions for an N x M target.

    identity: P = I_N, Q = I_M (plain low rank plus sparse).
    single:   P = J_N, Q = J_M, halving each dimension.
    double:   P = J_N J_{N/2}, Q = J_M J_{M/2}, quartering each dimension.
    row_only / col_only: interpolate one direction, identity on the other.
    block:    P = I_{N/2} kron [1, 1]^T and likewise for Q.
    """
    if kind == "identity":
        return ProjectorPair(np.eye(N), np.eye(M), "identity")
    if kind == "single":
        _require_even(N, 4, "single interpolation")
        _require_even(M, 4, "single interpolation")
        return ProjectorPair(
            interpolation_matrix(N), interpolation_matrix(M), "single", row_depth=1, col_depth=1
        )
    if kind == "double":
        if N % 4 or M % 4 or N < 8 or M < 8:
            raise UnsupportedDimension(
                f"double interpolation needs sizes divisible by 4 with half-size >= 4, got {N}x{M}"
            )
        return ProjectorPair(
            _interp_product(N, 2), _interp_product(M, 2), "double", row_depth=2, col_depth=2
        )
    if kind == "row_only":
        _require_even(N, 4, "row interpolation")
        return ProjectorPair(interpolation_matrix(N), np.eye(M), "row_only", row_depth=1)
    if kind == "col_only":
        _require_even(M, 4, "column interpolation")
        return ProjectorPair(np.eye(N), interpolation_matrix(M), "col_only", col_depth=1)
    if kind == "block":
        _require_even(N, 2, "block pair")
        _require_even(M, 2, "block pair")
        duo = np.array([[1.0], [1.0]])
        return ProjectorPair(np.kron(np.eye(N // 2), duo), np.kron(np.eye(M // 2), duo), "block")
    raise InvalidProjectorPair(f"unknown pair kind {kind!r}")


def count_jumps(Theta) -> int:
    """Number of adjacent unequal pairs, counted down columns and along rows.

    Always between 0 and 2NM - N - M.
    """
    T = linalg.as_matrix(Theta)
    vertical = int(np.count_nonzero(np.diff(T, axis=0)))
    horizontal = int(np.count_nonzero(np.diff(T, axis=1)))
    return vertical + horizontal


def smoothness_residual(W, axis: str) -> float:
    """How far W is from being interpolation-smooth along the given axis.

    Zero iff every interior odd line equals the average of its neighbours
    and the first line equals the second; returns the max absolute
    deviation.
    """
    A = linalg.as_matrix(W)
    if axis == "cols":
        A = A.T
    elif axis != "rows":
        raise InvalidMatrix(f"axis must be 'rows' or 'cols', got {axis!r}")
    if A.shape[0] % 2 != 0 or A.shape[0] < 4:
        raise UnsupportedDimension("smoothness check needs an even extent >= 4 along the axis")
    interior = A[2:-1:2] - 0.5 * (A[1:-2:2] + A[3::2])
    boundary = A[0] - A[1]
    return max(float(np.abs(interior).max()), float(np.abs(boundary).max()))


@dataclasses.dataclass(frozen=True)
class PiecewiseDecomposition:
    """Split Theta = J_N @ X0 @ J_M^T + Y0 with Y0 sparse.

    ``jumps`` is the adjacent-unequal-pair count of the input; the support
    of Y0 is meant to stay within that budget for matrices whose constant
    pieces have extent of at least two cells per direction.
    """

    X0: np.ndarray
    Y0: np.ndarray
    jumps: int


def decompose_piecewise(Theta) -> PiecewiseDecomposition:
    """Constructive decomposition of an even-sized matrix.

    The smooth part is the interpolation of Theta sampled on the anchor
    grid {1, 4, 6, 8, ...} x {1, 4, 6, 8, ...} (1-based): anchor positions
    keep their exact value, line 2 carries the difference from line 1,
    interior odd lines carry the deviation from the anchor average, and
    doubly odd interior cells the deviation from the four-corner average.
    X0 equals the smooth part sampled at even rows and columns, exactly.
    """
    T = linalg.as_matrix(Theta)
    N, M = T.shape
    if N % 2 or M % 2 or N < 4 or M < 4:
        raise UnsupportedDimension(f"decomposition needs even sizes >= 4, got {N}x{M}")
    anchor_rows = np.r_[0, np.arange(3, N, 2)]
    anchor_cols = np.r_[0, np.arange(3, M, 2)]
    X0 = T[np.ix_(anchor_rows, anchor_cols)].copy()
    smooth = kernels.interp_rows_apply(kernels.interp_cols_apply(X0))
    Y0 = T - smooth
    return PiecewiseDecomposition(X0=X0, Y0=Y0, jumps=count_jumps(T))

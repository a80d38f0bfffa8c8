"""Subspace projection operators used by the identifiability analysis.

Three orthogonal projections under the trace inner product:

* onto matrices supported where a sparse template is nonzero,
* onto the tangent space of the interpolated low-rank component
  (built from the singular bases of P U0 and Q V0),
* onto the tangent space of the core low-rank matrix itself.

All projectors store factor matrices only, never the full operator, and are
immutable after construction.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import InvalidMatrix, InvalidProjectorPair

# Rank of the core matrix: singular values below this fraction of the top
# one are treated as zero.
_X0_RANK_CUTOFF = 1e-10

_FULL_RANK_MIN_SIGMA = 1e-10


class SupportProjector:
    """Entrywise projection onto matrices supported on a fixed mask."""

    def __init__(self, mask: np.ndarray):
        self.mask = np.asarray(mask, dtype=bool)

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.mask))

    def apply(self, M) -> np.ndarray:
        A = linalg.as_matrix(M)
        if A.shape != self.mask.shape:
            raise InvalidMatrix(f"expected shape {self.mask.shape}, got {A.shape}")
        return np.where(self.mask, A, 0.0)

    def complement(self, M) -> np.ndarray:
        A = linalg.as_matrix(M)
        if A.shape != self.mask.shape:
            raise InvalidMatrix(f"expected shape {self.mask.shape}, got {A.shape}")
        return np.where(self.mask, 0.0, A)


class TangentProjector:
    """Projection U U^T M + M V V^T - U U^T M V V^T for orthonormal U, V."""

    def __init__(self, U: np.ndarray, V: np.ndarray):
        self.U = U
        self.V = V
        self.rank = U.shape[1]

    def apply(self, M) -> np.ndarray:
        A = linalg.as_matrix(M)
        left = self.U @ (self.U.T @ A)
        right = (A - left) @ self.V @ self.V.T
        return left + right

    def complement(self, M) -> np.ndarray:
        A = linalg.as_matrix(M)
        return A - self.apply(A)


def support_projector(Y0) -> SupportProjector:
    """Projector onto the support of Y0 (true exactly where Y0 is nonzero)."""
    A = linalg.as_matrix(Y0, "Y0")
    return SupportProjector(A != 0.0)


def _singular_basis(X0) -> tuple[np.ndarray, np.ndarray]:
    U, s, V = linalg.svd_thin(X0)
    if s[0] == 0.0:
        raise InvalidMatrix("X0 must be nonzero")
    r = int(np.count_nonzero(s > _X0_RANK_CUTOFF * s[0]))
    return U[:, :r], V[:, :r]


def _left_basis(A) -> np.ndarray:
    U, s, _ = linalg.svd_thin(A)
    r = int(np.count_nonzero(s > _X0_RANK_CUTOFF * s[0]))
    return U[:, :r]


def smooth_lowrank_projector(X0, P, Q) -> TangentProjector:
    """Tangent projector of the interpolated component P X0 Q^T.

    U is the left singular basis of P U0 and V the left singular basis of
    Q V0, where (U0, V0) span the singular subspaces of X0. Requires P and
    Q of full column rank.
    """
    Pm = linalg.as_matrix(P, "P")
    Qm = linalg.as_matrix(Q, "Q")
    for name, A in (("P", Pm), ("Q", Qm)):
        s = linalg.singular_values(A)
        if A.shape[0] < A.shape[1] or s[-1] <= _FULL_RANK_MIN_SIGMA:
            raise InvalidProjectorPair(f"{name} must be tall with full column rank")
    U0, V0 = _singular_basis(X0)
    return TangentProjector(_left_basis(Pm @ U0), _left_basis(Qm @ V0))


def lowrank_projector(X0) -> TangentProjector:
    """Tangent projector of X0 itself, from its own singular subspaces."""
    U0, V0 = _singular_basis(X0)
    return TangentProjector(U0, V0)

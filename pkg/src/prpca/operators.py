"""Proximal operators for the nuclear norm and the entrywise l1 norm."""

from __future__ import annotations

import numpy as np

from . import kernels, linalg
from .errors import InvalidParameter


def svt_and_nuclear(M, tau: float) -> tuple[np.ndarray, float]:
    """Singular value thresholding plus the nuclear norm of the result.

    The shrunk singular values are a free byproduct of the SVD, so callers
    that track nuclear-norm penalties (the solver does) avoid a second SVD.
    """
    if tau < 0:
        raise InvalidParameter("svt needs tau >= 0")
    U, s, V = linalg.svd_thin(M)
    shrunk = np.maximum(s - tau, 0.0)
    return (U * shrunk) @ V.T, float(shrunk.sum())


def svt(M, tau: float) -> np.ndarray:
    """Prox of ``tau * nuclear``: minimizer of 0.5||X - M||_F^2 + tau||X||_*.

    Closed form U diag((s_i - tau)_+) V^T (Cai, Candes and Shen, 2010);
    values tied at tau map to exactly zero.
    """
    out, _ = svt_and_nuclear(M, tau)
    return out


def soft_threshold(M, tau: float) -> np.ndarray:
    """Prox of ``tau * l1``: entrywise sgn(M) * (|M| - tau)_+."""
    if tau < 0:
        raise InvalidParameter("soft_threshold needs tau >= 0")
    return kernels.soft_threshold(linalg.as_matrix(M), tau)

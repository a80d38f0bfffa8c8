"""NumPy reference implementations of the hot kernels.

Semantics must match prpca._native; the compiled module is an optimization
only. Each interpolation kernel realizes multiplication by the banded
row/column smoother (half-size core, duplicated boundary line, averaged
interior lines) without forming the dense operator.
"""

import numpy as np


def interp_rows_apply(x):
    """(n, m) -> (2n, m): rows 1,3,... copy x, row 0 repeats row 0 of x,
    remaining even rows average adjacent x rows."""
    n, m = x.shape
    out = np.empty((2 * n, m), dtype=np.float64)
    out[1::2] = x
    out[0] = x[0]
    out[2:-1:2] = 0.5 * (x[:-1] + x[1:])
    return out


def interp_rows_adjoint(r):
    """Transpose map of interp_rows_apply: (2n, m) -> (n, m)."""
    out = r[1::2].copy()
    out[0] += r[0]
    mid = 0.5 * r[2:-1:2]
    out[1:] += mid
    out[:-1] += mid
    return out


def interp_cols_apply(x):
    """(n, m) -> (n, 2m): column-direction version of interp_rows_apply."""
    n, m = x.shape
    out = np.empty((n, 2 * m), dtype=np.float64)
    out[:, 1::2] = x
    out[:, 0] = x[:, 0]
    out[:, 2:-1:2] = 0.5 * (x[:, :-1] + x[:, 1:])
    return out


def interp_cols_adjoint(r):
    out = r[:, 1::2].copy()
    out[:, 0] += r[:, 0]
    mid = 0.5 * r[:, 2:-1:2]
    out[:, 1:] += mid
    out[:, :-1] += mid
    return out


def soft_threshold(m, tau):
    """Entrywise shrinkage sgn(m) * max(|m| - tau, 0)."""
    # + 0.0 canonicalizes -0.0 so both backends emit identical bytes
    return np.sign(m) * np.maximum(np.abs(m) - tau, 0.0) + 0.0

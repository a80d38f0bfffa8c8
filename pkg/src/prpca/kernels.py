"""Backend selection for the hot kernels.

At import time the compiled extension (prpca._native) is preferred; when it
is unavailable, or when the environment variable PRPCA_PURE_PYTHON is set to
a truthy value, the NumPy reference implementations are used instead. Both
backends implement the same contract, so everything above this module is
backend agnostic.
"""

from __future__ import annotations

import os

import numpy as np

from . import _reference

try:
    from . import _native
except ImportError:
    _native = None

_forced_pure = os.environ.get("PRPCA_PURE_PYTHON", "").strip().lower() not in ("", "0", "false")
_impl = _reference if (_native is None or _forced_pure) else _native


def active_backend() -> str:
    """'native' when the compiled extension is in use, else 'reference'."""
    return "native" if _impl is _native else "reference"


def _c(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def interp_rows_apply(x):
    return _impl.interp_rows_apply(_c(x))


def interp_rows_adjoint(r):
    return _impl.interp_rows_adjoint(_c(r))


def interp_cols_apply(x):
    return _impl.interp_cols_apply(_c(x))


def interp_cols_adjoint(r):
    return _impl.interp_cols_adjoint(_c(r))


def soft_threshold(m, tau):
    return _impl.soft_threshold(_c(m), float(tau))

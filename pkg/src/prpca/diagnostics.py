"""Computable identifiability and recovery-bound quantities.

For ground truth (X0, Y0), a pair (P, Q) and noise E, this module evaluates
the standard certificates of the low-rank plus sparse literature, adapted
to the interpolated setting:

* ``support_spread`` (often written alpha(rho)): how concentrated the
  nonzeros of Y0 are per row and column,
* ``singular_vector_spread`` (beta(rho)): how spiky the singular vectors of
  the interpolated component are,
* the coupling matrix tying (P, Q) to the singular subspaces of X0, with
  its entrywise-max and spectral norms (gamma1, gamma2),
* noise terms, the delta aggregates built from them, penalty-level
  conditions, and the explicit recovery bounds that hold when those
  conditions do.

The product of the two spread measures below one certifies that the
decomposition is identifiable; ``identifiability_margin`` minimizes that
product over a grid of row/column scales rho.
"""

from __future__ import annotations

import dataclasses
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import (
    BoundNotApplicable,
    InvalidParameter,
    NotIdentifiable,
    ShapeError,
)
from .interpolation import ProjectorPair
from .projectors import smooth_lowrank_projector


def support_spread(Y0, rho: float) -> float:
    """max(rho * most nonzeros in any column, most nonzeros in any row / rho).

    Zero for an empty support; invariant to rescaling Y0 entries.
    """
    if not rho > 0:
        raise InvalidParameter("rho must be positive")
    sign = np.sign(linalg.as_matrix(Y0, "Y0"))
    per_col = linalg.norm(sign, "one_to_one")
    per_row = linalg.norm(sign, "inf_to_inf")
    return max(rho * per_col, per_row / rho)


def singular_vector_spread(X0, pair: ProjectorPair, rho: float) -> float:
    """Spikiness of the singular vectors of the interpolated component.

    With U, V the tangent bases of P X0 Q^T this is
    ||U U^T||_max / rho + rho * ||V V^T||_max + (max row norm of U) * (max
    row norm of V). Invariant to rescaling X0.
    """
    if not rho > 0:
        raise InvalidParameter("rho must be positive")
    proj = smooth_lowrank_projector(X0, pair.P, pair.Q)
    return _spread_from_bases(proj.U, proj.V, rho)


def _spread_from_bases(U: np.ndarray, V: np.ndarray, rho: float) -> float:
    uu = float(np.abs(U @ U.T).max())
    vv = float(np.abs(V @ V.T).max())
    u_rows = float(np.sqrt((U * U).sum(axis=1)).max())
    v_rows = float(np.sqrt((V * V).sum(axis=1)).max())
    return uu / rho + rho * vv + u_rows * v_rows


def coupling_quantities(X0, pair: ProjectorPair) -> tuple[np.ndarray, float, float]:
    """The pseudoinverse coupling of (P, Q) with the singular spaces of X0.

    Returns (Gamma, gamma1, gamma2) where
    Gamma = ((P U0)^+)^T V0^T Q^+ + (P^+)^T U0 (Q V0)^+
            - ((P U0)^+)^T (Q V0)^+,
    gamma1 is its largest absolute entry and gamma2 its spectral norm. For
    identity P and Q this collapses to U0 V0^T with gamma2 = 1.
    """
    from .projectors import _singular_basis

    U0, V0 = _singular_basis(X0)
    PU_pinv = linalg.pseudoinverse(pair.P @ U0)
    QV_pinv = linalg.pseudoinverse(pair.Q @ V0)
    Gamma = PU_pinv.T @ (V0.T @ pair.pinv_Q) + (pair.pinv_P.T @ U0) @ QV_pinv - PU_pinv.T @ QV_pinv
    return Gamma, linalg.norm(Gamma, "vecinf"), linalg.norm(Gamma, "spectral")


def default_rho_grid(N: int, M: int, points: int = 21) -> np.ndarray:
    """Log-spaced grid centered on the natural scale sqrt(M / N)."""
    center = np.sqrt(M / N)
    return np.geomspace(center / 10.0, center * 10.0, points)


def identifiability_margin(X0, Y0, pair: ProjectorPair, rho_grid=None) -> float:
    """Minimum over the rho grid of the two spread measures' product.

    A value below one certifies that the (X0, Y0) split is the unique one
    within its support and tangent spaces.
    """
    if rho_grid is None:
        rho_grid = default_rho_grid(pair.N, pair.M)
    grid = np.atleast_1d(np.asarray(rho_grid, dtype=float))
    if grid.size == 0 or not (grid > 0).all():
        raise InvalidParameter("rho_grid must be nonempty with positive entries")
    Y = linalg.as_matrix(Y0, "Y0")
    sign = np.sign(Y)
    per_col = linalg.norm(sign, "one_to_one")
    per_row = linalg.norm(sign, "inf_to_inf")
    if per_col == 0.0:
        return 0.0
    proj = smooth_lowrank_projector(X0, pair.P, pair.Q)
    values = [
        max(rho * per_col, per_row / rho) * _spread_from_bases(proj.U, proj.V, rho)
        for rho in grid
    ]
    return float(min(values))


class NoiseTerms(NamedTuple):
    """Norms of the noise seen through the tangent and column-space maps."""

    eps_2to2: float
    eps_inf: float
    eps_inf_prime: float
    eps_star: float


def noise_terms(E, X0, pair: ProjectorPair) -> NoiseTerms:
    """Evaluate the four noise functionals for a given noise matrix E.

    eps_2to2 is the spectral norm of E; eps_inf adds the entrywise max of E
    and of its tangent projection; the primed version applies the column
    space projectors of P and Q first; eps_star is the nuclear norm of the
    projected-and-tangent part.
    """
    Em = linalg.as_matrix(E, "E")
    if Em.shape != (pair.N, pair.M):
        raise ShapeError(f"E has shape {Em.shape}, expected {(pair.N, pair.M)}")
    tangent = smooth_lowrank_projector(X0, pair.P, pair.Q)
    filtered = pair.colproj_P @ Em @ pair.colproj_Q
    eps_2to2 = linalg.norm(Em, "spectral")
    eps_inf = linalg.norm(tangent.apply(Em), "vecinf") + linalg.norm(Em, "vecinf")
    eps_inf_prime = linalg.norm(tangent.apply(filtered), "vecinf") + linalg.norm(filtered, "vecinf")
    eps_star = linalg.norm(tangent.apply(filtered), "nuclear")
    return NoiseTerms(eps_2to2, eps_inf, eps_inf_prime, eps_star)


@dataclasses.dataclass(frozen=True)
class BoundInputs:
    """Scalar inputs of the bound evaluators.

    eta0 is the norm-transfer constant between the projected and
    unprojected spaces; it has no tractable exact algorithm and is supplied
    by the caller (1.0 is exact for identity pairs and a reasonable default
    otherwise).
    """

    r: int
    s: int
    c: float
    rho: float
    lambda1: float
    lambda2: float
    eta0: float = 1.0

    def __post_init__(self):
        if self.c <= 1:
            raise InvalidParameter("c must exceed 1")
        if not (self.rho > 0 and self.eta0 > 0):
            raise InvalidParameter("rho and eta0 must be positive")
        if not (self.lambda1 > 0 and self.lambda2 > 0):
            raise InvalidParameter("penalty levels must be positive")
        if self.r < 0 or self.s < 0:
            raise InvalidParameter("r and s must be nonnegative")


def bound_deltas(
    inputs: BoundInputs,
    alpha: float,
    beta: float,
    gamma1: float,
    gamma2: float,
    eps: NoiseTerms,
) -> tuple[float, float, float]:
    """The three error aggregates feeding the recovery bounds.

    delta1 = r (2 a / (1 - a b) (lambda2 + gamma1 lambda1 + eps_inf)
             + 2 eps_2to2 + lambda1 gamma2),
    delta2 = s / (1 - a b) (lambda2 + lambda1 gamma1 + eps_inf),
    delta  = (lambda1 gamma2 + eps_2to2) delta1 + (lambda2 + eps_inf) delta2.
    """
    ab = alpha * beta
    if ab >= 1.0:
        raise NotIdentifiable(f"alpha * beta = {ab:.6g} >= 1")
    lam1, lam2 = inputs.lambda1, inputs.lambda2
    delta1 = inputs.r * (
        2.0 * alpha / (1.0 - ab) * (lam2 + gamma1 * lam1 + eps.eps_inf)
        + 2.0 * eps.eps_2to2
        + lam1 * gamma2
    )
    delta2 = inputs.s / (1.0 - ab) * (lam2 + lam1 * gamma1 + eps.eps_inf)
    delta = (lam1 * gamma2 + eps.eps_2to2) * delta1 + (lam2 + eps.eps_inf) * delta2
    return delta1, delta2, delta


def penalty_conditions(
    inputs: BoundInputs,
    alpha: float,
    beta: float,
    gamma1: float,
    eps: NoiseTerms,
    pair: ProjectorPair,
) -> tuple[bool, bool, bool]:
    """The three penalty-level conditions gating the recovery bounds.

    c1: alpha * beta < 1.
    c2: [1 / (smax_P smax_Q) - c gamma1 alpha / (1 - ab)] lambda1
        >= c (alpha / (1 - ab) lambda2 + alpha / (1 - ab) eps_inf
        + eps_2to2).
    c3: [1 - (1 + c) ab] lambda2 >= c (gamma1 lambda1 + (2 - ab) eps_inf).
    """
    ab = alpha * beta
    c1 = ab < 1.0
    if not c1:
        return False, False, False
    c = inputs.c
    lam1, lam2 = inputs.lambda1, inputs.lambda2
    lhs2 = (1.0 / (pair.smax_P * pair.smax_Q) - c * gamma1 * alpha / (1.0 - ab)) * lam1
    rhs2 = c * (alpha / (1.0 - ab) * lam2 + alpha / (1.0 - ab) * eps.eps_inf + eps.eps_2to2)
    lhs3 = (1.0 - (1.0 + c) * ab) * lam2
    rhs3 = c * (gamma1 * lam1 + (2.0 - ab) * eps.eps_inf)
    return c1, bool(lhs2 >= rhs2), bool(lhs3 >= rhs3)


def recovery_bounds(
    inputs: BoundInputs,
    alpha: float,
    beta: float,
    gamma1: float,
    gamma2: float,
    eps: NoiseTerms,
    pair: ProjectorPair,
) -> tuple[float, float]:
    """Right-hand sides of the two recovery guarantees.

    bound_Y_vec1 bounds (1 - alpha beta) ||Yhat - Y0||_1 and
    bound_X_nuclear bounds ||P (Xhat - X0) Q^T||_*. Raises
    BoundNotApplicable unless all three penalty conditions hold. The
    transfer constant of the unprojected tangent space is replaced by its
    conservative lower bound eta0 / (smax_P smax_Q), and the trailing term
    of the nuclear bound uses sqrt(2 r) times the l1 bound on the filtered
    sparse error.
    """
    conditions = penalty_conditions(inputs, alpha, beta, gamma1, eps, pair)
    if not all(conditions):
        raise BoundNotApplicable(f"penalty conditions {conditions} must all hold")
    ab = alpha * beta
    c, eta0 = inputs.c, inputs.eta0
    lam1, lam2 = inputs.lambda1, inputs.lambda2
    s, r = inputs.s, inputs.r
    _, _, delta = bound_deltas(inputs, alpha, beta, gamma1, gamma2, eps)
    smin = pair.smin_P * pair.smin_Q
    common = (
        5.0 * lam2 * s
        + 2.0 * s * eps.eps_inf
        + 3.0 * s * eps.eps_inf_prime
        + 2.0 / smin * lam1 * np.sqrt(s * r)
    )
    filtered_l1 = delta / (lam2 * (1.0 - 1.0 / c) * eta0) + common
    bound_y = delta * (1.0 + 1.0 / eta0) / (2.0 * (1.0 - 1.0 / c) * lam2) + common
    eta1 = eta0 / (pair.smax_P * pair.smax_Q)
    bound_x = (
        delta / (2.0 * (1.0 - 1.0 / c) * lam1 * eta1)
        + eps.eps_star
        + 2.0 / smin * lam1 * r
        + np.sqrt(2.0 * r) * filtered_l1 / (1.0 - ab)
    )
    return float(bound_y), float(bound_x)


@dataclasses.dataclass
class DiagnosticsReport:
    """All identifiability statistics for one (X0, Y0, E, pair) instance.

    Serializable as flat key=value text and as a single CSV row; when the
    spread product is not below one the delta and bound fields are NaN.
    """

    alpha: float
    beta: float
    rho: float
    gamma1: float
    gamma2: float
    identifiability_margin: float
    eps_2to2: float
    eps_inf: float
    eps_inf_prime: float
    eps_star: float
    delta1: float
    delta2: float
    delta: float
    penalty_ok: tuple[bool, bool, bool]
    bound_Y_vec1: float
    bound_X_nuclear: float

    _FIELDS = (
        "alpha",
        "beta",
        "rho",
        "gamma1",
        "gamma2",
        "identifiability_margin",
        "eps_2to2",
        "eps_inf",
        "eps_inf_prime",
        "eps_star",
        "delta1",
        "delta2",
        "delta",
        "penalty_c1",
        "penalty_c2",
        "penalty_c3",
        "bound_Y_vec1",
        "bound_X_nuclear",
    )

    def _values(self) -> list[str]:
        out = []
        for name in self._FIELDS:
            if name.startswith("penalty_c"):
                value = self.penalty_ok[int(name[-1]) - 1]
                out.append("true" if value else "false")
            else:
                out.append(format(getattr(self, name), ".12g"))
        return out

    def to_text(self) -> str:
        lines = [f"{k}={v}" for k, v in zip(self._FIELDS, self._values())]
        return "\n".join(lines) + "\n"

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(cls._FIELDS)

    def to_csv_row(self) -> str:
        return ",".join(self._values())


def build_report(X0, Y0, E, pair: ProjectorPair, inputs: BoundInputs) -> DiagnosticsReport:
    """Evaluate every diagnostic at inputs.rho and assemble the report."""
    alpha = support_spread(Y0, inputs.rho)
    beta = singular_vector_spread(X0, pair, inputs.rho)
    _, gamma1, gamma2 = coupling_quantities(X0, pair)
    margin = identifiability_margin(X0, Y0, pair)
    eps = noise_terms(E, X0, pair)
    ok = penalty_conditions(inputs, alpha, beta, gamma1, eps, pair)
    if alpha * beta < 1.0:
        delta1, delta2, delta = bound_deltas(inputs, alpha, beta, gamma1, gamma2, eps)
    else:
        delta1 = delta2 = delta = float("nan")
    if all(ok):
        bound_y, bound_x = recovery_bounds(inputs, alpha, beta, gamma1, gamma2, eps, pair)
    else:
        bound_y = bound_x = float("nan")
    return DiagnosticsReport(
        alpha=alpha,
        beta=beta,
        rho=inputs.rho,
        gamma1=gamma1,
        gamma2=gamma2,
        identifiability_margin=margin,
        eps_2to2=eps.eps_2to2,
        eps_inf=eps.eps_inf,
        eps_inf_prime=eps.eps_inf_prime,
        eps_star=eps.eps_star,
        delta1=delta1,
        delta2=delta2,
        delta=delta,
        penalty_ok=ok,
        bound_Y_vec1=bound_y,
        bound_X_nuclear=bound_x,
    )

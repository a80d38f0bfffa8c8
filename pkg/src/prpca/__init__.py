"""Projected robust PCA: recover a low-rank-and-smooth plus sparse split
of a noisy matrix, Z = P X Q^T + Y + E, with proximal-gradient solvers,
interpolation operators, identifiability diagnostics, a simulation harness,
and a PGM image-denoising CLI."""

from .diagnostics import (
    BoundInputs,
    DiagnosticsReport,
    NoiseTerms,
    bound_deltas,
    build_report,
    coupling_quantities,
    identifiability_margin,
    noise_terms,
    penalty_conditions,
    recovery_bounds,
    singular_vector_spread,
    support_spread,
)
from .errors import (
    BoundNotApplicable,
    FormatError,
    InvalidMatrix,
    InvalidParameter,
    InvalidProjectorPair,
    NotIdentifiable,
    NumericalFailure,
    PrpcaError,
    ShapeError,
    UnsupportedDimension,
)
from .image import GrayImage, add_noise, load_pgm, recover, save_pgm
from .interpolation import (
    PiecewiseDecomposition,
    ProjectorPair,
    count_jumps,
    decompose_piecewise,
    interpolation_matrix,
    projector_pair,
    smoothness_residual,
)
from .kernels import active_backend
from .linalg import SvdFactors, column_space_projector, norm, pseudoinverse, svd_thin
from .operators import soft_threshold, svt
from .projectors import (
    SupportProjector,
    TangentProjector,
    lowrank_projector,
    smooth_lowrank_projector,
    support_projector,
)
from .simulation import Instance, SimulationSpec, generate_instance, rmse, run_grid, write_csv
from .solver import (
    SolveConfig,
    SolveResult,
    default_penalties,
    gradients,
    lipschitz_bound,
    objective,
    solve,
)

__version__ = "0.1.0"

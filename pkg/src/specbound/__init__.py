"""First Dirichlet eigenvalues of the Laplacian on compact domains and the
momentum-uncertainty bounds they certify."""

from .convergence import ConvergenceStudy, refine
from .discretize import Grid, GridError, OperatorMatrix, assemble, build_grid
from .eigensolve import (
    DEFAULT_SEED,
    SolverConvergenceError,
    Spectrum,
    WaveField,
    rayleigh_quotient,
    smallest_eigenpairs,
)
from .geometry import (
    Ball,
    Box,
    Domain,
    DomainError,
    DomainMetrics,
    Ellipse,
    Interval,
    Polygon,
    RasterMask,
    domain_from_spec,
    unit_ball_volume,
)
from .specfun import BesselZero, bessel_j, first_zero
from .uncertainty import (
    PhysicalConstants,
    UncertaintyReport,
    certify_bounds,
    krahn_ratio,
    mean_momentum,
    momentum_stddev,
    position_stddev,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BesselZero",
    "Box",
    "ConvergenceStudy",
    "DEFAULT_SEED",
    "Domain",
    "DomainError",
    "DomainMetrics",
    "Ellipse",
    "Grid",
    "GridError",
    "Interval",
    "OperatorMatrix",
    "PhysicalConstants",
    "Polygon",
    "RasterMask",
    "SolverConvergenceError",
    "Spectrum",
    "UncertaintyReport",
    "WaveField",
    "assemble",
    "bessel_j",
    "build_grid",
    "certify_bounds",
    "domain_from_spec",
    "first_zero",
    "krahn_ratio",
    "mean_momentum",
    "momentum_stddev",
    "position_stddev",
    "rayleigh_quotient",
    "refine",
    "smallest_eigenpairs",
    "unit_ball_volume",
]

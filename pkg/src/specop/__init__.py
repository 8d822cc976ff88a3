"""Spectra of V_a = M*_{a-z} M_{a-z} on weighted Hardy spaces."""
from .weights import (
    BergmanType,
    Custom,
    DirichletBinomial,
    DirichletPower,
    WeightError,
    WeightSequence,
    kernel_diag,
    make_weight,
    parse_space,
    validity_report,
)
from .operator import (
    SymTridiag,
    apply_Va,
    apply_poly_V,
    essential_interval,
    gauge_reduce,
    inner_check,
    jacobi_truncation,
    section,
)
from .eigensolve import BACKEND, ConvergenceError, eigenvalues, outliers, sturm_count
from .pointspec import (
    DegenerateParameterError,
    PointEigen,
    eigenfunction_closed,
    eigenfunction_recurrence,
    eigenvalue_bounds,
    point_spectrum,
)
from .dirichlet import dirichlet_candidate, dirichlet_params, ode_residual

__version__ = "0.1.0"

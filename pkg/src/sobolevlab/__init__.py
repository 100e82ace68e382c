"""Numerical lab for Poincare, Beckner and log-Sobolev constants of
one-dimensional measures e^{-V} dx, with a perturbation bound that transfers
Beckner inequalities from a reference measure."""

__version__ = "0.1.0"

from .beckner import beckner_quotient, divergence_flag, entropy_quotient, estimate_c1_entropy, estimate_cp
from .errors import (
    DegenerateInputError,
    DiscretizationError,
    InsufficientDataError,
    InvalidInputError,
    InvalidSpecError,
    MixedMeasureError,
    NonNormalizableError,
    NumericalOverflowError,
    ReferenceConstantUnavailable,
    SingularityError,
    SobolevLabError,
)
from .functionals import beckner_deficit, dirichlet, log_sobolev_entropy, variance
from .measure import GridFunction, GridMeasure, build_measure, derivative, integrate, lq_norm, mean
from .moments import lemma4_gap, remark1_gap, remark2_gap, theorem1_lift_identity
from .perturbation import (
    PerturbationReport,
    compute_Z_delta,
    corollary2_sweep,
    corollary5_check,
    ground_state_energy_identity,
    jensen_gap_check,
    shared_grids,
    theorem1_bound,
)
from .potential import PotentialSpec, bakry_emery_lambda1, gaussian, parse_potential, polynomial, power, tabulated
from .spectral import ConstantEstimate, bakry_emery_bound, spectral_gap

__all__ = [name for name in dir() if not name.startswith("_")]

"""Numerical laboratory for the one-phase Muskat nonlinearity on a periodic window."""

from .errors import *  # noqa: F401,F403
from .spectral import (
    Grid,
    Multiplier,
    RealField,
    apply_lambda,
    dealias,
    dealiased_product,
    derivative,
    heat_semigroup,
    hilbert,
    hilbert_commutator,
    paraproduct,
    project,
    resolvent,
    translate,
)
from .finite_diff import AlphaRule, alpha_integrate, default_rule, refined_rule

from .muskat_operator import (
    commutator_lambda,
    drift,
    gamma,
    kernels,
    paralinearized_rhs,
    remainder,
    rhs_arctan,
    t_even,
    t_odd,
    t_operator,
)
from .norms import (
    BesovSpec,
    besov_norm,
    check_interpolation,
    holder_norm,
    lipschitz_sup,
    lp_norm,
    sobolev_norm,
)
from .evolution import SimConfig, SimState, cauchy_study, energy_report, evolve, stability_study, step
from .estimator import CampaignConfig, EnsembleSpec, EstimateReport, campaign, check, random_field

__version__ = "0.1.0"

"""Exact invariants of parabolic weight dynamics in characteristic p.

The library computes the discrete data governing periodicity of flows on
parabolic bundles: weight multisets and their transforms under the
(inverse) Cartier maps, parabolic degrees, the local character dictionary
on cyclic covers, residue eigenvalue laws, orbit periods, and explicit
divisibility bounds for descent obstructions.  Everything is exact
rational or integer arithmetic.
"""

from .arith import (
    euler_phi,
    frac_part,
    geometric_sum_mod,
    is_prime,
    mod_inverse,
    mult_order,
    primes_upto,
)
from .characters import (
    CharacterSystem,
    ResidueBlock,
    ResidueBlockAssembly,
    assemble_pushforward_residue,
    chars_to_weights,
    check_adjusted,
    frobenius_on_chars,
    pullback_residue_eigenvalues,
    weights_to_chars,
)
from .flow import (
    EquivarianceDefects,
    FlowTrajectory,
    PeriodBoundParams,
    ScanRow,
    TerminationReason,
    flow_trajectory,
    global_period_bound,
    katz_period_bound,
    katz_period_params,
    minimal_equivariance_period,
    minimal_geometric_period,
    prime_scan,
    rank_one_period,
    weight_orbit,
    weight_period_closed_form,
)
from .parabolic import (
    CurveShape,
    ParabolicLineBundleSpec,
    ParabolicShape,
    WeightSystem,
    cartier_weights,
    flow_step_shape,
    inverse_cartier_weights,
    is_periodicity_candidate,
    line_bundle_shape,
    pardeg,
    pullback_degree,
)

__version__ = "0.1.0"

__all__ = [
    "CharacterSystem",
    "CurveShape",
    "EquivarianceDefects",
    "FlowTrajectory",
    "ParabolicLineBundleSpec",
    "ParabolicShape",
    "PeriodBoundParams",
    "ResidueBlock",
    "ResidueBlockAssembly",
    "ScanRow",
    "TerminationReason",
    "WeightSystem",
    "assemble_pushforward_residue",
    "cartier_weights",
    "chars_to_weights",
    "check_adjusted",
    "euler_phi",
    "flow_step_shape",
    "flow_trajectory",
    "frac_part",
    "frobenius_on_chars",
    "geometric_sum_mod",
    "global_period_bound",
    "inverse_cartier_weights",
    "is_periodicity_candidate",
    "is_prime",
    "katz_period_bound",
    "katz_period_params",
    "line_bundle_shape",
    "minimal_equivariance_period",
    "minimal_geometric_period",
    "mod_inverse",
    "mult_order",
    "pardeg",
    "prime_scan",
    "primes_upto",
    "pullback_degree",
    "pullback_residue_eigenvalues",
    "rank_one_period",
    "weight_orbit",
    "weight_period_closed_form",
    "weights_to_chars",
]

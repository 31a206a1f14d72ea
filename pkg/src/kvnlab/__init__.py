"""Simulation and checking toolkit for mechanical similarity in a doubled
classical phase space, its operator algebra, and its quantum obstructions."""

from .core import (
    ExtendedPoint,
    HbarContext,
    LmsParams,
    MonomialPotential,
    PhasePoint,
    lms_params_from_alpha,
    lms_params_from_beta,
)
from .dynamics import (
    ExtendedTrajectory,
    IntegratorConfig,
    characteristic_time,
    energy,
    eom_rhs,
    flow_map,
    flow_map_batch,
    integrate,
)
from .charges import (
    EPS_LIOUVILLIAN,
    ScalarField4,
    epb,
    gradient,
    liouvillian_field,
    liouvillian_value,
    lms_charge,
    lms_charge0,
    lms_charge0_field,
    lms_charge_harmonic,
    strip_gradient,
    virasoro_charge,
)
from .symmetry import (
    ActionScaling,
    LmsVariation,
    action_kvn,
    action_standard,
    bracket_change,
    check_action_scaling,
    infinitesimal_lms,
    lms_jacobian,
    lms_map_point,
    lms_map_trajectory,
)
from .semiclassics import (
    BohrViolationReport,
    EigenResult,
    NewtonEquivReport,
    action_integral,
    bohr_levels,
    eigensolve_newton_equiv,
    ground_width,
    lms_bohr_violation,
    newton_equiv_trajectory_check,
    turning_points,
)
from . import errors, opalg, qgrid

__version__ = "0.1.0"

__all__ = [
    "ActionScaling",
    "BohrViolationReport",
    "EPS_LIOUVILLIAN",
    "EigenResult",
    "ExtendedPoint",
    "ExtendedTrajectory",
    "HbarContext",
    "IntegratorConfig",
    "LmsParams",
    "LmsVariation",
    "MonomialPotential",
    "NewtonEquivReport",
    "PhasePoint",
    "ScalarField4",
    "action_integral",
    "action_kvn",
    "action_standard",
    "bohr_levels",
    "bracket_change",
    "characteristic_time",
    "check_action_scaling",
    "eigensolve_newton_equiv",
    "energy",
    "eom_rhs",
    "epb",
    "errors",
    "flow_map",
    "flow_map_batch",
    "gradient",
    "ground_width",
    "infinitesimal_lms",
    "integrate",
    "lms_bohr_violation",
    "lms_charge",
    "lms_charge0",
    "lms_charge0_field",
    "lms_charge_harmonic",
    "lms_jacobian",
    "lms_map_point",
    "lms_map_trajectory",
    "lms_params_from_alpha",
    "lms_params_from_beta",
    "liouvillian_field",
    "liouvillian_value",
    "newton_equiv_trajectory_check",
    "opalg",
    "qgrid",
    "strip_gradient",
    "turning_points",
    "virasoro_charge",
]

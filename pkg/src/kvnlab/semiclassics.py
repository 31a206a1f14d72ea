"""Action quantization and the Newton-equivalent Hamiltonian family.

The loop action J(E) = 2 * integral sqrt(2(E - V)) dq between turning
points obeys J(alpha^n E) = alpha^(1+n/2) J(E) under the similarity
rescale, so quantized levels J = (k + 1/2) 2 pi hbar are not mapped to
levels unless 1 + n/2 = 0. Separately, the rescaled Lagrangian gamma*L
yields H_gamma = p_gamma^2 / (2 gamma m) + gamma V with identical q(t)
but gamma-dependent spectra (except the harmonic case, whose frequency
is gamma-free while its eigenfunction widths are not).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.linalg import eigh_tridiagonal

from .core import LmsParams, MonomialPotential, PhasePoint
from .dynamics import IntegratorConfig
from .errors import ConvergenceFailure, NoBoundOrbit, RangeExhausted, StepFailure

TURNING_TOL = 1e-12


def _bound_orbit_exponent(pot: MonomialPotential) -> int:
    n = pot.n
    if float(n).is_integer() and n >= 2 and int(n) % 2 == 0 and pot.g > 0:
        return int(n)
    raise NoBoundOrbit(
        f"V = {pot.g} q**{pot.n}/{pot.n} has no two-sided bounded orbits"
    )


def turning_points(pot: MonomialPotential, E: float) -> tuple[float, float]:
    """Turning pair (q-, q+) with V(q+-) = E, found by bisection.

    Defined for confining even monomials (g > 0, even integer n >= 2),
    where the well is symmetric and q- = -q+."""
    _bound_orbit_exponent(pot)
    if E <= 0:
        raise NoBoundOrbit(f"E={E!r} is below the well minimum V(0) = 0")
    hi = 1.0
    for _ in range(600):
        if pot.value(hi) > E:
            break
        hi *= 2.0
    else:
        raise RangeExhausted("could not bracket the turning point")
    lo = 0.0
    while hi - lo > TURNING_TOL * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if pot.value(mid) > E:
            hi = mid
        else:
            lo = mid
    qp = 0.5 * (lo + hi)
    return -qp, qp


def action_integral(pot: MonomialPotential, E: float) -> float:
    """Loop action J(E) = 2 * integral_{q-}^{q+} sqrt(2(E - V)) dq.

    The substitution q = q+ sin(theta) absorbs the square-root endpoint
    behaviour, leaving a smooth integrand for adaptive quadrature."""
    _, qp = turning_points(pot, E)

    def integrand(theta):
        q = qp * math.sin(theta)
        gap = E - pot.g * q**pot.n / pot.n
        if gap < 0.0:
            gap = 0.0
        return math.sqrt(2.0 * gap) * qp * math.cos(theta)

    val, err = quad(integrand, -0.5 * math.pi, 0.5 * math.pi, epsabs=0.0,
                    epsrel=1e-11, limit=200)
    if not math.isfinite(val) or (val > 0 and err / val > 1e-8):
        raise ConvergenceFailure(f"action quadrature error {err!r} on value {val!r}")
    return 2.0 * val


def bohr_levels(pot: MonomialPotential, hbar: float, count: int) -> np.ndarray:
    """Lowest `count` energies solving J(E) = (k + 1/2) * 2 pi hbar."""
    if count < 1:
        raise ValueError("count must be >= 1")
    levels = np.empty(count)
    for k in range(count):
        target = (k + 0.5) * 2.0 * math.pi * hbar
        lo, hi = 0.0, 1.0
        for _ in range(600):
            if action_integral(pot, hi) > target:
                break
            hi *= 2.0
        else:
            raise RangeExhausted("could not bracket the quantized energy")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if action_integral(pot, mid) > target:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-13 * max(1.0, hi):
                break
        else:
            raise ConvergenceFailure("level bisection stalled")
        levels[k] = 0.5 * (lo + hi)
    return levels


@dataclass(frozen=True)
class BohrViolationReport:
    """Action change of one orbit under the finite similarity map.

    delta_j compares quadrature at the mapped energy alpha^n E against
    the original; the closed form is (alpha^(1+n/2) - 1) J. The mismatch
    counts how many level spacings 2 pi hbar the orbit moved by. n = -2
    is the analytic branch: the exponent 1 + n/2 vanishes identically,
    so the action is invariant without any quadrature."""

    j_value: Optional[float]
    delta_j: float
    delta_j_closed_form: float
    level_mismatch: float
    exact_invariance: bool


def lms_bohr_violation(
    pot: MonomialPotential, E: float, prm: LmsParams, hbar: float = 1.0
) -> BohrViolationReport:
    if pot.n == -2.0:
        return BohrViolationReport(
            j_value=None,
            delta_j=0.0,
            delta_j_closed_form=0.0,
            level_mismatch=0.0,
            exact_invariance=True,
        )
    j = action_integral(pot, E)
    j_mapped = action_integral(pot, prm.alpha**pot.n * E)
    delta = j_mapped - j
    closed = (prm.alpha ** (1.0 + pot.n / 2.0) - 1.0) * j
    return BohrViolationReport(
        j_value=j,
        delta_j=delta,
        delta_j_closed_form=closed,
        level_mismatch=delta / (2.0 * math.pi * hbar),
        exact_invariance=False,
    )


# -- Newton-equivalent family --------------------------------------------


@dataclass(frozen=True)
class NewtonEquivReport:
    """Trajectory comparison between H_standard and H_gamma."""

    gamma: float
    max_q_diff: float
    max_p_scaled_diff: float
    max_energy_relation_dev: float


def _hamilton_rhs(pot: MonomialPotential, gamma: float, mass: float):
    g, n = pot.g, pot.n

    def rhs(t, y):
        q, pg = y
        v1 = g * q ** (n - 1.0) if n != 1.0 else g
        return (pg / (gamma * mass), -gamma * v1)

    return rhs


def newton_equiv_trajectory_check(
    pot: MonomialPotential,
    gamma: float,
    mass: float,
    x0: PhasePoint,
    T: float,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> NewtonEquivReport:
    """Integrate H_standard and H_gamma side by side from matched data.

    Matching means equal q0 and equal initial velocity, i.e.
    p_gamma(0) = gamma p(0). Reported are the sup differences of q(t),
    of p_gamma(t) versus gamma p(t), and of H_gamma versus gamma H_st."""
    if gamma <= 0 or mass <= 0:
        raise ValueError("gamma and mass must be positive")
    t_eval = np.linspace(0.0, T, max(int(math.ceil(T / cfg.dt)), 1) + 1)

    def run(gv):
        sol = solve_ivp(
            _hamilton_rhs(pot, gv, mass),
            (0.0, T),
            [x0.q, gv * mass * (x0.p / mass)],
            method="DOP853",
            rtol=cfg.tol,
            atol=cfg.tol,
            t_eval=t_eval,
        )
        if not sol.success:
            raise StepFailure(sol.message)
        return sol.y

    y_st = run(1.0)
    y_g = run(gamma)
    v_st = pot.g * y_st[0] ** pot.n / pot.n
    v_g = pot.g * y_g[0] ** pot.n / pot.n
    h_st = y_st[1] ** 2 / (2.0 * mass) + v_st
    h_g = y_g[1] ** 2 / (2.0 * gamma * mass) + gamma * v_g
    return NewtonEquivReport(
        gamma=gamma,
        max_q_diff=float(np.max(np.abs(y_g[0] - y_st[0]))),
        max_p_scaled_diff=float(np.max(np.abs(y_g[1] - gamma * y_st[1]))),
        max_energy_relation_dev=float(np.max(np.abs(h_g - gamma * h_st))),
    )


@dataclass(frozen=True)
class EigenResult:
    """Lowest eigenvalues of the boxed H_gamma with a grid-halving error."""

    energies: np.ndarray
    error_estimate: np.ndarray
    box_halfwidth: float
    count: int


def ground_width(pot: MonomialPotential, gamma: float, mass: float, hbar: float) -> float:
    """Length where kinetic and potential scales balance for H_gamma."""
    n = _bound_orbit_exponent(pot)
    return (hbar**2 * n / (2.0 * gamma**2 * mass * pot.g)) ** (1.0 / (n + 2.0))


def eigensolve_newton_equiv(
    pot: MonomialPotential,
    gamma: float,
    mass: float,
    hbar: float,
    k: int,
    count: int = 2048,
) -> EigenResult:
    """Finite-difference spectrum of -hbar^2/(2 gamma m) d^2 + gamma V.

    Dirichlet box of 8 ground widths, second-order three-point stencil,
    discretization error estimated by re-solving at half the grid count."""
    if gamma <= 0 or mass <= 0 or hbar <= 0:
        raise ValueError("gamma, mass, hbar must be positive")
    if k < 1:
        raise ValueError("need k >= 1 levels")
    box = 8.0 * ground_width(pot, gamma, mass, hbar)

    def solve(m_count):
        h = 2.0 * box / (m_count + 1)
        x = -box + h * np.arange(1, m_count + 1)
        kin = hbar**2 / (2.0 * gamma * mass * h**2)
        diag = 2.0 * kin + gamma * pot.g * x**pot.n / pot.n
        off = np.full(m_count - 1, -kin)
        vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))[0]
        return vals

    fine = solve(count)
    coarse = solve(count // 2)
    return EigenResult(
        energies=fine,
        error_estimate=np.abs(fine - coarse),
        box_halfwidth=box,
        count=count,
    )

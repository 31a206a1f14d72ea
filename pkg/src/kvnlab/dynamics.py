"""Trajectory integration on the 4-dimensional extended phase space.

The generator of motion couples the auxiliary pair to the classical one:

    dq/dt  = p
    dp/dt  = -V'(q)
    dlq/dt = lp * V''(q)
    dlp/dt = -lq

so the (q, p) block is ordinary Newtonian motion for unit mass while the
(lq, lp) block is transported by the (negative transpose) linearized flow.
Integration uses an adaptive embedded Runge-Kutta pair with local error
control; trajectories are sampled on a uniform output grid for downstream
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import ExtendedPoint, MonomialPotential, PhasePoint
from .errors import DomainError, SingularityAbort, StepFailure

_METHOD = "DOP853"


@dataclass(frozen=True)
class IntegratorConfig:
    """Sampling step, local error target, and singularity guard radius."""

    dt: float = 0.01
    tol: float = 1e-12
    rmin: float = 1e-6


@dataclass(frozen=True)
class ExtendedTrajectory:
    """Uniformly sampled solution of the extended equations of motion."""

    times: np.ndarray
    states: np.ndarray

    def __len__(self):
        return len(self.times)

    @property
    def initial(self) -> ExtendedPoint:
        return ExtendedPoint.from_array(self.states[0])

    @property
    def final(self) -> ExtendedPoint:
        return ExtendedPoint.from_array(self.states[-1])

    def point(self, i: int) -> ExtendedPoint:
        return ExtendedPoint.from_array(self.states[i])


def eom_rhs(x: ExtendedPoint, pot: MonomialPotential, rmin: float = 1e-6):
    """Right-hand side (dq, dp, dlq, dlp) at a single extended point."""
    if pot.n < 0 and abs(x.q) < rmin:
        raise DomainError(f"|q|={abs(x.q)!r} inside guard radius {rmin!r}")
    v1, v2 = pot.derivs(x.q)
    return np.array([x.p, -v1, x.lp * v2, -x.lq])


def energy(x, pot: MonomialPotential) -> float:
    """Classical energy p^2/2 + V(q) of the (q, p) block."""
    return 0.5 * x.p**2 + pot.value(x.q)


def _rhs_extended(pot):
    g, n = pot.g, pot.n

    def rhs(t, y):
        q, p, lq, lp = y
        v1 = g * q ** (n - 1.0) if n != 1.0 else g
        v2 = g * (n - 1.0) * q ** (n - 2.0) if n not in (1.0, 2.0) else g * (n - 1.0)
        return (p, -v1, lp * v2, -lq)

    return rhs

def _guard_events(pot, rmin):
    if pot.admissible(-1.0):
        return []

    def hit(t, y):
        return y[0] - rmin

    hit.terminal = True
    hit.direction = -1
    return [hit]


def _run(rhs, y0, t_span, t_eval, tol, events):
    sol = solve_ivp(
        rhs,
        t_span,
        y0,
        method=_METHOD,
        rtol=tol,
        atol=tol,
        t_eval=t_eval,
        events=events,
        dense_output=False,
    )
    if sol.status == 1:
        raise SingularityAbort("trajectory entered the guard radius")
    if not sol.success:
        raise StepFailure(sol.message)
    return sol


def sample_times(T: float, dt: float) -> np.ndarray:
    """Uniform output grid from 0 to T inclusive with spacing about dt."""
    n = max(int(math.ceil(abs(T) / dt)), 1)
    return np.linspace(0.0, T, n + 1)


def integrate(
    x0: ExtendedPoint,
    pot: MonomialPotential,
    T: float,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> ExtendedTrajectory:
    """Integrate the extended system over [0, T] (T may be negative)."""
    if T == 0:
        raise ValueError("horizon T must be nonzero")
    if not pot.admissible(x0.q):
        raise DomainError(f"initial q={x0.q!r} outside the potential domain")
    t_eval = sample_times(T, cfg.dt)
    sol = _run(
        _rhs_extended(pot),
        x0.as_array(),
        (0.0, T),
        t_eval,
        cfg.tol,
        _guard_events(pot, cfg.rmin),
    )
    return ExtendedTrajectory(times=sol.t, states=sol.y.T.copy())


def flow_map(
    x0: PhasePoint,
    pot: MonomialPotential,
    t: float,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> PhasePoint:
    """Classical flow of (q, p) by time t; negative t runs backward."""
    if t == 0:
        return x0
    if not pot.admissible(x0.q):
        raise DomainError(f"initial q={x0.q!r} outside the potential domain")
    g, n = pot.g, pot.n

    def rhs(s, y):
        q, p = y
        v1 = g * q ** (n - 1.0) if n != 1.0 else g
        return (p, -v1)

    def guard(s, y):
        return y[0] - cfg.rmin

    guard.terminal = True
    guard.direction = -1
    events = [] if pot.admissible(-1.0) else [guard]
    sol = _run(rhs, [x0.q, x0.p], (0.0, t), [t], cfg.tol, events)
    return PhasePoint(float(sol.y[0, -1]), float(sol.y[1, -1]))


def flow_map_batch(
    qs,
    ps,
    pot: MonomialPotential,
    t: float,
    cfg: IntegratorConfig = IntegratorConfig(),
):
    """Vectorized classical flow for arrays of initial (q, p) pairs.

    All characteristics are advanced as one stacked system so the adaptive
    step is shared; intended for grid transport where the potential is
    globally smooth (positive integer n).
    """
    qs = np.asarray(qs, dtype=float).ravel()
    ps = np.asarray(ps, dtype=float).ravel()
    if t == 0:
        return qs.copy(), ps.copy()
    g, n = pot.g, pot.n
    m = qs.size

    def rhs(s, y):
        q = y[:m]
        p = y[m:]
        v1 = g * q ** (n - 1.0) if n != 1.0 else np.full(m, g)
        return np.concatenate([p, -v1])

    sol = _run(rhs, np.concatenate([qs, ps]), (0.0, t), [t], cfg.tol, [])
    out = sol.y[:, -1]
    return out[:m].copy(), out[m:].copy()


def characteristic_time(
    pot: MonomialPotential,
    x0: ExtendedPoint,
    cfg: IntegratorConfig = IntegratorConfig(),
    probe: float = 20.0,
) -> float:
    """Estimate a natural time scale for the orbit through x0.

    Harmonic wells have the closed-form period 2*pi/sqrt(g). Otherwise a
    probe run detects p = 0 turning events: two consecutive events span a
    half cycle, a single event doubles the time to turning, and monotone
    escape falls back to the crossing scale |q0/p0|. The probe run carries
    an escape guard so finite-time blowup of steep monomials cannot stall
    the estimate.
    """
    if pot.n == 2.0 and pot.g > 0:
        return 2.0 * math.pi / math.sqrt(pot.g)

    def turning(t, y):
        return y[1]

    def escape(t, y):
        return abs(y[0]) - 1e3 * (1.0 + abs(x0.q))

    escape.terminal = True
    events = [turning, escape] + _guard_events(pot, cfg.rmin)
    sol = solve_ivp(
        _rhs_extended(pot),
        (0.0, probe),
        x0.as_array(),
        method=_METHOD,
        rtol=cfg.tol,
        atol=cfg.tol,
        events=events,
    )
    if not sol.success and sol.status != 1:
        raise StepFailure(sol.message)
    hits = [t for t in sol.t_events[0] if t > 1e-9]
    if len(hits) >= 2:
        return 2.0 * (hits[1] - hits[0])
    if len(hits) == 1:
        return 2.0 * hits[0]
    if x0.p != 0:
        return 2.0 * abs(x0.q / x0.p)
    return probe / 20.0

"""Grid-based states: classical transport and split-basis evolution.

Two representations share one container. In the "qp" representation the
amplitude psi(q, p) is transported along classical characteristics (the
density |psi|^2 obeys the classical continuity picture). In the "qqbar"
representation psi(Q, Qbar) evolves under the generator

    i d/dt psi = (1/hbar) [ hQ - hQbar ] psi,
    hX = -(hbar^2/2) d^2/dX^2 + V(X),

a difference of two one-variable Schrodinger operators, integrated by
Strang-split spectral steps. Product states stay products under that
evolution; the similarity unitary of the harmonic case mixes the two
factors hyperbolically and is applied as an area-preserving coordinate
remap.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .core import HbarContext, MonomialPotential
from .dynamics import IntegratorConfig, flow_map_batch
from .errors import NonNormalizable, SupportExit

REP_QP = "qp"
REP_QQBAR = "qqbar"
GRID_EXPONENTS = (1, 2, 4)


class AliasingWarning(UserWarning):
    """Spectral tail carries non-negligible weight; grid too coarse."""


class DomainExitWarning(UserWarning):
    """Characteristics left the grid; amplitude zero-filled there."""


def _power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridAxis:
    """Uniform axis of `count` points centred on `center`.

    extent is the half-width; points run over [center - extent,
    center + extent) with the right endpoint excluded so the axis is
    FFT-periodic. count must be a power of two."""

    center: float
    extent: float
    count: int

    def __post_init__(self):
        if not _power_of_two(self.count):
            raise ValueError(f"count={self.count} is not a power of two >= 2")
        if not (math.isfinite(self.extent) and self.extent > 0):
            raise ValueError("extent must be finite and positive")

    @property
    def dx(self) -> float:
        return 2.0 * self.extent / self.count

    def points(self) -> np.ndarray:
        return self.center - self.extent + self.dx * np.arange(self.count)

    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.count, d=self.dx)

    def to_dict(self) -> dict:
        return {"center": self.center, "extent": self.extent, "count": self.count}


@dataclass
class GridState2D:
    """Complex amplitudes on the tensor grid axis1 x axis2."""

    axis1: GridAxis
    axis2: GridAxis
    amps: np.ndarray
    rep: str
    hbar: float

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (self.axis1.count, self.axis2.count):
            raise ValueError(
                f"amps shape {self.amps.shape} does not match axes "
                f"({self.axis1.count}, {self.axis2.count})"
            )
        if self.rep not in (REP_QP, REP_QQBAR):
            raise ValueError(f"unknown representation {self.rep!r}")
        HbarContext(self.hbar)
        if not np.all(np.isfinite(self.amps.view(float))):
            raise NonNormalizable("amplitudes contain non-finite entries")

    @property
    def cell(self) -> float:
        return self.axis1.dx * self.axis2.dx

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.amps) ** 2)) * self.cell)

    def normalized(self) -> "GridState2D":
        n = self.norm()
        if not (math.isfinite(n) and n > 0):
            raise NonNormalizable(f"norm {n!r} is not positive and finite")
        return GridState2D(self.axis1, self.axis2, self.amps / n, self.rep, self.hbar)

    def expectation(self, fn) -> float:
        """Mean of fn(x1, x2) under |psi|^2 (normalized internally)."""
        x1 = self.axis1.points()[:, None]
        x2 = self.axis2.points()[None, :]
        w = np.abs(self.amps) ** 2
        total = float(np.sum(w))
        if total <= 0:
            raise NonNormalizable("state has zero weight")
        return float(np.sum(fn(x1, x2) * w) / total)

    @staticmethod
    def from_function(axis1, axis2, fn, rep, hbar) -> "GridState2D":
        """Evaluate fn on the tensor grid and normalize."""
        x1 = axis1.points()[:, None]
        x2 = axis2.points()[None, :]
        state = GridState2D(axis1, axis2, np.asarray(fn(x1, x2), dtype=complex), rep, hbar)
        return state.normalized()

    def save(self, prefix: str):
        """Write <prefix>.npy (amplitudes) and <prefix>.json (metadata)."""
        np.save(f"{prefix}.npy", self.amps)
        meta = {
            "axis1": self.axis1.to_dict(),
            "axis2": self.axis2.to_dict(),
            "rep": self.rep,
            "hbar": self.hbar,
        }
        with open(f"{prefix}.json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)

    @staticmethod
    def load(prefix: str) -> "GridState2D":
        with open(f"{prefix}.json") as fh:
            meta = json.load(fh)
        return GridState2D(
            axis1=GridAxis(**meta["axis1"]),
            axis2=GridAxis(**meta["axis2"]),
            amps=np.load(f"{prefix}.npy"),
            rep=meta["rep"],
            hbar=meta["hbar"],
        )


def gaussian_profile(center: float = 0.0, width: float = 1.0):
    """Amplitude Gaussian whose |.|^2 density has standard deviation width."""

    def f(x):
        return np.exp(-((x - center) ** 2) / (4.0 * width**2))

    return f


def make_separable(f1, f2, axis1, axis2, rep=REP_QQBAR, hbar=1.0) -> GridState2D:
    """Normalized product state f1(x1) * f2(x2) on the tensor grid."""
    a1 = np.asarray(f1(axis1.points()), dtype=complex)
    a2 = np.asarray(f2(axis2.points()), dtype=complex)
    return GridState2D(axis1, axis2, np.outer(a1, a2), rep, hbar).normalized()


def _require_grid_potential(pot: MonomialPotential):
    if pot.n not in GRID_EXPONENTS:
        raise ValueError(
            f"grid evolution supports n in {GRID_EXPONENTS}, got n={pot.n}"
        )


def _interpolate(state: GridState2D, pts1, pts2, fill_warning: str):
    """Bicubic sample of the amplitudes at off-grid points.

    Points outside the grid are zero-filled with a warning; the returned
    array has the shape of pts1."""
    x1 = state.axis1.points()
    x2 = state.axis2.points()
    sp_re = RectBivariateSpline(x1, x2, state.amps.real, kx=3, ky=3)
    sp_im = RectBivariateSpline(x1, x2, state.amps.imag, kx=3, ky=3)
    flat1 = np.asarray(pts1, dtype=float).ravel()
    flat2 = np.asarray(pts2, dtype=float).ravel()
    inside = (
        (flat1 >= x1[0]) & (flat1 <= x1[-1]) & (flat2 >= x2[0]) & (flat2 <= x2[-1])
    )
    vals = np.zeros(flat1.size, dtype=complex)
    if np.any(inside):
        vals[inside] = sp_re(flat1[inside], flat2[inside], grid=False) + 1j * sp_im(
            flat1[inside], flat2[inside], grid=False
        )
    n_out = int(np.count_nonzero(~inside))
    if n_out:
        warnings.warn(
            f"{fill_warning}: {n_out} sample points left the grid; zero-filled",
            DomainExitWarning,
        )
    return vals.reshape(np.shape(pts1)), inside.reshape(np.shape(pts1))


def evolve_liouville(
    state: GridState2D,
    pot: MonomialPotential,
    t: float,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> GridState2D:
    """Transport a (q, p) amplitude along classical characteristics.

    Semi-Lagrangian step: each node is pulled back through the classical
    flow by t and the initial amplitude is sampled there with bicubic
    interpolation. The flow is area preserving, so the L2 norm is
    conserved up to interpolation error."""
    if state.rep != REP_QP:
        raise ValueError("evolve_liouville needs the qp representation")
    _require_grid_potential(pot)
    if t == 0:
        return GridState2D(state.axis1, state.axis2, state.amps.copy(), state.rep, state.hbar)
    qn, pn = np.meshgrid(state.axis1.points(), state.axis2.points(), indexing="ij")
    q0, p0 = flow_map_batch(qn, pn, pot, -t, cfg)
    vals, _ = _interpolate(
        state, q0.reshape(qn.shape), p0.reshape(pn.shape), "classical transport"
    )
    return GridState2D(state.axis1, state.axis2, vals, state.rep, state.hbar)


def evolve_G(
    state: GridState2D, pot: MonomialPotential, t: float, steps: int
) -> GridState2D:
    """Strang-split spectral evolution in the (Q, Qbar) representation.

    Each step applies half a potential phase exp(-i dt (V(Q)-V(Qbar))/2hbar),
    a full kinetic phase exp(-i dt hbar (kQ^2 - kQbar^2)/2) in Fourier
    space, and the second potential half. Every factor is unimodular, so
    the norm is exact up to roundoff."""
    if state.rep != REP_QQBAR:
        raise ValueError("evolve_G needs the qqbar representation")
    _require_grid_potential(pot)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    dt = t / steps
    hb = state.hbar
    x1 = state.axis1.points()
    x2 = state.axis2.points()
    v1 = pot.g * x1**pot.n / pot.n
    v2 = pot.g * x2**pot.n / pot.n
    half_v = np.exp(-0.5j * dt * (v1[:, None] - v2[None, :]) / hb)
    k1 = state.axis1.wavenumbers()
    k2 = state.axis2.wavenumbers()
    kin = np.exp(-0.5j * dt * hb * (k1[:, None] ** 2 - k2[None, :] ** 2))
    psi = state.amps.copy()
    for _ in range(steps):
        psi *= half_v
        psi = np.fft.ifft2(kin * np.fft.fft2(psi))
        psi *= half_v
    _warn_if_aliased(psi)
    return GridState2D(state.axis1, state.axis2, psi, state.rep, state.hbar)


def _warn_if_aliased(psi, tail_fraction: float = 8, threshold: float = 1e-6):
    spec = np.abs(np.fft.fft2(psi)) ** 2
    total = float(spec.sum())
    if total == 0:
        return
    n1, n2 = spec.shape
    b1, b2 = n1 // tail_fraction, n2 // tail_fraction
    lo1, hi1 = n1 // 2 - b1, n1 // 2 + b1
    lo2, hi2 = n2 // 2 - b2, n2 // 2 + b2
    tail = float(spec[lo1:hi1, :].sum() + spec[:, lo2:hi2].sum())
    if tail / total > threshold:
        warnings.warn(
            f"spectral tail fraction {tail / total:.3e} above {threshold:.1e}",
            AliasingWarning,
        )


def apply_lms_unitary_harmonic(
    state: GridState2D, alpha: float, norm_budget: float = 1e-3
) -> GridState2D:
    """Similarity unitary of the harmonic case as a hyperbolic remap.

    The generator acts as the vector field Qbar d/dQ + Q d/dQbar, whose
    time-alpha flow is (Q, Qbar) -> (Q cosh a + Qbar sinh a,
    Q sinh a + Qbar cosh a). The flow is area preserving, so the remap is
    unitary up to interpolation; a norm change beyond norm_budget means
    the mapped support left the grid."""
    if state.rep != REP_QQBAR:
        raise ValueError("the similarity remap needs the qqbar representation")
    before = state.norm()
    ch, sh = math.cosh(alpha), math.sinh(alpha)
    qn, bn = np.meshgrid(state.axis1.points(), state.axis2.points(), indexing="ij")
    src1 = ch * qn + sh * bn
    src2 = sh * qn + ch * bn
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DomainExitWarning)
        vals, _ = _interpolate(state, src1, src2, "similarity remap")
    out = GridState2D(state.axis1, state.axis2, vals, state.rep, state.hbar)
    after = out.norm()
    if abs(after - before) > norm_budget * max(before, 1e-300):
        raise SupportExit(
            f"norm changed {before:.6e} -> {after:.6e}; support left the grid"
        )
    return out


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Singular values of the amplitude kernel, largest first."""

    values: np.ndarray

    @property
    def ratio(self) -> float:
        """Second-to-first singular value ratio; 0 for a rank-one kernel."""
        if len(self.values) < 2 or self.values[0] == 0:
            return 0.0
        return float(self.values[1] / self.values[0])

    def squared_sum(self) -> float:
        return float(np.sum(self.values**2))


def schmidt(state: GridState2D) -> SchmidtSpectrum:
    """Schmidt spectrum of psi(x1, x2) under the flat grid measure.

    The kernel is weighted by sqrt(dx1 dx2) so the squared singular
    values sum to the squared L2 norm."""
    m = state.amps * math.sqrt(state.cell)
    s = np.linalg.svd(m, compute_uv=False)
    return SchmidtSpectrum(values=np.sort(s)[::-1])

"""Shared value types for monomial mechanics in extended phase space.

The configuration space is one-dimensional. A point of the extended phase
space carries the classical pair (q, p) together with the auxiliary pair
(lq, lp) conjugate to them, so that states and observables of the operational
formulation of classical mechanics live on a 4-dimensional manifold with
canonical pairs (q, lq) and (p, lp). Mass is fixed to 1 throughout; the
Newton-equivalent family in :mod:`kvnlab.semiclassics` carries its own mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UndefinedError


def _is_positive_integer(n: float) -> bool:
    return float(n).is_integer() and n >= 1


@dataclass(frozen=True)
class MonomialPotential:
    """Power-law potential V(q) = g * q**n / n.

    g is finite and nonzero, n is finite and nonzero. When n is not a
    positive integer the admissible position domain is q > 0; for negative
    integer n the origin is excluded as well, which the same rule covers.
    """

    g: float
    n: float

    def __post_init__(self):
        if not (math.isfinite(self.g) and self.g != 0.0):
            raise UndefinedError("coupling g must be finite and nonzero")
        if not math.isfinite(self.n):
            raise UndefinedError("exponent n must be finite")
        if self.n == 0:
            raise UndefinedError("exponent n = 0 leaves V undefined")

    def admissible(self, q: float) -> bool:
        if _is_positive_integer(self.n):
            return math.isfinite(q)
        return math.isfinite(q) and q > 0.0

    def _require(self, q: float):
        if not self.admissible(q):
            raise DomainError(
                f"q={q!r} outside the domain of q**{self.n} (need q > 0)"
            )

    def value(self, q: float) -> float:
        """Evaluate V(q) = g * q**n / n."""
        self._require(q)
        return self.g * q ** self.n / self.n

    def derivs(self, q: float) -> tuple[float, float]:
        """Return (V'(q), V''(q)) = (g q**(n-1), g (n-1) q**(n-2)).

        Zero coefficients short-circuit the power so n = 1 is finite at q = 0.
        """
        self._require(q)
        n = self.n
        v1 = self.g * q ** (n - 1.0) if n != 1.0 else self.g * 1.0
        if n == 1.0:
            v2 = 0.0
        elif n == 2.0:
            v2 = self.g * (n - 1.0)
        else:
            v2 = self.g * (n - 1.0) * q ** (n - 2.0)
        return v1, v2


@dataclass(frozen=True)
class PhasePoint:
    """Classical phase-space point (q, p)."""

    q: float
    p: float


@dataclass(frozen=True)
class ExtendedPoint:
    """Extended phase-space point (q, p, lq, lp)."""

    q: float
    p: float
    lq: float
    lp: float

    def as_array(self):
        import numpy as np

        return np.array([self.q, self.p, self.lq, self.lp], dtype=float)

    @staticmethod
    def from_array(x) -> "ExtendedPoint":
        return ExtendedPoint(float(x[0]), float(x[1]), float(x[2]), float(x[3]))


@dataclass(frozen=True)
class HbarContext:
    """Validated scale parameter for the operator-level constructions."""

    hbar: float

    def __post_init__(self):
        if not (math.isfinite(self.hbar) and self.hbar > 0.0):
            raise UndefinedError("hbar must be finite and positive")


@dataclass(frozen=True)
class LmsParams:
    """Finite similarity parameters for a fixed exponent n.

    alpha = exp(beta) is the position rescale factor; alpha_tilde =
    beta * (n - 2) / 2 is the matching infinitesimal parameter. n = 2 is
    kept (alpha_tilde = 0) but flagged, because several downstream formulas
    divide by (2 - n) and use a dedicated harmonic variant instead.
    """

    alpha: float
    beta: float
    alpha_tilde: float
    n: float

    @property
    def harmonic(self) -> bool:
        return self.n == 2.0


def lms_params_from_beta(beta: float, n: float) -> LmsParams:
    """Build LmsParams from the log-scale parameter beta."""
    if not math.isfinite(beta):
        raise UndefinedError("beta must be finite")
    if not math.isfinite(n) or n == 0:
        raise UndefinedError("exponent n must be finite and nonzero")
    alpha = math.exp(beta)
    return LmsParams(alpha=alpha, beta=beta, alpha_tilde=beta * (n - 2.0) / 2.0, n=n)


def lms_params_from_alpha(alpha: float, n: float) -> LmsParams:
    """Build LmsParams from the rescale factor alpha > 0."""
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise UndefinedError("alpha must be finite and positive")
    return lms_params_from_beta(math.log(alpha), n)

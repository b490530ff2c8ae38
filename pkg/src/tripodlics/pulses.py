"""Time-dependent ionization-rate envelopes, derivatives and areas."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import erf

from .model import RateSnapshot


class InfiniteAreaError(ValueError):
    """A constant rate integrated over an unbounded interval."""


@dataclass(frozen=True)
class GaussianPulse:
    """Rate gamma * exp(-((t - center)/width)^2)."""

    gamma: float
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("peak rate must be >= 0")
        if self.width <= 0:
            raise ValueError("width must be > 0")

    def rate(self, t):
        u = (np.asarray(t, dtype=float) - self.center) / self.width
        return self.gamma * np.exp(-u * u)

    def rate_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return -2.0 * (t - self.center) / self.width**2 * self.rate(t)

    def area(self, t0: float, t1: float) -> float:
        # Exact: gamma * width * sqrt(pi)/2 * [erf(u1) - erf(u0)]
        u0 = -math.inf if t0 == -math.inf else (t0 - self.center) / self.width
        u1 = math.inf if t1 == math.inf else (t1 - self.center) / self.width
        e0 = -1.0 if u0 == -math.inf else float(erf(u0))
        e1 = 1.0 if u1 == math.inf else float(erf(u1))
        return self.gamma * self.width * math.sqrt(math.pi) / 2.0 * (e1 - e0)

    def extent(self) -> tuple[float, float]:
        # Tails beyond 6 widths are < e^-36 of the peak.
        return (self.center - 6.0 * self.width, self.center + 6.0 * self.width)


@dataclass(frozen=True)
class ConstantPulse:
    """Time-independent rate gamma."""

    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("peak rate must be >= 0")

    def rate(self, t):
        return self.gamma * np.ones_like(np.asarray(t, dtype=float))

    def rate_derivative(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def area(self, t0: float, t1: float) -> float:
        if not (math.isfinite(t0) and math.isfinite(t1)):
            if self.gamma == 0.0:
                return 0.0
            raise InfiniteAreaError(
                "constant rate has no finite area over an unbounded interval")
        return self.gamma * (t1 - t0)

    def extent(self) -> None:
        return None


@dataclass(frozen=True)
class SharedEnvelope:
    """Rate gamma * f(t) with a shared unit-peak envelope f.

    Used for coincident pulses, where all three rates follow the same
    time dependence and differ only in their weights.
    """

    gamma: float
    envelope: GaussianPulse

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("weight must be >= 0")

    def _shape(self):
        return GaussianPulse(self.gamma * self.envelope.gamma,
                             self.envelope.center, self.envelope.width)

    def rate(self, t):
        return self._shape().rate(t)

    def rate_derivative(self, t):
        return self._shape().rate_derivative(t)

    def area(self, t0: float, t1: float) -> float:
        return self._shape().area(t0, t1)

    def extent(self) -> tuple[float, float]:
        return self._shape().extent()


PulseShape = Union[GaussianPulse, ConstantPulse, SharedEnvelope]


@dataclass(frozen=True)
class PulseTriple:
    """Pump, Stokes and control rate envelopes."""

    pump: PulseShape
    stokes: PulseShape
    control: PulseShape

    def __iter__(self):
        return iter((self.pump, self.stokes, self.control))


def evaluate(p: PulseTriple, t: float) -> RateSnapshot:
    """Rates and their analytic time derivatives at time t."""
    return RateSnapshot(
        g1=float(p.pump.rate(t)), g2=float(p.stokes.rate(t)),
        g3=float(p.control.rate(t)),
        dg1=float(p.pump.rate_derivative(t)),
        dg2=float(p.stokes.rate_derivative(t)),
        dg3=float(p.control.rate_derivative(t)),
    )


def total_rate(p: PulseTriple, t):
    """Vectorized Gamma(t) = Gamma1 + Gamma2 + Gamma3."""
    return p.pump.rate(t) + p.stokes.rate(t) + p.control.rate(t)


def pulse_area(p: PulseTriple, t0: float, t1: float) -> float:
    """Integral of the total rate over [t0, t1].

    Gaussian contributions are evaluated in closed form (erf); constants
    require finite bounds.
    """
    if t0 >= t1:
        raise ValueError(f"need t0 < t1, got ({t0}, {t1})")
    return sum(shape.area(t0, t1) for shape in p)


def default_window(p: PulseTriple, pad: float = 0.0) -> tuple[float, float]:
    """Integration window covering all pulsed envelopes out to their
    6-width tails.  Constant rates set no scale; if no pulsed envelope is
    present an explicit window must be supplied by the caller."""
    lo, hi = math.inf, -math.inf
    for shape in p:
        ext = shape.extent()
        if ext is not None:
            lo = min(lo, ext[0])
            hi = max(hi, ext[1])
    if not math.isfinite(lo):
        raise ValueError("all rates are constant; supply an explicit window")
    span = max(abs(lo), abs(hi)) + pad
    return (-span, span)

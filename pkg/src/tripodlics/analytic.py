"""Closed-form results: coincident-pulse populations, ionization extremes,
adiabatic-limit transfer, the adiabaticity window, level-crossing
diagnostics, and the reduction to an effective two-state system."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .model import (Detunings, DegenerateRatesError, FanoParams, RateSnapshot,
                    angle_rates, rotated_hamiltonian)
from .propagate import PropagationError, Trajectory
from .pulses import PulseTriple, default_window, evaluate

EPS_Q = 1e-12


class PulseOrderingWarning(UserWarning):
    """The requested pulse-timing limits do not hold on the truncated window."""


@dataclass(frozen=True)
class CoincidentSpec:
    """Coincident pulses Gamma_k(t) = gamma_k f(t) with a common Fano
    parameter q and total pulse area A."""

    gamma1: float
    gamma2: float
    gamma3: float
    q: float
    area: float

    def __post_init__(self):
        if min(self.gamma1, self.gamma2, self.gamma3) < 0:
            raise ValueError("weights must be >= 0")
        if self.gamma1 + self.gamma2 + self.gamma3 <= 0:
            raise ValueError("total weight must be > 0")
        if self.area < 0:
            raise ValueError("pulse area must be >= 0")


def coincident_populations(s: CoincidentSpec) -> tuple[float, float, float, float]:
    """Final (P1, P2, P3, Pi) for coincident pulses with equal Fano
    parameters, starting from the pump-coupled state."""
    g = s.gamma1 + s.gamma2 + s.gamma3
    e1 = math.exp(-s.area)
    eh = math.exp(-0.5 * s.area)
    c = math.cos(0.5 * s.q * s.area)
    rest = s.gamma2 + s.gamma3
    p1 = (rest * rest + s.gamma1 * s.gamma1 * e1
          + 2.0 * s.gamma1 * rest * eh * c) / (g * g)
    # The state coupled to the start state through sqrt(G1*G2) picks up
    # weight gamma1*gamma2; the control-coupled one gamma1*gamma3.
    ring = 1.0 + e1 - 2.0 * eh * c
    p2 = s.gamma1 * s.gamma2 / (g * g) * ring
    p3 = s.gamma1 * s.gamma3 / (g * g) * ring
    pi = s.gamma1 / g * (1.0 - e1)
    return p1, p2, p3, pi


def max_ionization_coincident(g1: float, g2: float, g3: float) -> float:
    """Strong-field ceiling on the ionization probability for coincident
    pulses: the initial population of the only decaying adiabatic state."""
    g = g1 + g2 + g3
    if g <= 0:
        raise ValueError("total weight must be > 0")
    return g1 / g


def complete_ionization(area: float) -> float:
    """Ionization in the adiabatic limit for the intuitive pulse order
    (pump first): 1 - exp(-A)."""
    if area < 0:
        raise ValueError("pulse area must be >= 0")
    return 1.0 - math.exp(-area)


def adiabatic_transfer_populations(p: PulseTriple,
                                   window: tuple[float, float] | None = None,
                                   ) -> tuple[float, float, float]:
    """Adiabatic-limit populations for equal Fano parameters and a
    control pulse that brackets a counterintuitive pump/Stokes pair.

    P1 = cos^2 and P2 = sin^2 of the integral of theta_dot * sin(phi);
    the decaying channel stays empty, so P3 = 0.
    """
    t0, t1 = window if window is not None else default_window(p)
    _check_bracketing_order(p, t0, t1)

    def integrand(t):
        r = evaluate(p, t)
        theta_dot, _ = angle_rates(r)
        gtot = r.total()
        if gtot <= 0:
            return 0.0
        return theta_dot * math.sqrt(r.g3 / gtot)

    val, _ = quad(integrand, t0, t1, limit=400)
    return math.cos(val) ** 2, math.sin(val) ** 2, 0.0


def _check_bracketing_order(p: PulseTriple, t0: float, t1: float,
                            ratio: float = 1e-2) -> None:
    r0 = evaluate(p, t0)
    r1 = evaluate(p, t1)
    ok = True
    for r in (r0, r1):
        if r.g3 <= 0 or max(r.g1, r.g2) > ratio * r.g3:
            ok = False
    # Stokes before pump:
    if r0.g2 > 0 and r0.g1 > ratio * r0.g2:
        ok = False
    if r1.g1 > 0 and r1.g2 > ratio * r1.g1:
        ok = False
    if not ok:
        warnings.warn(
            "pulse ordering (control brackets a counterintuitive "
            "pump/Stokes pair) does not hold at the window edges",
            PulseOrderingWarning, stacklevel=3)


class TransferOutcome(enum.Enum):
    """Fully adiabatic asymptotics for the bracketing pulse order."""

    TRANSFER = "transfer"                 # q13 = q23 != q12: psi1 -> psi2
    RETURN = "return"                     # q13 != q23: population returns
    DELAY_CONTROLLED = "delay-controlled"  # all q equal: set by pulse delay


def transfer_asymptotics(q: FanoParams) -> TransferOutcome:
    if abs(q.q13 - q.q23) <= EPS_Q:
        if abs(q.q13 - q.q12) <= EPS_Q:
            return TransferOutcome.DELAY_CONTROLLED
        return TransferOutcome.TRANSFER
    return TransferOutcome.RETURN


@dataclass(frozen=True)
class AdiabaticityWindow:
    """Bounds on gamma3 * T between which appreciable transfer survives:
    adiabatic enough to avoid ionization, yet not so adiabatic that the
    residual level crossing drives the population back."""

    lower: float
    upper: float
    value: float  # actual gamma3 * T for the supplied parameters

    def contains(self, margin: float = 1.0) -> bool:
        return self.lower * margin < self.value < self.upper / margin


def adiabaticity_window(q: FanoParams, gamma3: float, tau: float,
                        T: float) -> AdiabaticityWindow:
    """Dimensionless window for gamma3 * T (strong constant control,
    equal pump/Stokes peaks)."""
    if T <= 0:
        raise ValueError("width must be > 0")
    lower = 2.0 * tau / (T * math.sqrt(1.0 + 0.25 * (q.q13 + q.q23) ** 2))
    dq = abs(q.q13 - q.q23)
    upper = math.inf if dq <= EPS_Q else 8.0 * tau / (T * dq)
    return AdiabaticityWindow(lower=lower, upper=upper, value=gamma3 * T)


@dataclass(frozen=True)
class LandauZenerDiagnostics:
    """Level-crossing diagnostics in the rotated basis.

    crossing_time is the root of haa - hbb (None if no sign change);
    max_coupling / min_gap summarize the decay-channel adiabaticity
    profile over the window; lz_coupling_sq and lz_slope compare the
    residual coupling squared against half the detuning sweep rate at
    the crossing (both None without a crossing).
    """

    crossing_time: float | None
    max_coupling: float
    min_gap: float
    lz_coupling_sq: float | None
    lz_slope: float | None
    hab_identically_zero: bool

    @property
    def has_crossing(self) -> bool:
        return self.crossing_time is not None


def landau_zener_conditions(q: FanoParams, p: PulseTriple,
                            window: tuple[float, float] | None = None,
                            grid: int = 2001) -> LandauZenerDiagnostics:
    t0, t1 = window if window is not None else default_window(p)

    def entries(t):
        return rotated_hamiltonian(q, evaluate(p, t))

    def split(t):
        h = entries(t)
        return h.haa - h.hbb

    # Skip samples where both pump and Stokes have underflowed (window
    # edges): the rotated basis is undefined there.
    ts = np.array([t for t in np.linspace(t0, t1, grid)
                   if evaluate(p, t).g1 + evaluate(p, t).g2 > 1e-14])
    if len(ts) < 2:
        raise DegenerateRatesError(
            "pump and Stokes rates vanish over the whole window")
    hs = [entries(t) for t in ts]
    diffs = np.array([h.haa - h.hbb for h in hs])
    couplings = np.array([abs(h.theta_dot * h.cos_phi) for h in hs])
    gaps = np.array([math.hypot(h.haa - h.hcc, 0.5 * h.gamma) for h in hs])

    sign_change = np.nonzero(np.diff(np.signbit(diffs)))[0]
    crossing = None
    lz_coupling_sq = None
    lz_slope = None
    if len(sign_change):
        i = int(sign_change[0])
        crossing = float(brentq(split, ts[i], ts[i + 1]))
        h = 1e-6 * (t1 - t0)
        slope = (split(crossing + h) - split(crossing - h)) / (2.0 * h)
        lz_slope = 0.5 * abs(slope)
        lz_coupling_sq = entries(crossing).hab ** 2
    hab_zero = abs(q.q13 - q.q23) <= EPS_Q
    return LandauZenerDiagnostics(
        crossing_time=crossing,
        max_coupling=float(couplings.max()),
        min_gap=float(gaps.min()),
        lz_coupling_sq=lz_coupling_sq,
        lz_slope=lz_slope,
        hab_identically_zero=hab_zero,
    )


@dataclass(frozen=True)
class EffectiveTwoState:
    """Parameters of the two-state system left after eliminating the
    strongly ionized third state: rescaled rates, an effective Fano
    parameter, and a shifted detuning."""

    g1ae: float
    g2ae: float
    qae: float
    dae: float


def effective_two_state(q: FanoParams, r: RateSnapshot,
                        d: Detunings) -> EffectiveTwoState:
    if q.q13 * q.q23 == 0.0:
        raise ZeroDivisionError(
            "effective Fano parameter needs q13 * q23 != 0")
    return EffectiveTwoState(
        g1ae=r.g1 * q.q13 ** 2,
        g2ae=r.g2 * q.q23 ** 2,
        qae=(q.q12 - q.q13 - q.q23) / (q.q13 * q.q23),
        dae=(d.delta2 - d.delta1 + d.S2 - d.S1
             + r.g2 * q.q23 - r.g1 * q.q13),
    )


def propagate_effective(q: FanoParams, p: PulseTriple,
                        d: Detunings = Detunings(0.0, 0.0),
                        init=(1.0, 0.0),
                        window: tuple[float, float] | None = None,
                        tol: float = 1e-10,
                        samples: int = 512) -> Trajectory:
    """Integrate the eliminated-state two-level system with the modified
    parameters evaluated along the pulses.  The control rate enters only
    through the elimination, not as an explicit decay channel."""
    y0 = np.asarray(init, dtype=complex)
    if not math.isclose(float(np.linalg.norm(y0)), 1.0, rel_tol=0, abs_tol=1e-9):
        raise ValueError("initial state must be normalized")
    t0, t1 = window if window is not None else default_window(p)

    def rhs(t, y):
        e = effective_two_state(q, evaluate(p, t), d)
        coup = -0.5 * math.sqrt(e.g1ae * e.g2ae) * (e.qae + 1j)
        h11 = -0.5j * e.g1ae
        h22 = e.dae - 0.5j * e.g2ae
        y1, y2 = y
        return np.array([
            -1j * (h11 * y1 + coup * y2),
            -1j * (coup * y1 + h22 * y2),
        ])

    t_eval = np.linspace(t0, t1, samples)
    sol = solve_ivp(rhs, (t0, t1), y0, method="RK45", rtol=tol,
                    atol=tol * 1e-2, t_eval=t_eval)
    if not sol.success:
        raise PropagationError(sol.message, t=float(sol.t[-1]) if len(sol.t) else t0)
    return Trajectory(t=sol.t, c=sol.y.T.copy())

"""Numerical integration of the amplitude equations in the bare basis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import solve_ivp

from .model import Detunings, FanoParams, trapping_detunings
from .pulses import PulseTriple, default_window, evaluate


class PropagationError(RuntimeError):
    """Integration failure (e.g. step-size underflow); carries the time
    at which the integrator gave up."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (at t = {t})")
        self.t = t


@dataclass(frozen=True)
class AutoTrap:
    """Detunings follow the trapping conditions at every instant."""


@dataclass(frozen=True)
class Static:
    """Fixed two-photon detunings; Stark shifts are zero."""

    delta1: float = 0.0
    delta2: float = 0.0


DetuningPolicy = Union[AutoTrap, Static]


def policy_detunings(policy: DetuningPolicy, q: FanoParams, r) -> Detunings:
    if isinstance(policy, AutoTrap):
        return trapping_detunings(q, r)
    return Detunings(delta1=policy.delta1, delta2=policy.delta2)


def populations(c) -> tuple[float, float, float, float]:
    """(P1, P2, P3, Pi) from a three-component amplitude vector."""
    c = np.asarray(c)
    p = np.abs(c) ** 2
    p1, p2, p3 = (float(x) for x in p)
    return p1, p2, p3, 1.0 - p1 - p2 - p3


@dataclass(frozen=True)
class Trajectory:
    """Sampled populations along one propagation run."""

    t: np.ndarray          # (n,) sample times
    c: np.ndarray          # (n, k) complex amplitudes

    @property
    def p(self) -> np.ndarray:
        return np.abs(self.c) ** 2

    @property
    def norm2(self) -> np.ndarray:
        return self.p.sum(axis=1)

    @property
    def pion(self) -> np.ndarray:
        return 1.0 - self.norm2

    def final_populations(self) -> tuple:
        last = self.p[-1]
        return tuple(float(x) for x in last) + (float(1.0 - last.sum()),)

    def rows(self):
        """Iterate (t, P1, ..., Pi, norm) records (norm = ||C||^2)."""
        p = self.p
        n = self.norm2
        for i in range(len(self.t)):
            yield (float(self.t[i]), *(float(x) for x in p[i]),
                   float(1.0 - n[i]), float(n[i]))


def propagate(q: FanoParams, p: PulseTriple,
              policy: DetuningPolicy = AutoTrap(),
              init=(1.0, 0.0, 0.0),
              window: tuple[float, float] | None = None,
              tol: float = 1e-10,
              samples: int = 512) -> Trajectory:
    """Adaptively integrate i dC/dt = H(t) C from a normalized start.

    Uses an embedded Runge-Kutta 4(5) pair with per-step local error
    bounded by `tol`; records `samples` uniformly spaced points including
    both endpoints.
    """
    y0 = np.asarray(init, dtype=complex)
    nrm = np.linalg.norm(y0)
    if not math.isclose(nrm, 1.0, rel_tol=0, abs_tol=1e-9):
        raise ValueError(f"initial state must be normalized, ||C|| = {nrm}")
    t0, t1 = window if window is not None else default_window(p)
    if t0 >= t1:
        raise ValueError(f"need t0 < t1, got ({t0}, {t1})")

    def rhs(t, y):
        r = evaluate(p, t)
        d = policy_detunings(policy, q, r)
        s1, s2, s3 = math.sqrt(r.g1), math.sqrt(r.g2), math.sqrt(r.g3)
        h11 = d.D1 - 0.5j * r.g1
        h22 = d.D2 - 0.5j * r.g2
        h33 = -0.5j * r.g3
        h12 = -0.5 * s1 * s2 * (q.q12 + 1j)
        h13 = -0.5 * s1 * s3 * (q.q13 + 1j)
        h23 = -0.5 * s2 * s3 * (q.q23 + 1j)
        y1, y2, y3 = y
        return np.array([
            -1j * (h11 * y1 + h12 * y2 + h13 * y3),
            -1j * (h12 * y1 + h22 * y2 + h23 * y3),
            -1j * (h13 * y1 + h23 * y2 + h33 * y3),
        ])

    t_eval = np.linspace(t0, t1, samples)
    sol = solve_ivp(rhs, (t0, t1), y0, method="RK45", rtol=tol,
                    atol=tol * 1e-2, t_eval=t_eval)
    if not sol.success:
        raise PropagationError(sol.message, t=float(sol.t[-1]) if len(sol.t) else t0)
    return Trajectory(t=sol.t, c=sol.y.T.copy())


def final_amplitudes_batch(q: FanoParams, rates_at, detunings_at,
                           t0: float, t1: float, n_steps: int,
                           init=(1.0, 0.0, 0.0)) -> np.ndarray:
    """Fixed-step classical Runge-Kutta propagation of many independent
    parameter points at once.

    rates_at(t) must return (g1, g2, g3) arrays broadcastable to a common
    shape (N,); detunings_at(t, g1, g2, g3) returns (d1, d2) the same
    way.  Returns the (N, 3) complex amplitudes at t1.  Used by the scan
    driver where per-point adaptive integration would be too slow; the
    step count must be chosen so that ||H|| * dt stays well below one.
    """
    tm = 0.5 * (t0 + t1)
    rates_probe = rates_at(tm)
    probe = np.broadcast_arrays(*rates_probe, *detunings_at(tm, *rates_probe))
    npts = probe[0].size
    y = np.broadcast_to(np.asarray(init, dtype=complex), (npts, 3)).copy()

    q12, q13, q23 = q.q12, q.q13, q.q23

    def deriv(t, y):
        g1, g2, g3 = (np.broadcast_to(g, (npts,)) for g in rates_at(t))
        d1, d2 = (np.broadcast_to(d, (npts,))
                  for d in detunings_at(t, g1, g2, g3))
        s1, s2, s3 = np.sqrt(g1), np.sqrt(g2), np.sqrt(g3)
        h12 = -0.5 * s1 * s2 * (q12 + 1j)
        h13 = -0.5 * s1 * s3 * (q13 + 1j)
        h23 = -0.5 * s2 * s3 * (q23 + 1j)
        y1, y2, y3 = y[:, 0], y[:, 1], y[:, 2]
        out = np.empty_like(y)
        out[:, 0] = -1j * ((d1 - 0.5j * g1) * y1 + h12 * y2 + h13 * y3)
        out[:, 1] = -1j * (h12 * y1 + (d2 - 0.5j * g2) * y2 + h23 * y3)
        out[:, 2] = -1j * (h13 * y1 + h23 * y2 - 0.5j * g3 * y3)
        return out

    dt = (t1 - t0) / n_steps
    t = t0
    for _ in range(n_steps):
        k1 = deriv(t, y)
        k2 = deriv(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = deriv(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = deriv(t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
    return y

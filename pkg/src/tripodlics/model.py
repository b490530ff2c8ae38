"""Algebraic core of the tripod-continuum system.

Builds the non-Hermitian Hamiltonian H = A + iB for three bound states
coupled through a common continuum, the detunings that make A and B
commute (population trapping), the eigenvalue split of H, the mixing
angles, the adiabatic basis and the rotated (dark/bright) basis with its
transformed Hamiltonian.

All rates are in inverse time units; Fano parameters are dimensionless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Denominator guard: rates below sqrt(EPS_RATE2) are treated as "off"
# when evaluating 0/0 angle limits (Gaussian tails underflow).
EPS_RATE2 = 1e-30


class DegenerateRatesError(ValueError):
    """Raised when an operation needs Gamma1 + Gamma2 > 0 but both vanish."""


@dataclass(frozen=True)
class FanoParams:
    """Dimensionless asymmetry parameters of the three two-photon channels."""

    q12: float
    q13: float
    q23: float

    def __post_init__(self):
        for name in ("q12", "q13", "q23"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")

    def all_equal(self, tol: float = 1e-12) -> bool:
        return abs(self.q12 - self.q13) <= tol and abs(self.q13 - self.q23) <= tol


@dataclass(frozen=True)
class RateSnapshot:
    """The three ionization rates and their time derivatives at one instant."""

    g1: float
    g2: float
    g3: float
    dg1: float = 0.0
    dg2: float = 0.0
    dg3: float = 0.0

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0 or self.g3 < 0:
            raise ValueError(f"ionization rates must be >= 0, got "
                             f"({self.g1}, {self.g2}, {self.g3})")

    def total(self) -> float:
        return self.g1 + self.g2 + self.g3


@dataclass(frozen=True)
class Detunings:
    """Two-photon detunings split into static parts and Stark shifts.

    The effective detunings entering the Hamiltonian are
    D1 = delta1 + S1 - S3 and D2 = delta2 + S2 - S3.
    """

    delta1: float
    delta2: float
    S1: float = 0.0
    S2: float = 0.0
    S3: float = 0.0

    @property
    def D1(self) -> float:
        return self.delta1 + self.S1 - self.S3

    @property
    def D2(self) -> float:
        return self.delta2 + self.S2 - self.S3


@dataclass(frozen=True)
class MixingAngles:
    """Angles parametrizing the adiabatic basis (radians).

    theta and phi lie in [0, pi/2]; chi is reported on the principal
    branch [0, pi/2] per snapshot (2*chi = arccot(x) in (0, pi)) and can
    be unwrapped along a time series with `unwrap_chi_series`.
    `chi_indeterminate` flags snapshots where both the numerator and
    denominator of cot(2*chi) vanish.
    """

    theta: float
    phi: float
    chi: float
    chi_indeterminate: bool = False


@dataclass(frozen=True)
class EigenSplit:
    """Eigenvalues of H under trapping conditions, split into the
    eigenvalues of the real part (lam_a) and imaginary part (lam_b).

    Index 2 (the third entry) is the decaying branch: lam_b = -Gamma/2.
    """

    lam_a: tuple[float, float, float]
    lam_b: tuple[float, float, float]

    @property
    def lam_h(self) -> tuple[complex, complex, complex]:
        return tuple(a + 1j * b for a, b in zip(self.lam_a, self.lam_b))


@dataclass(frozen=True)
class RotatedHamiltonian:
    """Entries of the Hamiltonian in the (Phi1', Phi2', Phi3) basis.

    haa, hbb, hcc, hab are the static (real) entries; the nonadiabatic
    couplings theta_dot*sin(phi), theta_dot*cos(phi) and phi_dot come
    from the analytic rate derivatives; gamma is the total decay rate.
    """

    haa: float
    hbb: float
    hcc: float
    hab: float
    theta_dot: float
    phi_dot: float
    sin_phi: float
    cos_phi: float
    gamma: float

    def matrix(self) -> np.ndarray:
        """Full complex 3x3 matrix, decay and nonadiabatic terms included."""
        tds = self.theta_dot * self.sin_phi
        tdc = self.theta_dot * self.cos_phi
        return np.array([
            [self.haa, self.hab - 1j * tds, -1j * tdc],
            [self.hab + 1j * tds, self.hbb, 1j * self.phi_dot],
            [1j * tdc, -1j * self.phi_dot, self.hcc - 0.5j * self.gamma],
        ])


def trapping_detunings(q: FanoParams, r: RateSnapshot) -> Detunings:
    """Detunings for which the real and imaginary parts of H commute.

    With these values H is normal and has two non-decaying eigenstates.
    """
    d1 = 0.5 * q.q13 * (r.g3 - r.g1) + 0.5 * (q.q12 - q.q23) * r.g2
    d2 = 0.5 * q.q23 * (r.g3 - r.g2) + 0.5 * (q.q12 - q.q13) * r.g1
    return Detunings(delta1=d1, delta2=d2)


def assemble_hamiltonian(q: FanoParams, r: RateSnapshot, d: Detunings) -> np.ndarray:
    """Complex 3x3 Hamiltonian H = A + iB in the bare basis.

    A carries the detunings and the Fano-weighted two-photon couplings;
    B = -(1/2) v v^T with v = (sqrt(G1), sqrt(G2), sqrt(G3)) carries the
    ionization.  Real and imaginary parts are available as H.real, H.imag.
    """
    s1, s2, s3 = math.sqrt(r.g1), math.sqrt(r.g2), math.sqrt(r.g3)
    a12 = -0.5 * s1 * s2 * q.q12
    a13 = -0.5 * s1 * s3 * q.q13
    a23 = -0.5 * s2 * s3 * q.q23
    A = np.array([
        [d.D1, a12, a13],
        [a12, d.D2, a23],
        [a13, a23, 0.0],
    ])
    v = np.array([s1, s2, s3])
    B = -0.5 * np.outer(v, v)
    return A + 1j * B


def commutator_defect(H: np.ndarray) -> float:
    """Frobenius norm of [A, B] for H = A + iB.

    Zero (to round-off) exactly when the detunings satisfy the trapping
    conditions.  Compare against a tolerance scaled by ||A|| * ||B||.
    """
    A = H.real
    B = H.imag
    return float(np.linalg.norm(A @ B - B @ A))


def _eigen_aux(q: FanoParams, r: RateSnapshot) -> tuple[float, float]:
    a = 0.25 * (q.q13 * (r.g3 - r.g1) + q.q23 * (r.g3 - r.g2)
                + q.q12 * (r.g1 + r.g2))
    b = 0.25 * r.g3 * (q.q13 * (q.q13 - q.q12) * r.g1
                       + q.q23 * (q.q23 - q.q12) * r.g2
                       - q.q13 * q.q23 * r.g3)
    return a, b


def eigen_split(q: FanoParams, r: RateSnapshot) -> EigenSplit:
    """Eigenvalues of H at the trapping detunings.

    The real parts are a +/- sqrt(a^2 + b) and -(q13*G1 + q23*G2)/2; the
    imaginary parts are {0, 0, -Gamma/2}, the decaying branch paired with
    the third real eigenvalue.
    """
    a, _ = _eigen_aux(q, r)
    # The discriminant a^2 + b equals ((haa - hbb)/2)^2 + hab^2 with the
    # rotated-basis entries, a sum of squares: evaluating it in that form
    # avoids the cancellation of a^2 against b near degeneracies (and
    # shows the root is always real).
    g1, g2, g3 = r.g1, r.g2, r.g3
    s = g1 + g2
    if s * s > EPS_RATE2:
        haa = (g3 * (q.q23 * g1 + q.q13 * g2) + q.q12 * s * s
               - s * (q.q13 * g1 + q.q23 * g2)) / (2.0 * s)
        hbb = g3 * (q.q13 * g1 + q.q23 * g2) / (2.0 * s)
        hab = ((q.q13 - q.q23) / (2.0 * s)
               * math.sqrt(max(g1 * g2 * g3 * (s + g3), 0.0)))
        root = math.hypot(0.5 * (haa - hbb), hab)
    else:
        # only the third rate survives; the split is |q13 - q23| G3 / 4
        root = 0.25 * abs((q.q13 - q.q23) * g3)
    lam_a = (a + root, a - root, -0.5 * (q.q13 * r.g1 + q.q23 * r.g2))
    lam_b = (0.0, 0.0, -0.5 * r.total())
    return EigenSplit(lam_a=lam_a, lam_b=lam_b)


def mixing_angles(q: FanoParams, r: RateSnapshot) -> MixingAngles:
    """Angles theta, phi, chi of the adiabatic basis at one instant.

    tan(theta) = sqrt(G1/G2), tan(phi) = sqrt(G3/(G1+G2)); chi comes from
    cot(2*chi) written with the (q13 - q23) factor folded in, so the
    q13 = q23 case lands on chi in {0, pi/2} instead of dividing by zero.
    """
    g1, g2, g3 = r.g1, r.g2, r.g3
    s = g1 + g2
    gtot = s + g3

    if g1 * g1 < EPS_RATE2 and g2 * g2 < EPS_RATE2:
        theta = 0.0  # both pump and Stokes off; conventional value
    else:
        theta = math.atan2(math.sqrt(g1), math.sqrt(g2))

    if s * s < EPS_RATE2 and g3 * g3 < EPS_RATE2:
        phi = 0.0
    else:
        phi = math.atan2(math.sqrt(g3), math.sqrt(s))

    # cot(2 chi) = num / den with the (q13 - q23) factor cleared:
    dq = q.q13 - q.q23
    num = (g1 - g2) * (s + 2.0 * g3) * dq + s * s * (q.q13 + q.q23 - 2.0 * q.q12)
    den = 4.0 * math.sqrt(max(g1 * g2 * g3 * gtot, 0.0)) * dq

    indeterminate = False
    scale = max(gtot * gtot, 1e-300)
    if den == 0.0 or abs(den) < EPS_RATE2 * scale:
        if abs(num) < EPS_RATE2 * scale:
            # 0/0: chi undefined at this instant (e.g. Gamma3 = 0 with
            # G1 = G2 and q13 + q23 = 2*q12); pick the branch midpoint.
            chi = 0.25 * math.pi
            indeterminate = True
        else:
            chi = 0.0 if num > 0 else 0.5 * math.pi
    else:
        # 2*chi = arccot(num/den) in (0, pi)
        chi = 0.5 * (0.5 * math.pi - math.atan(num / den))
    return MixingAngles(theta=theta, phi=phi, chi=chi,
                        chi_indeterminate=indeterminate)


def unwrap_chi_series(chi: np.ndarray) -> np.ndarray:
    """Continuity-track a chi(t) series across branch jumps.

    Each snapshot value lies on the principal branch [0, pi/2]; here
    multiples of pi/2 are added/removed so consecutive samples differ by
    the smallest amount.
    """
    chi = np.asarray(chi, dtype=float)
    out = chi.copy()
    half = 0.5 * math.pi
    for i in range(1, len(out)):
        k = round((out[i - 1] - out[i]) / half)
        out[i] += k * half
    return out


def angle_rates(r: RateSnapshot) -> tuple[float, float]:
    """Time derivatives (theta_dot, phi_dot) from the analytic rate
    derivatives carried by the snapshot."""
    g1, g2, g3 = r.g1, r.g2, r.g3
    s = g1 + g2
    gtot = s + g3
    prod12 = g1 * g2
    if prod12 < EPS_RATE2 or s * s < EPS_RATE2:
        theta_dot = 0.0
    else:
        theta_dot = (r.dg1 * g2 - g1 * r.dg2) / (2.0 * s * math.sqrt(prod12))
    prod3 = g3 * s
    if prod3 < EPS_RATE2 or gtot * gtot < EPS_RATE2:
        phi_dot = 0.0
    else:
        ds = r.dg1 + r.dg2
        phi_dot = (r.dg3 * s - g3 * ds) / (2.0 * gtot * math.sqrt(prod3))
    return theta_dot, phi_dot


def adiabatic_states(m: MixingAngles) -> np.ndarray:
    """Orthonormal adiabatic basis vectors as columns [Phi1, Phi2, Phi3].

    Phi1 and Phi2 do not decay; Phi3 decays at Gamma/2.
    """
    ct, st = math.cos(m.theta), math.sin(m.theta)
    cp, sp = math.cos(m.phi), math.sin(m.phi)
    cx, sx = math.cos(m.chi), math.sin(m.chi)
    phi1 = np.array([ct * cx - st * sp * sx,
                     -st * cx - ct * sp * sx,
                     cp * sx])
    phi2 = np.array([ct * sx + st * sp * cx,
                     -st * sx + ct * sp * cx,
                     -cp * cx])
    phi3 = np.array([st * cp, ct * cp, sp])
    return np.column_stack([phi1, phi2, phi3])


def rotation_matrix(theta: float, phi: float) -> np.ndarray:
    """Orthogonal matrix whose columns are Phi1', Phi2', Phi3.

    Maps amplitudes in the rotated basis to the bare basis: C = R C'.
    """
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    return np.array([
        [ct, st * sp, st * cp],
        [-st, ct * sp, ct * cp],
        [0.0, -cp, sp],
    ])


def rotated_hamiltonian(q: FanoParams, r: RateSnapshot) -> RotatedHamiltonian:
    """Hamiltonian in the (Phi1', Phi2', Phi3) basis, H' = R^-1 H R - i R^-1 dR/dt.

    Requires Gamma1 + Gamma2 > 0 (the static entries have that denominator).
    """
    g1, g2, g3 = r.g1, r.g2, r.g3
    s = g1 + g2
    if s * s < EPS_RATE2:
        raise DegenerateRatesError(
            "rotated Hamiltonian needs Gamma1 + Gamma2 > 0")
    gtot = s + g3
    haa = (g3 * (q.q23 * g1 + q.q13 * g2) + q.q12 * s * s
           - s * (q.q13 * g1 + q.q23 * g2)) / (2.0 * s)
    hbb = g3 * (q.q13 * g1 + q.q23 * g2) / (2.0 * s)
    hcc = -0.5 * (q.q13 * g1 + q.q23 * g2)
    hab = (q.q13 - q.q23) / (2.0 * s) * math.sqrt(max(g1 * g2 * g3 * gtot, 0.0))
    theta_dot, phi_dot = angle_rates(r)
    m = mixing_angles(q, r)
    return RotatedHamiltonian(
        haa=haa, hbb=hbb, hcc=hcc, hab=hab,
        theta_dot=theta_dot, phi_dot=phi_dot,
        sin_phi=math.sin(m.phi), cos_phi=math.cos(m.phi),
        gamma=gtot,
    )

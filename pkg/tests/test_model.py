import math

import numpy as np
import pytest

from tripodlics.model import (DegenerateRatesError, Detunings, FanoParams,
                              MixingAngles, RateSnapshot, adiabatic_states,
                              angle_rates, assemble_hamiltonian,
                              commutator_defect, eigen_split, mixing_angles,
                              rotated_hamiltonian, rotation_matrix,
                              trapping_detunings, unwrap_chi_series)

Q_FIG3 = FanoParams(q12=2.0, q13=5.0, q23=5.5)
R_FIG3 = RateSnapshot(g1=1.0, g2=1.0, g3=3.0)


def test_fano_params_reject_non_finite():
    with pytest.raises(ValueError):
        FanoParams(q12=math.inf, q13=0.0, q23=0.0)
    with pytest.raises(ValueError):
        FanoParams(q12=0.0, q13=math.nan, q23=0.0)


def test_rate_snapshot_rejects_negative_rates():
    with pytest.raises(ValueError):
        RateSnapshot(g1=-1.0, g2=0.0, g3=0.0)


def test_detunings_combine_stark_shifts():
    d = Detunings(delta1=1.0, delta2=2.0, S1=0.5, S2=0.25, S3=0.1)
    assert d.D1 == pytest.approx(1.0 + 0.5 - 0.1)
    assert d.D2 == pytest.approx(2.0 + 0.25 - 0.1)


def test_trapping_detunings_symmetric_case_vanish():
    q = FanoParams(q12=3.0, q13=3.0, q23=3.0)
    r = RateSnapshot(g1=2.0, g2=2.0, g3=2.0)
    d = trapping_detunings(q, r)
    assert d.delta1 == pytest.approx(0.0, abs=1e-15)
    assert d.delta2 == pytest.approx(0.0, abs=1e-15)


def test_trapping_detunings_two_state_limit():
    # with the third rate off, only the difference is constrained:
    # delta1 - delta2 = q12 (G2 - G1) / 2
    q = FanoParams(q12=4.0, q13=1.0, q23=7.0)
    r = RateSnapshot(g1=3.0, g2=5.0, g3=0.0)
    d = trapping_detunings(q, r)
    assert d.delta1 - d.delta2 == pytest.approx(0.5 * q.q12 * (r.g2 - r.g1))


def test_trapping_detunings_reference_point():
    d = trapping_detunings(Q_FIG3, R_FIG3)
    assert d.delta1 == pytest.approx(3.25)
    assert d.delta2 == pytest.approx(4.0)


def test_hamiltonian_structure():
    d = trapping_detunings(Q_FIG3, R_FIG3)
    H = assemble_hamiltonian(Q_FIG3, R_FIG3, d)
    A, B = H.real, H.imag
    assert np.allclose(A, A.T)
    assert np.allclose(B, B.T)
    # B is rank one with trace -Gamma/2 ... eigenvalues {0, 0, -Gamma/2}
    w = np.sort(np.linalg.eigvalsh(B))
    assert w[0] == pytest.approx(-0.5 * R_FIG3.total())
    assert abs(w[1]) < 1e-14 and abs(w[2]) < 1e-14


def test_commutator_defect_vanishes_only_at_trapping():
    d = trapping_detunings(Q_FIG3, R_FIG3)
    H = assemble_hamiltonian(Q_FIG3, R_FIG3, d)
    scale = np.linalg.norm(H.real) * np.linalg.norm(H.imag)
    assert commutator_defect(H) < 1e-13 * scale
    d_off = Detunings(delta1=d.delta1 + 1.0, delta2=d.delta2)
    H_off = assemble_hamiltonian(Q_FIG3, R_FIG3, d_off)
    assert commutator_defect(H_off) > 1e-3 * scale


def test_eigen_split_matches_dense_solver():
    split = eigen_split(Q_FIG3, R_FIG3)
    d = trapping_detunings(Q_FIG3, R_FIG3)
    H = assemble_hamiltonian(Q_FIG3, R_FIG3, d)
    dense = np.sort(np.linalg.eigvalsh(H.real))
    assert np.allclose(np.sort(split.lam_a), dense, atol=1e-12)
    assert split.lam_b == (0.0, 0.0, -0.5 * R_FIG3.total())
    lam_h = split.lam_h
    assert lam_h[2] == complex(split.lam_a[2], -0.5 * R_FIG3.total())


def test_eigen_split_third_eigenvalue_closed_form():
    split = eigen_split(Q_FIG3, R_FIG3)
    assert split.lam_a[2] == pytest.approx(
        -0.5 * (Q_FIG3.q13 * R_FIG3.g1 + Q_FIG3.q23 * R_FIG3.g2))


def test_mixing_angle_tangents():
    m = mixing_angles(Q_FIG3, R_FIG3)
    assert math.tan(m.theta) == pytest.approx(math.sqrt(R_FIG3.g1 / R_FIG3.g2))
    assert math.tan(m.phi) == pytest.approx(
        math.sqrt(R_FIG3.g3 / (R_FIG3.g1 + R_FIG3.g2)))


def test_chi_satisfies_rotated_entry_identity():
    # cot(2 chi) = (hbb - haa) / (2 hab)
    m = mixing_angles(Q_FIG3, R_FIG3)
    h = rotated_hamiltonian(Q_FIG3, R_FIG3)
    lhs = math.cos(2.0 * m.chi) / math.sin(2.0 * m.chi)
    assert lhs == pytest.approx((h.hbb - h.haa) / (2.0 * h.hab))


def test_chi_branch_when_coupling_vanishes():
    # q13 = q23 makes hab vanish identically; chi falls on a branch end
    q = FanoParams(q12=1.0, q13=4.0, q23=4.0)
    r = RateSnapshot(g1=1.0, g2=2.0, g3=3.0)
    m = mixing_angles(q, r)
    assert not m.chi_indeterminate
    assert m.chi in (0.0, 0.5 * math.pi)
    # num > 0 for q13 + q23 > 2 q12
    assert m.chi == 0.0


def test_chi_indeterminate_flag():
    q = FanoParams(q12=2.0, q13=2.0, q23=2.0)
    r = RateSnapshot(g1=1.0, g2=1.0, g3=5.0)
    m = mixing_angles(q, r)
    assert m.chi_indeterminate
    assert m.chi == pytest.approx(0.25 * math.pi)


def test_angles_with_all_rates_off():
    m = mixing_angles(Q_FIG3, RateSnapshot(g1=0.0, g2=0.0, g3=0.0))
    assert m.theta == 0.0 and m.phi == 0.0


def test_unwrap_chi_series_removes_branch_jumps():
    half = 0.5 * math.pi
    raw = np.array([0.4, 0.45, 0.48, 0.48 - half + 0.01, 0.48 - half + 0.02])
    raw[3:] += half  # wrapped back onto the principal branch
    out = unwrap_chi_series(raw % half)
    assert np.all(np.abs(np.diff(out)) < 0.25 * half)


def test_angle_rates_match_finite_differences():
    def snap(t):
        g1 = 1.0 * math.exp(-(t - 0.5) ** 2)
        g2 = 1.3 * math.exp(-(t + 0.5) ** 2)
        g3 = 0.7
        return RateSnapshot(g1=g1, g2=g2, g3=g3,
                            dg1=-2.0 * (t - 0.5) * g1,
                            dg2=-2.0 * (t + 0.5) * g2, dg3=0.0)

    t, h = 0.3, 1e-6
    td, pd = angle_rates(snap(t))
    mp = mixing_angles(Q_FIG3, snap(t + h))
    mm = mixing_angles(Q_FIG3, snap(t - h))
    assert td == pytest.approx((mp.theta - mm.theta) / (2 * h), rel=1e-5)
    assert pd == pytest.approx((mp.phi - mm.phi) / (2 * h), rel=1e-5)


def test_angle_rates_zero_when_rates_off():
    assert angle_rates(RateSnapshot(0.0, 0.0, 0.0)) == (0.0, 0.0)


def test_adiabatic_states_orthonormal_and_diagonalize():
    m = mixing_angles(Q_FIG3, R_FIG3)
    V = adiabatic_states(m)
    assert np.allclose(V.T @ V, np.eye(3), atol=1e-14)
    d = trapping_detunings(Q_FIG3, R_FIG3)
    H = assemble_hamiltonian(Q_FIG3, R_FIG3, d)
    D = V.T @ H @ V
    off = D - np.diag(np.diag(D))
    assert np.max(np.abs(off)) < 1e-12
    # the third column is the decaying branch
    assert D[2, 2].imag == pytest.approx(-0.5 * R_FIG3.total())
    assert abs(D[0, 0].imag) < 1e-13 and abs(D[1, 1].imag) < 1e-13


def test_rotation_matrix_is_orthogonal():
    R = rotation_matrix(0.7, 1.1)
    assert np.allclose(R.T @ R, np.eye(3), atol=1e-14)
    assert np.linalg.det(R) == pytest.approx(1.0)


def test_rotated_hamiltonian_matches_conjugation():
    m = mixing_angles(Q_FIG3, R_FIG3)
    R = rotation_matrix(m.theta, m.phi)
    d = trapping_detunings(Q_FIG3, R_FIG3)
    H = assemble_hamiltonian(Q_FIG3, R_FIG3, d)
    Hp = R.T @ H @ R
    h = rotated_hamiltonian(Q_FIG3, R_FIG3)
    assert Hp[0, 0].real == pytest.approx(h.haa)
    assert Hp[1, 1].real == pytest.approx(h.hbb)
    assert Hp[2, 2].real == pytest.approx(h.hcc)
    assert Hp[0, 1].real == pytest.approx(h.hab)
    # only the third rotated state decays
    assert Hp[2, 2].imag == pytest.approx(-0.5 * R_FIG3.total())
    assert abs(Hp[0, 0].imag) < 1e-13 and abs(Hp[1, 1].imag) < 1e-13


def test_rotated_hamiltonian_full_matrix_hermitian_parts():
    h = rotated_hamiltonian(Q_FIG3, RateSnapshot(1.0, 2.0, 3.0,
                                                 dg1=0.4, dg2=-0.2, dg3=0.0))
    M = h.matrix()
    # static part symmetric, nonadiabatic part antisymmetric imaginary
    assert M[0, 1].real == M[1, 0].real
    assert M[0, 1].imag == -M[1, 0].imag


def test_rotated_hamiltonian_needs_pump_or_stokes():
    with pytest.raises(DegenerateRatesError):
        rotated_hamiltonian(Q_FIG3, RateSnapshot(g1=0.0, g2=0.0, g3=1.0))


def test_eigen_split_stable_near_degeneracy():
    # nearly coincident non-decaying eigenvalues: the sum-of-squares
    # discriminant keeps full precision where a^2 + b would cancel
    q = FanoParams(q12=1.9051250032561153, q13=1.9051250032561153,
                   q23=1.9051250032561153)
    r = RateSnapshot(g1=0.0, g2=1.0, g3=5.0)
    split = eigen_split(q, r)
    d = trapping_detunings(q, r)
    dense = np.sort(np.linalg.eigvalsh(assemble_hamiltonian(q, r, d).real))
    assert np.max(np.abs(np.sort(split.lam_a) - dense)) < 1e-12


def test_mixing_angles_returns_type():
    assert isinstance(mixing_angles(Q_FIG3, R_FIG3), MixingAngles)

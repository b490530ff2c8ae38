import math

import numpy as np
from hypothesis import given, strategies as st

from tripodlics.model import (Detunings, FanoParams, RateSnapshot,
                              adiabatic_states, assemble_hamiltonian,
                              commutator_defect, eigen_split, mixing_angles,
                              trapping_detunings)
from tripodlics.propagate import populations
from tripodlics.pulses import GaussianPulse, ConstantPulse, PulseTriple, pulse_area

finite = st.floats(min_value=-50.0, max_value=50.0,
                   allow_nan=False, allow_infinity=False)
rate = st.floats(min_value=0.0, max_value=100.0,
                 allow_nan=False, allow_infinity=False)
positive_rate = st.floats(min_value=1e-3, max_value=100.0,
                          allow_nan=False, allow_infinity=False)


def fano():
    return st.builds(FanoParams, q12=finite, q13=finite, q23=finite)


def rates(strategy=rate):
    return st.builds(RateSnapshot, g1=strategy, g2=strategy, g3=strategy)


@given(fano(), rates())
def test_imaginary_part_eigenvalues(q, r):
    H = assemble_hamiltonian(q, r, trapping_detunings(q, r))
    w = np.sort(np.linalg.eigvalsh(H.imag))
    scale = max(r.total(), 1.0)
    assert abs(w[0] + 0.5 * r.total()) <= 1e-12 * scale
    assert abs(w[1]) <= 1e-12 * scale and abs(w[2]) <= 1e-12 * scale


@given(fano(), rates(), finite)
def test_commutator_vanishes_iff_trapped(q, r, offset):
    trap = trapping_detunings(q, r)
    H = assemble_hamiltonian(q, r, trap)
    scale = max(np.linalg.norm(H.real) * np.linalg.norm(H.imag), 1.0)
    assert commutator_defect(H) <= 1e-12 * scale
    # Detuning a state with no rate (or with every partner rate off)
    # cannot break commutation, so the converse needs an active state
    # with at least one active partner.
    bump = (1.0 + abs(offset)) * max(r.total(), 1.0)
    if r.g1 > 1e-3 and r.g2 + r.g3 > 1e-3:
        off = Detunings(delta1=trap.delta1 + bump, delta2=trap.delta2)
    elif r.g2 > 1e-3 and r.g1 + r.g3 > 1e-3:
        off = Detunings(delta1=trap.delta1, delta2=trap.delta2 + bump)
    else:
        return
    H_off = assemble_hamiltonian(q, r, off)
    assert commutator_defect(H_off) > 1e-12 * scale


@given(fano(), rates())
def test_adiabatic_states_orthonormal(q, r):
    V = adiabatic_states(mixing_angles(q, r))
    assert np.max(np.abs(V.T @ V - np.eye(3))) <= 1e-12


@given(fano(), rates())
def test_eigen_split_against_dense_solver(q, r):
    split = eigen_split(q, r)
    H = assemble_hamiltonian(q, r, trapping_detunings(q, r))
    dense = np.sort(np.linalg.eigvalsh(H.real))
    scale = max(np.max(np.abs(dense)), 1.0)
    assert np.max(np.abs(np.sort(split.lam_a) - dense)) <= 1e-9 * scale


@given(st.complex_numbers(max_magnitude=1.0, allow_nan=False,
                          allow_infinity=False),
       st.floats(min_value=-math.pi, max_value=math.pi))
def test_populations_phase_invariant(c, phase):
    vec = np.array([c, 0.3 + 0.1j, 0.2 - 0.4j])
    rotated = vec * complex(math.cos(phase), math.sin(phase))
    assert np.allclose(populations(vec), populations(rotated), atol=1e-12)


@given(positive_rate, finite, st.floats(min_value=0.1, max_value=5.0),
       st.floats(min_value=-3.0, max_value=3.0),
       st.floats(min_value=0.1, max_value=4.0))
def test_area_additive_over_adjacent_intervals(g, center, width, cut, span):
    p = PulseTriple(GaussianPulse(g, center, width),
                    GaussianPulse(g, -center, width),
                    ConstantPulse(0.5))
    lo, hi = cut - span, cut + span
    whole = pulse_area(p, lo, hi)
    parts = pulse_area(p, lo, cut) + pulse_area(p, cut, hi)
    assert math.isclose(whole, parts, rel_tol=1e-12, abs_tol=1e-12)

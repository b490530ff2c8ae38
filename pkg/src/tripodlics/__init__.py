"""Dynamics of three bound states coupled through a common ionization
continuum: Hamiltonian construction, population trapping, amplitude
propagation, closed-form limits and parameter scans."""

from .model import (DegenerateRatesError, Detunings, EigenSplit, FanoParams,
                    MixingAngles, RateSnapshot, RotatedHamiltonian,
                    adiabatic_states,
                    angle_rates, assemble_hamiltonian, commutator_defect,
                    eigen_split, mixing_angles, rotated_hamiltonian,
                    rotation_matrix, trapping_detunings, unwrap_chi_series)
from .pulses import (ConstantPulse, GaussianPulse, InfiniteAreaError,
                     PulseShape, PulseTriple, SharedEnvelope, default_window,
                     evaluate, pulse_area, total_rate)
from .propagate import (AutoTrap, DetuningPolicy, PropagationError, Static,
                        Trajectory, final_amplitudes_batch, policy_detunings,
                        populations, propagate)
from .analytic import (AdiabaticityWindow, CoincidentSpec, EffectiveTwoState,
                       LandauZenerDiagnostics, PulseOrderingWarning,
                       TransferOutcome, adiabatic_transfer_populations,
                       adiabaticity_window, coincident_populations,
                       complete_ionization, effective_two_state,
                       landau_zener_conditions, max_ionization_coincident,
                       propagate_effective, transfer_asymptotics)
from .config import (AreaScan, ConfigError, DetuningGrid, Experiment,
                     GridSettings, SystemConfig, WidthScan, load_experiment)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

"""parityq: a flux-tunable transmon capacitively coupled to a Cooper-pair
parity-protected qubit -- spectra, effective Hamiltonians, and
parity-preserving two-qubit gates."""

__version__ = "0.1.0"

from .circuit import ChargeBasis, CircuitParams, Operator, TWO_PI_GHZ
from .coupled import CouplingElements, coupling_matrix_elements, locate_anticrossing
from .gates import GateReport, PulseSchedule, cz_gate, compose_gate, single_qubit_gate
from .spectra import design_condition, ppq_spectrum, transmon_spectrum
from .sw import (
    EffectiveHamiltonian,
    analytic_effective_hamiltonian,
    effective_hamiltonian_numeric,
    numerical_sw,
    pauli_coefficients,
)

__all__ = [
    "ChargeBasis",
    "CircuitParams",
    "CouplingElements",
    "EffectiveHamiltonian",
    "GateReport",
    "Operator",
    "PulseSchedule",
    "TWO_PI_GHZ",
    "analytic_effective_hamiltonian",
    "compose_gate",
    "coupling_matrix_elements",
    "cz_gate",
    "design_condition",
    "effective_hamiltonian_numeric",
    "locate_anticrossing",
    "numerical_sw",
    "pauli_coefficients",
    "ppq_spectrum",
    "single_qubit_gate",
    "transmon_spectrum",
]

"""W-state generation in a network of three-level phase qubits on a resonator bus."""

from .analysis import TargetState, fidelity, leakage, w_target
from .device_model import DeviceConfig, assemble_full_hamiltonian, single_excitation_indices
from .dynamics import ProtocolReport, population_trace, run_protocol
from .effective_model import EffectiveModel, Variant, entangling_time
from .errors import (
    ConfigError,
    NonHermitianError,
    ResourceLimitError,
    SeriesConvergenceError,
    ShapeError,
    UnsupportedVariantError,
    WStateError,
)
from .numerics import evolve_eig, hermitian_eig, matexp_apply_oracle

__version__ = "0.1.0"

"""W-state targets and the fidelity/leakage metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .device_model import full_dim, single_excitation_indices
from .effective_model import Variant, uniform_target
from .errors import ShapeError

__all__ = [
    "TargetState",
    "w_target",
    "fidelity",
    "leakage",
    "single_excitation_amplitudes",
    "residual_phase",
]


@dataclass(frozen=True)
class TargetState:
    """Ideal W state embedded in the full product basis."""

    vector: np.ndarray
    variant: Variant
    n_qubits: int


def w_target(n_qubits: int, variant: Variant | str = Variant.WN) -> TargetState:
    """Uniform single-excitation superposition for ``variant``.

    ``WN`` spreads ``1/sqrt(N)`` over the qubit-excited kets with the bus in
    its ground state; ``WN1`` also includes the bus-excited ket and uses
    ``1/sqrt(N+1)``.
    """
    variant = Variant.parse(variant)
    block = uniform_target(n_qubits, include_hub=variant is Variant.WN1)
    vec = np.zeros(full_dim(n_qubits), dtype=complex)
    vec[single_excitation_indices(n_qubits)] = block
    return TargetState(vector=vec, variant=variant, n_qubits=n_qubits)


def fidelity(psi, target: TargetState | np.ndarray) -> float:
    """Squared overlap ``|<target|psi>|**2``."""
    ref = target.vector if isinstance(target, TargetState) else np.asarray(target)
    psi = np.asarray(psi)
    if psi.shape != ref.shape:
        raise ShapeError(f"state shape {psi.shape} does not match target shape {ref.shape}")
    f = abs(np.vdot(ref, psi)) ** 2
    return float(min(max(f, 0.0), 1.0))


def single_excitation_amplitudes(psi, n_qubits: int) -> np.ndarray:
    """Amplitudes on the single-excitation kets: bus first, then qubit N..1."""
    psi = np.asarray(psi)
    if psi.shape != (full_dim(n_qubits),):
        raise ShapeError(f"expected a full-basis state for {n_qubits} qubits, got {psi.shape}")
    return psi[single_excitation_indices(n_qubits)]


def leakage(psi, n_qubits: int) -> float:
    """Population outside the single-excitation subspace, clipped to [0, 1]."""
    inside = float(np.sum(np.abs(single_excitation_amplitudes(psi, n_qubits)) ** 2))
    return min(max(1.0 - inside, 0.0), 1.0)


def residual_phase(amplitudes, variant: Variant | str, n_qubits: int) -> float:
    """Phase (rad) of the overlap between the target block and ``amplitudes``.

    Zero when the phase-corrected simulation points exactly along the real
    positive target.
    """
    variant = Variant.parse(variant)
    block = uniform_target(n_qubits, include_hub=variant is Variant.WN1)
    overlap = np.vdot(block, amplitudes)
    return float(math.atan2(overlap.imag, overlap.real))

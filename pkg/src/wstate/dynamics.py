"""Three-pulse W-state protocol on the full qutrit network.

1. An ideal local flip puts one qubit into ``|1>``.
2. That qubit's coupling alone is switched on for half a vacuum-Rabi
   oscillation, moving the excitation onto the bus.
3. All couplings are switched on together; the bus excitation spreads into
   the W state.

Pulses are square: a step evolves under the time-independent network
Hamiltonian with the step's couplings and nothing else.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .analysis import (
    fidelity,
    leakage,
    residual_phase,
    single_excitation_amplitudes,
    w_target,
)
from .device_model import DeviceConfig, assemble_full_hamiltonian, full_dim, single_excitation_indices
from .effective_model import EffectiveModel, Variant, entangling_time, global_phase
from .errors import ShapeError
from .numerics import DEFAULT_DIM_CAP, evolve_eig, evolve_series, hermitian_eig

__all__ = [
    "START_KINDS",
    "PulseStep",
    "ProtocolReport",
    "TraceResult",
    "prepare_initial",
    "ideal_flip",
    "transfer_pulse",
    "entangling_pulse",
    "default_transfer_duration",
    "ideal_transfer_phase",
    "default_entangle_duration",
    "build_schedule",
    "apply_step",
    "run_protocol",
    "population_trace",
]

START_KINDS = ("bus_excited", "full_protocol")


def prepare_initial(kind: str, n_qubits: int, qubit: int | None = None) -> np.ndarray:
    """Basis state ``ground``, ``bus_excited`` or ``qubit_excited`` (needs ``qubit``)."""
    dim = full_dim(n_qubits)
    psi = np.zeros(dim, dtype=complex)
    if kind == "ground":
        psi[0] = 1.0
    elif kind == "bus_excited":
        psi[1] = 1.0
    elif kind == "qubit_excited":
        if qubit is None or not 1 <= qubit <= n_qubits:
            raise ValueError(f"qubit index must be in 1..{n_qubits}, got {qubit}")
        psi[3 ** (n_qubits + 1 - qubit)] = 1.0
    else:
        raise ValueError(f"unknown initial state kind {kind!r}")
    return psi


def _check_full_state(psi, n_qubits: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (full_dim(n_qubits),):
        raise ShapeError(f"expected a full-basis state for {n_qubits} qubits, got {psi.shape}")
    return psi


def ideal_flip(psi, n_qubits: int, qubit: int) -> np.ndarray:
    """Swap levels 0 and 1 of ``qubit``; level-2 amplitudes stay put."""
    if not 1 <= qubit <= n_qubits:
        raise ValueError(f"qubit index must be in 1..{n_qubits}, got {qubit}")
    psi = _check_full_state(psi, n_qubits)
    t = psi.reshape((3,) * (n_qubits + 1)).copy()
    axis = qubit - 1
    zero = np.take(t, 0, axis=axis).copy()
    one = np.take(t, 1, axis=axis).copy()
    idx0 = [slice(None)] * t.ndim
    idx1 = [slice(None)] * t.ndim
    idx0[axis] = 0
    idx1[axis] = 1
    t[tuple(idx0)] = one
    t[tuple(idx1)] = zero
    return t.reshape(-1)


def default_transfer_duration(cfg: DeviceConfig, qubit: int) -> float:
    """Half vacuum-Rabi period ``pi / (2 g)`` (ns) of ``qubit`` with the bus."""
    g = cfg.couplings[qubit - 1]
    if g <= 0:
        raise ValueError(f"qubit {qubit} has no coupling to the bus")
    return math.pi / (2.0 * 2.0 * math.pi * g)


def _collective_coupling(cfg: DeviceConfig) -> float:
    # sqrt(mean g^2): reduces to g for equal couplings
    return math.sqrt(sum(g * g for g in cfg.couplings) / cfg.n_qubits)


def default_entangle_duration(cfg: DeviceConfig, variant: Variant | str) -> float:
    g = _collective_coupling(cfg)
    if g <= 0:
        raise ValueError("entangle duration must be given explicitly when all couplings vanish")
    model = EffectiveModel.from_ghz(cfg.n_qubits, g, variant)
    return entangling_time(model)


def _evolve(psi, cfg: DeviceConfig, duration: float, cap: int | None) -> np.ndarray:
    psi = _check_full_state(psi, cfg.n_qubits)
    if duration == 0:
        return psi.copy()
    h = assemble_full_hamiltonian(cfg, cap=cap)
    return evolve_eig(h, psi, duration, cap=cap)


def _transfer_config(cfg: DeviceConfig, qubit: int) -> DeviceConfig:
    # put the transferring qubit on resonance with the bus for the transfer only
    active = cfg.with_couplings([qubit])
    bus = cfg.epsilon_r + cfg.E_r - cfg.E10
    if cfg.qubit_epsilon(qubit) == bus:
        return active
    if qubit == 1:
        raise ValueError(
            "qubit 1 cannot be tuned onto the detuned bus; excite another qubit for the transfer"
        )
    return active.with_qubit_epsilon(qubit, bus)


def ideal_transfer_phase(cfg: DeviceConfig, qubit: int, duration: float) -> complex:
    """Phase the bus amplitude picks up in an ideal two-level transfer.

    On resonance at energy ``w`` the qubit-to-bus amplitude is
    ``-i sin(g t) exp(-i w t)``; this returns its unit phase (1 if it vanishes).
    """
    g = 2.0 * math.pi * cfg.couplings[qubit - 1]
    w = 2.0 * math.pi * (cfg.epsilon_r + cfg.E_r - cfg.E10)
    amp = -1j * math.sin(g * duration) * complex(math.cos(w * duration), -math.sin(w * duration))
    return amp / abs(amp) if abs(amp) > 0 else 1.0


def transfer_pulse(
    psi,
    cfg: DeviceConfig,
    qubit: int,
    duration: float | None = None,
    cap: int | None = DEFAULT_DIM_CAP,
) -> np.ndarray:
    """Evolve with only ``qubit`` coupled to the bus, tuned onto resonance with it.

    ``duration`` defaults to :func:`default_transfer_duration`.
    """
    cfg.qubit_epsilon(qubit)
    if duration is None:
        duration = default_transfer_duration(cfg, qubit)
    return _evolve(psi, _transfer_config(cfg, qubit), duration, cap)


def entangling_pulse(
    psi, cfg: DeviceConfig, duration: float, cap: int | None = DEFAULT_DIM_CAP
) -> np.ndarray:
    """Evolve for ``duration`` ns with every coupling of ``cfg`` switched on."""
    return _evolve(psi, cfg, duration, cap)


@dataclass(frozen=True)
class PulseStep:
    """One square pulse.

    Attributes:
        kind: ``"flip"``, ``"transfer"`` or ``"entangle"``.
        config: Device parameters with the step's couplings switched on.
        qubit: Target qubit for flip and transfer steps.
        duration: Length in ns; flips are instantaneous (0).
    """

    kind: str
    config: DeviceConfig
    qubit: int | None = None
    duration: float = 0.0

    def __post_init__(self):
        active = [q for q, g in enumerate(self.config.couplings, start=1) if g > 0]
        if self.kind == "transfer" and active != [self.qubit]:
            raise ValueError(f"transfer step must couple only qubit {self.qubit}, got {active}")
        if self.kind not in ("flip", "transfer", "entangle"):
            raise ValueError(f"unknown pulse kind {self.kind!r}")


def build_schedule(
    cfg: DeviceConfig,
    variant: Variant | str = Variant.WN,
    start: str = "bus_excited",
    qubit: int | None = None,
    transfer_duration: float | None = None,
    entangle_duration: float | None = None,
) -> list[PulseStep]:
    """Pulse list for one run.

    ``start="full_protocol"`` begins from the ground state with a flip of
    ``qubit`` (default: qubit N) and a transfer; ``"bus_excited"`` runs only
    the entangling pulse.
    """
    if start not in START_KINDS:
        raise ValueError(f"start must be one of {START_KINDS}, got {start!r}")
    if entangle_duration is None:
        entangle_duration = default_entangle_duration(cfg, variant)
    steps = []
    if start == "full_protocol":
        qubit = cfg.n_qubits if qubit is None else qubit
        if transfer_duration is None:
            transfer_duration = default_transfer_duration(cfg, qubit)
        steps.append(PulseStep("flip", cfg.with_couplings([]), qubit))
        steps.append(PulseStep("transfer", _transfer_config(cfg, qubit), qubit, transfer_duration))
    steps.append(PulseStep("entangle", cfg, None, entangle_duration))
    return steps


def apply_step(psi, step: PulseStep, cap: int | None = DEFAULT_DIM_CAP) -> np.ndarray:
    if step.kind == "flip":
        return ideal_flip(psi, step.config.n_qubits, step.qubit)
    return _evolve(psi, step.config, step.duration, cap)


@dataclass
class ProtocolReport:
    """Outcome of one protocol run.

    ``amplitudes`` are the single-excitation amplitudes (bus, qubit N, ...,
    qubit 1) multiplied by the variant's global phase, so an ideal run gives
    the real positive target. ``raw_amplitudes`` are the same entries
    without that factor.
    """

    variant: Variant
    n_qubits: int
    start: str
    final_state: np.ndarray
    raw_amplitudes: np.ndarray
    amplitudes: np.ndarray
    fidelity: float
    leakage: float
    residual_phase: float
    durations: dict[str, float]
    wallclock_s: float = field(default=0.0, compare=False)


def run_protocol(
    cfg: DeviceConfig,
    variant: Variant | str = Variant.WN,
    start: str = "bus_excited",
    qubit: int | None = None,
    transfer_duration: float | None = None,
    entangle_duration: float | None = None,
    cap: int | None = DEFAULT_DIM_CAP,
) -> ProtocolReport:
    """Run the pulse schedule and score the final state against the W target."""
    t0 = time.perf_counter()
    variant = Variant.parse(variant)
    steps = build_schedule(cfg, variant, start, qubit, transfer_duration, entangle_duration)
    n = cfg.n_qubits
    psi = prepare_initial("ground" if start == "full_protocol" else "bus_excited", n)
    durations = {}
    for step in steps:
        psi = apply_step(psi, step, cap=cap)
        durations[step.kind] = step.duration

    raw = single_excitation_amplitudes(psi, n)
    g = _collective_coupling(cfg)
    phase = global_phase(EffectiveModel.from_ghz(n, g, variant)) if g > 0 else 1.0
    transfer = next((s for s in steps if s.kind == "transfer"), None)
    if transfer is not None:
        phase /= ideal_transfer_phase(cfg, transfer.qubit, transfer.duration)
    amps = phase * raw
    return ProtocolReport(
        variant=variant,
        n_qubits=n,
        start=start,
        final_state=psi,
        raw_amplitudes=raw,
        amplitudes=amps,
        fidelity=fidelity(psi, w_target(n, variant)),
        leakage=leakage(psi, n),
        residual_phase=residual_phase(amps, variant, n),
        durations=durations,
        wallclock_s=time.perf_counter() - t0,
    )


@dataclass(frozen=True)
class TraceResult:
    """Populations of the single-excitation kets (bus, qubit N..1) over time.

    ``leakage`` is the population summed over every other basis state, so
    ``populations.sum(axis=1) + leakage`` checks unitarity.
    """

    times: np.ndarray
    populations: np.ndarray
    leakage: np.ndarray


def population_trace(
    cfg: DeviceConfig, psi0, t_grid, cap: int | None = DEFAULT_DIM_CAP
) -> TraceResult:
    """Evolve ``psi0`` under ``cfg`` and record populations at each time in ``t_grid``."""
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    if np.any(np.diff(times) < 0):
        raise ValueError("t_grid must be monotonically non-decreasing")
    n = cfg.n_qubits
    psi0 = _check_full_state(psi0, n)
    eig = hermitian_eig(assemble_full_hamiltonian(cfg, cap=cap), cap=cap)
    states = evolve_series(eig, psi0, times)
    probs = np.abs(states) ** 2
    idx = single_excitation_indices(n)
    pops = probs[:, idx]
    mask = np.ones(probs.shape[1], dtype=bool)
    mask[idx] = False
    return TraceResult(times=times, populations=pops, leakage=probs[:, mask].sum(axis=1))

"""Full qutrit network: N phase qubits plus a three-level resonator bus.

Each subsystem is truncated to levels ``|0>, |1>, |2>``. Tensor factors are
ordered qubit 1, ..., qubit N, resonator, with the resonator as the fastest
ternary digit, so ket ``|q1 ... qN r>`` has linear index
``sum(q_k * 3**(N + 1 - k)) + r``.

Configs store frequencies in GHz. Conversion to rad/ns happens only inside
the functions that build matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeError
from .numerics import DEFAULT_DIM_CAP, check_dim_cap, kron_all

__all__ = [
    "DeviceConfig",
    "BasisIndex",
    "full_dim",
    "gell_mann",
    "qubit_momentum",
    "resonator_momentum",
    "subsystem_hamiltonian",
    "energy_reference",
    "assemble_full_hamiltonian",
    "excitation_number",
    "single_excitation_indices",
    "project_single_excitation",
    "single_excitation_block",
]

TWO_PI = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)


def _per_qubit(value, n: int, name: str) -> tuple[float, ...]:
    if np.ndim(value) == 0:
        return (float(value),) * n
    out = tuple(float(v) for v in value)
    if len(out) != n:
        raise ValueError(f"{name} needs {n} entries, got {len(out)}")
    return out


@dataclass(frozen=True)
class DeviceConfig:
    """Physical parameters of the network, frequencies in GHz.

    Per-qubit fields accept a scalar (broadcast to every qubit) or a
    sequence. ``epsilon`` holds the shifts of qubits 2..N (qubit 1 is the
    energy reference and has none), so it has ``n_qubits - 1`` entries.
    ``b`` and ``c`` are the dimensionless off-diagonal momentum elements.
    """

    n_qubits: int
    E10: float = 10.0
    E_r: float = 10.0
    epsilon: Sequence[float] | float = 0.0
    epsilon_r: float = 0.0
    Delta: Sequence[float] | float = 0.25
    couplings: Sequence[float] | float = 0.1
    b: Sequence[float] | float = 0.08
    c: Sequence[float] | float = 1.43

    def __post_init__(self):
        n = self.n_qubits
        if int(n) != n or n < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {n}")
        object.__setattr__(self, "epsilon", _per_qubit(self.epsilon, n - 1, "epsilon"))
        for name in ("Delta", "couplings", "b", "c"):
            object.__setattr__(self, name, _per_qubit(getattr(self, name), n, name))
        values = [self.E10, self.E_r, self.epsilon_r, *self.epsilon, *self.Delta,
                  *self.couplings, *self.b, *self.c]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("all device parameters must be finite")
        if any(g < 0 for g in self.couplings):
            raise ValueError(f"couplings must be non-negative, got {self.couplings}")

    @classmethod
    def benchmark_wn(cls, n_qubits: int = 4) -> "DeviceConfig":
        """Resonant device used for W_N generation."""
        return cls(n_qubits)

    @classmethod
    def benchmark_wn1(cls, n_qubits: int = 4) -> "DeviceConfig":
        """Same device with the bus detuned by 2g, used for W_(N+1)."""
        return cls(n_qubits, epsilon_r=0.2)

    @property
    def dim(self) -> int:
        return full_dim(self.n_qubits)

    def qubit_epsilon(self, qubit: int) -> float:
        """Shift of ``qubit`` (1-based); qubit 1 is always 0."""
        self._check_qubit(qubit)
        return 0.0 if qubit == 1 else self.epsilon[qubit - 2]

    def with_couplings(self, active: Iterable[int]) -> "DeviceConfig":
        """Copy with every coupling switched off except those of ``active`` qubits."""
        active = set(active)
        for q in active:
            self._check_qubit(q)
        g = tuple(g if q in active else 0.0 for q, g in enumerate(self.couplings, start=1))
        return replace(self, couplings=g)

    def with_qubit_epsilon(self, qubit: int, value: float) -> "DeviceConfig":
        self._check_qubit(qubit)
        if qubit == 1:
            raise ValueError("qubit 1 is the energy reference and cannot be shifted")
        eps = list(self.epsilon)
        eps[qubit - 2] = float(value)
        return replace(self, epsilon=tuple(eps))

    def _check_qubit(self, qubit: int) -> None:
        if not 1 <= qubit <= self.n_qubits:
            raise ValueError(f"qubit index must be in 1..{self.n_qubits}, got {qubit}")


def full_dim(n_qubits: int) -> int:
    return 3 ** (n_qubits + 1)


@dataclass(frozen=True)
class BasisIndex:
    """Ternary product-basis label: digits ``(q1, ..., qN, r)`` and linear index."""

    digits: tuple[int, ...]
    linear_index: int = field(init=False)

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        if len(digits) < 2 or any(d not in (0, 1, 2) for d in digits):
            raise ValueError(f"digits must be at least two ternary levels, got {self.digits}")
        object.__setattr__(self, "digits", digits)
        idx = 0
        for d in digits:
            idx = 3 * idx + d
        object.__setattr__(self, "linear_index", idx)

    @classmethod
    def from_linear(cls, index: int, n_qubits: int) -> "BasisIndex":
        if not 0 <= index < full_dim(n_qubits):
            raise ValueError(f"index {index} out of range for {n_qubits} qubits")
        digits = []
        for _ in range(n_qubits + 1):
            index, d = divmod(index, 3)
            digits.append(d)
        return cls(tuple(reversed(digits)))

    @property
    def n_qubits(self) -> int:
        return len(self.digits) - 1


def excitation_number(idx: BasisIndex | Sequence[int]) -> int:
    digits = idx.digits if isinstance(idx, BasisIndex) else idx
    return int(sum(digits))


_GELL_MANN = {
    1: [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    2: [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
    3: [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
    4: [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
    5: [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
    6: [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    7: [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
}


def gell_mann(k: int) -> np.ndarray:
    """Standard su(3) generator ``lambda_k`` for ``k`` in 1..8."""
    if k == 8:
        return np.diag([1.0, 1.0, -2.0]).astype(complex) / math.sqrt(3.0)
    if k not in _GELL_MANN:
        raise ValueError(f"Gell-Mann index must be in 1..8, got {k}")
    return np.array(_GELL_MANN[k], dtype=complex)


def qubit_momentum(b: float, c: float) -> np.ndarray:
    """Qubit momentum ``lambda_2 + b lambda_5 + c lambda_7``."""
    return gell_mann(2) + b * gell_mann(5) + c * gell_mann(7)


def resonator_momentum() -> np.ndarray:
    """Harmonic-mode momentum ``lambda_2 + sqrt(2) lambda_7``."""
    return gell_mann(2) + SQRT2 * gell_mann(7)


def subsystem_hamiltonian(cfg: DeviceConfig, which: int | str) -> np.ndarray:
    """Bare 3x3 Hamiltonian of one subsystem in rad/ns.

    Args:
        cfg: Device parameters.
        which: Qubit number (1-based) or ``"r"`` for the resonator.
    """
    if which in ("r", "resonator"):
        e, er = cfg.E_r, cfg.epsilon_r
        levels = [-e, er, e + 2 * er]
    else:
        q = int(which)
        eps = cfg.qubit_epsilon(q)
        levels = [-cfg.E10, eps, cfg.E10 + 2 * eps - cfg.Delta[q - 1]]
    return TWO_PI * np.diag(levels).astype(complex)


def energy_reference(cfg: DeviceConfig) -> float:
    """Bare energy (GHz) of the state with only qubit 1 excited.

    :func:`assemble_full_hamiltonian` subtracts this constant so that the
    single-excitation block carries the shifts ``epsilon`` directly on its
    diagonal.
    """
    return -((cfg.n_qubits - 1) * cfg.E10 + cfg.E_r)


def _outer_sum(per_site: list[np.ndarray]) -> np.ndarray:
    total = np.zeros(1)
    for levels in per_site:
        total = (total[:, None] + np.asarray(levels, dtype=float)[None, :]).ravel()
    return total


def _shifted_diagonal(cfg: DeviceConfig) -> np.ndarray:
    """Bare energies (GHz) minus :func:`energy_reference`.

    Each level is split as ``-E + d*E + extra(d)``; the large splittings
    enter only through integer excitation counts, so single-excitation
    entries come out without cancellation error.
    """
    n = cfg.n_qubits
    extras = []
    for q in range(1, n + 1):
        eps = cfg.qubit_epsilon(q)
        extras.append([0.0, eps, 2 * eps - cfg.Delta[q - 1]])
    extras.append([0.0, cfg.epsilon_r, 2 * cfg.epsilon_r])
    qubit_count = _outer_sum([[0, 1, 2]] * n + [[0, 0, 0]])
    bus_count = _outer_sum([[0, 0, 0]] * n + [[0, 1, 2]])
    return _outer_sum(extras) + cfg.E10 * (qubit_count - 1) + cfg.E_r * bus_count


def assemble_full_hamiltonian(
    cfg: DeviceConfig,
    cap: int | None = DEFAULT_DIM_CAP,
    shift_reference: bool = True,
) -> np.ndarray:
    """Network Hamiltonian ``sum H_i + H_r + sum g_ir p_i p_r`` in rad/ns.

    Args:
        cfg: Device parameters.
        cap: Largest accepted dimension ``3**(N+1)``; ``None`` disables.
        shift_reference: Subtract :func:`energy_reference` times the identity.
            This only changes the global phase of evolved states.

    Raises:
        ResourceLimitError: the dimension exceeds ``cap``.
    """
    n = cfg.n_qubits
    dim = full_dim(n)
    check_dim_cap(dim, cap)

    diag = _shifted_diagonal(cfg)
    if not shift_reference:
        diag = diag + energy_reference(cfg)
    h = np.diag(TWO_PI * diag).astype(complex)

    p_r = resonator_momentum()
    for q in range(1, n + 1):
        g = cfg.couplings[q - 1]
        if g == 0:
            continue
        p_q = qubit_momentum(cfg.b[q - 1], cfg.c[q - 1])
        left = np.eye(3 ** (q - 1))
        mid = np.eye(3 ** (n - q))
        h += (TWO_PI * g) * kron_all(left, p_q, mid, p_r)
    return h


def single_excitation_indices(n_qubits: int) -> list[int]:
    """Linear indices spanning the single-excitation subspace.

    Order: resonator excited, then qubit N, qubit N-1, ..., qubit 1 excited.
    """
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    return [1] + [3 ** (n_qubits + 1 - q) for q in range(n_qubits, 0, -1)]


def project_single_excitation(h, n_qubits: int) -> np.ndarray:
    """Sub-block of a full-basis operator on :func:`single_excitation_indices`."""
    h = np.asarray(h)
    dim = full_dim(n_qubits)
    if h.shape != (dim, dim):
        raise ShapeError(f"expected a {dim}x{dim} operator for {n_qubits} qubits, got {h.shape}")
    idx = single_excitation_indices(n_qubits)
    return h[np.ix_(idx, idx)]


def single_excitation_block(cfg: DeviceConfig) -> np.ndarray:
    """Closed-form single-excitation Hamiltonian (rad/ns) predicted from ``cfg``.

    Real symmetric: hub diagonal ``epsilon_r + E_r - E10`` (just ``epsilon_r``
    when bus and reference qubit share a splitting), spoke diagonals
    ``epsilon_N, ..., epsilon_2, 0`` and hub-spoke couplings ``g_Nr, ..., g_1r``.
    """
    n = cfg.n_qubits
    block = np.zeros((n + 1, n + 1))
    block[0, 0] = cfg.epsilon_r + cfg.E_r - cfg.E10
    for pos, q in enumerate(range(n, 0, -1), start=1):
        block[pos, pos] = cfg.qubit_epsilon(q)
        block[0, pos] = block[pos, 0] = cfg.couplings[q - 1]
    return TWO_PI * block

"""Analytic layer for the (N+1)-dimensional star Hamiltonian.

Basis index 0 is the hub (resonator excited); indices 1..N are the spokes
(one qubit excited). Energies and couplings are angular frequencies in
rad/ns, so a coupling quoted as ``f`` GHz enters as ``2*pi*f``.

Two variants are modelled:

* ``WN``: hub diagonal 0. Starting from the hub, the state reaches
  ``-i`` times the uniform spoke superposition at ``pi / (2 g sqrt(N))``.
* ``WN1``: hub diagonal ``2g``. Starting from the hub, the state reaches
  the uniform superposition over all N+1 sites (up to a known phase) at
  ``pi / (2 g sqrt(N+1))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedVariantError

__all__ = [
    "Variant",
    "EffectiveModel",
    "AnalyticSpectrum",
    "ghz_to_angular",
    "build_star_hamiltonian",
    "analytic_spectrum",
    "paper_eigvec_matrix",
    "paper_eigvec_eigenvalues",
    "entangling_time",
    "global_phase",
    "evolve_star_closed_form",
    "uniform_target",
]


class Variant(str, enum.Enum):
    WN = "WN"
    WN1 = "WN1"

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown variant {value!r}; expected 'WN' or 'WN1'") from None


def ghz_to_angular(f_ghz: float) -> float:
    """Convert a frequency in GHz to an angular frequency in rad/ns."""
    return 2.0 * math.pi * f_ghz


@dataclass(frozen=True)
class EffectiveModel:
    """Star Hamiltonian parameters.

    Attributes:
        n_qubits: Number of spokes N.
        g_angular: Hub-spoke coupling in rad/ns.
        variant: ``Variant.WN`` or ``Variant.WN1``.
    """

    n_qubits: int
    g_angular: float
    variant: Variant = Variant.WN

    def __post_init__(self):
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {self.n_qubits}")
        if not (self.g_angular > 0 and math.isfinite(self.g_angular)):
            raise ValueError(f"g_angular must be positive and finite, got {self.g_angular}")
        object.__setattr__(self, "variant", Variant.parse(self.variant))

    @classmethod
    def from_ghz(cls, n_qubits: int, g_ghz: float, variant: Variant | str = Variant.WN):
        return cls(n_qubits, ghz_to_angular(g_ghz), Variant.parse(variant))

    @property
    def dim(self) -> int:
        return self.n_qubits + 1

    @property
    def hub_energy(self) -> float:
        return 2.0 * self.g_angular if self.variant is Variant.WN1 else 0.0

    @property
    def active_sites(self) -> int:
        """Number of sites sharing the final uniform superposition."""
        return self.n_qubits + 1 if self.variant is Variant.WN1 else self.n_qubits


@dataclass(frozen=True)
class AnalyticSpectrum:
    """Closed-form eigenvalues (rad/ns, ascending) and the zero-mode count."""

    eigenvalues: np.ndarray
    degeneracy_count: int


def build_star_hamiltonian(model: EffectiveModel) -> np.ndarray:
    """Return the real symmetric (N+1)x(N+1) star matrix for ``model``."""
    n = model.n_qubits
    h = np.zeros((n + 1, n + 1))
    h[0, 1:] = model.g_angular
    h[1:, 0] = model.g_angular
    h[0, 0] = model.hub_energy
    return h


def analytic_spectrum(model: EffectiveModel) -> AnalyticSpectrum:
    n, g = model.n_qubits, model.g_angular
    zeros = [0.0] * (n - 1)
    if model.variant is Variant.WN:
        r = math.sqrt(n)
        values = [-g * r, *zeros, g * r]
    else:
        r = math.sqrt(n + 1)
        values = [g * (1 - r), *zeros, g * (1 + r)]
    return AnalyticSpectrum(eigenvalues=np.array(values), degeneracy_count=n - 1)


def paper_eigvec_matrix(model: EffectiveModel) -> np.ndarray:
    """Unnormalised eigenvector matrix in the classic closed form.

    Column 0 belongs to the lower nonzero eigenvalue, column 1 to the upper
    one, columns 2..N to the zero eigenvalue (see
    :func:`paper_eigvec_eigenvalues`). The zero-mode columns
    ``e_1 - e_k`` are eigenvectors but are not mutually orthogonal.
    """
    n = model.n_qubits
    s = np.zeros((n + 1, n + 1))
    if model.variant is Variant.WN:
        r = math.sqrt(n)
        s[0, 0], s[0, 1] = -r, r
    else:
        r = math.sqrt(n + 1)
        s[0, 0], s[0, 1] = 1 - r, 1 + r
    s[1:, 0] = 1.0
    s[1:, 1] = 1.0
    for k in range(2, n + 1):
        s[1, k] = -1.0
        s[k, k] = 1.0
    return s


def paper_eigvec_eigenvalues(model: EffectiveModel) -> np.ndarray:
    """Eigenvalues matching the columns of :func:`paper_eigvec_matrix`."""
    ev = analytic_spectrum(model).eigenvalues
    return np.concatenate([[ev[0], ev[-1]], ev[1:-1]])


def entangling_time(model: EffectiveModel) -> float:
    """Duration in ns after which the hub excitation is spread uniformly."""
    return math.pi / (2.0 * model.g_angular * math.sqrt(model.active_sites))


def global_phase(model: EffectiveModel) -> complex:
    """Unit scalar that turns the evolved hub state into the real positive target."""
    if model.variant is Variant.WN:
        return 1j
    alpha = math.pi / (2.0 * math.sqrt(model.n_qubits + 1))
    return 1j * complex(math.cos(alpha), math.sin(alpha))


def evolve_star_closed_form(model: EffectiveModel, t: float) -> np.ndarray:
    """Hub-initialised state of the ``WN`` star at time ``t`` (ns).

    The hub amplitude is ``cos(sqrt(N) g t)`` and every spoke carries
    ``-i sin(sqrt(N) g t) / sqrt(N)``.

    Raises:
        UnsupportedVariantError: for ``WN1``; evolve it numerically instead.
    """
    if model.variant is not Variant.WN:
        raise UnsupportedVariantError(
            "closed-form evolution is only available for the WN variant; use numerics.evolve_eig"
        )
    n = model.n_qubits
    r = math.sqrt(n)
    theta = r * model.g_angular * t
    psi = np.full(n + 1, -1j * math.sin(theta) / r, dtype=complex)
    psi[0] = math.cos(theta)
    return psi


def uniform_target(n_qubits: int, include_hub: bool = False) -> np.ndarray:
    """Uniform superposition in the effective basis.

    ``include_hub=False`` gives ``(0, 1/sqrt(N), ...)``; ``True`` spreads
    ``1/sqrt(N+1)`` over all N+1 entries.
    """
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    if include_hub:
        return np.full(n_qubits + 1, 1.0 / math.sqrt(n_qubits + 1), dtype=complex)
    psi = np.full(n_qubits + 1, 1.0 / math.sqrt(n_qubits), dtype=complex)
    psi[0] = 0.0
    return psi

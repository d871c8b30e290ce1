"""Dense complex linear-algebra kernels.

Operators are plain square ``numpy`` arrays and states are 1-d complex
arrays. Everything here is a pure function of its inputs.

The production propagator diagonalises the Hamiltonian once and applies
``V exp(-i w t) V^dagger``. :func:`matexp_apply_oracle` computes the same
action from a scaled-and-squared Taylor series and shares no code with the
eigensolver path, so the two can be used to check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import NonHermitianError, ResourceLimitError, SeriesConvergenceError, ShapeError

__all__ = [
    "DEFAULT_DIM_CAP",
    "EigenDecomposition",
    "check_hermitian",
    "hermitian_eig",
    "evolve_eig",
    "evolve_series",
    "matexp_apply_oracle",
    "kron",
    "kron_all",
    "expectation",
    "check_dim_cap",
]

DEFAULT_DIM_CAP = 20_000
HERMITIAN_ATOL = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a Hermitian matrix.

    Attributes:
        eigenvalues: Real eigenvalues in ascending order.
        eigenvectors: Orthonormal eigenvectors stored as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def check_hermitian(m, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``m`` as a square array, raising if it is not Hermitian.

    Raises:
        ShapeError: ``m`` is not square.
        NonHermitianError: some ``|m[i, j] - conj(m[j, i])|`` exceeds ``atol``.
    """
    m = _as_square(m)
    asym = np.abs(m - m.conj().T)
    worst = float(asym.max())
    if worst > atol:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise NonHermitianError(
            f"matrix is not Hermitian: |M[{i},{j}] - conj(M[{j},{i}])| = {worst:.3e} > {atol:.1e}"
        )
    return m


def check_dim_cap(dim: int, cap: int | None) -> None:
    if cap is not None and dim > cap:
        raise ResourceLimitError(f"dimension {dim} exceeds cap {cap}")


def _fix_phases(v: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    # first component above rel_tol * max|column| becomes real positive
    mags = np.abs(v)
    mask = mags > rel_tol * mags.max(axis=0, keepdims=True)
    lead = np.argmax(mask, axis=0)
    cols = np.arange(v.shape[1])
    pivots = v[lead, cols]
    return v * (np.abs(pivots) / pivots)


def hermitian_eig(m, cap: int | None = DEFAULT_DIM_CAP) -> EigenDecomposition:
    """Diagonalise a Hermitian matrix.

    Eigenvalues are returned ascending. Each eigenvector is rephased so its
    first non-negligible component is real and positive. Inside degenerate
    eigenspaces the basis is whatever LAPACK returns; callers must not rely
    on it.

    Args:
        m: Square Hermitian matrix.
        cap: Largest accepted dimension, ``None`` for no limit.

    Raises:
        NonHermitianError: ``m`` fails :func:`check_hermitian`.
        ResourceLimitError: ``m`` is larger than ``cap``.
    """
    m = check_hermitian(m)
    check_dim_cap(m.shape[0], cap)
    w, v = np.linalg.eigh(m.astype(complex, copy=False))
    return EigenDecomposition(eigenvalues=w, eigenvectors=_fix_phases(v))


def _as_state(psi, dim: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (dim,):
        raise ShapeError(f"state of shape {psi.shape} does not match operator dimension {dim}")
    return psi


def evolve_eig(
    m,
    psi,
    t: float,
    eig: EigenDecomposition | None = None,
    cap: int | None = DEFAULT_DIM_CAP,
) -> np.ndarray:
    """Apply ``exp(-i m t)`` to ``psi`` through the eigendecomposition of ``m``.

    Args:
        m: Hermitian generator in rad/ns. May be ``None`` when ``eig`` is given.
        psi: State vector.
        t: Duration in ns; negative values run the evolution backwards.
        eig: Precomputed decomposition of ``m``, reused across calls.
        cap: Dimension cap forwarded to :func:`hermitian_eig`.

    Returns:
        The evolved state. ``t == 0`` returns an unmodified copy of ``psi``.
    """
    if eig is None:
        eig = hermitian_eig(m, cap=cap)
    psi = _as_state(psi, eig.dim)
    if not math.isfinite(t):
        raise ValueError(f"duration must be finite, got {t}")
    if t == 0:
        return psi.copy()
    v = eig.eigenvectors
    return v @ (np.exp(-1j * eig.eigenvalues * t) * (v.conj().T @ psi))


def evolve_series(eig: EigenDecomposition, psi, times) -> np.ndarray:
    """Evolve ``psi`` to every time in ``times``; returns shape ``(len(times), dim)``."""
    psi = _as_state(psi, eig.dim)
    times = np.asarray(times, dtype=float)
    v = eig.eigenvectors
    coeffs = v.conj().T @ psi
    phases = np.exp(-1j * np.outer(times, eig.eigenvalues))
    return (phases * coeffs) @ v.T


def _one_norm(a: np.ndarray) -> float:
    return float(np.abs(a).sum(axis=0).max())


def matexp_apply_oracle(
    m,
    psi,
    t: float,
    max_squarings: int = 60,
    max_terms: int = 60,
) -> np.ndarray:
    """Apply ``exp(-i m t)`` to ``psi`` by a scaled-and-squared Taylor series.

    Independent reference for :func:`evolve_eig`. The generator is first
    shifted by its mean diagonal (a pure phase for Hermitian ``m``), scaled by
    ``2**-s`` until its 1-norm is at most 1/2, expanded until the next term is
    below double-precision round-off, and squared back ``s`` times.

    Raises:
        SeriesConvergenceError: more than ``max_squarings`` halvings would be
            needed, or the series fails to converge in ``max_terms`` terms.
    """
    m = _as_square(m)
    n = m.shape[0]
    psi = _as_state(psi, n)
    a = (-1j * t) * m.astype(complex)
    shift = np.trace(a) / n
    a = a - shift * np.eye(n)

    norm = _one_norm(a)
    s = 0 if norm <= 0.5 else int(math.ceil(math.log2(norm / 0.5)))
    if s > max_squarings:
        raise SeriesConvergenceError(
            f"scaling requires {s} squarings, above the limit of {max_squarings}"
        )
    a = a / 2.0**s

    total = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, max_terms + 1):
        term = term @ a / k
        total = total + term
        if _one_norm(term) <= np.finfo(float).eps * _one_norm(total):
            break
    else:
        raise SeriesConvergenceError(f"Taylor series did not converge in {max_terms} terms")

    for _ in range(s):
        total = total @ total
    return np.exp(shift) * (total @ psi)


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(*ops) -> np.ndarray:
    """Kronecker product of all operands, left factor slowest."""
    if not ops:
        raise ValueError("kron_all needs at least one operand")
    return reduce(kron, ops)


def expectation(m, psi) -> float:
    """Real part of ``<psi|m|psi>``."""
    psi = np.asarray(psi)
    return float(np.real(np.vdot(psi, np.asarray(m) @ psi)))

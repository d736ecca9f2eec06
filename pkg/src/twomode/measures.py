"""Concurrence, entanglement of formation, negativity, and closed forms.

Conventions: the two-qubit basis is the fixed atomic ordering
{ee, eg, ge, gg}; the spin flip acts on both atom factors with the Pauli-y
matrix written in that same ordering.  Closed-form concurrences are
expressed through the single-excitation Rabi frequencies
K1 = 2 g sin(phi/4) and K2 = 2 g cos(phi/4).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAState, OutOfValidity
from .hilbert import (
    DensityMatrix,
    as_complex,
    is_hermitian,
    partial_transpose,
    trace_norm_hermitian,
)
from .evolve import rabi_frequencies

STATE_ATOL = 1e-8

_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class EntanglementSample:
    """One sampled point of an entanglement time series."""

    t: float
    concurrence: float
    negativity: float | None = None
    cut: str = "atom-atom"

    def __post_init__(self):
        if not -1e-12 <= self.concurrence <= 1.0 + 1e-9:
            raise ValueError(f"concurrence {self.concurrence} outside [0, 1]")
        if self.negativity is not None and self.negativity < -1e-12:
            raise ValueError("negativity must be nonnegative")


def _as_two_qubit_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        m = rho.matrix
    else:
        m = as_complex(rho)
    if m.shape != (4, 4):
        raise NotAState(f"need a 4x4 two-qubit density matrix, got {m.shape}")
    if not is_hermitian(m, rtol=1e-9):
        raise NotAState("density matrix is not Hermitian")
    if abs(np.trace(m).real - 1.0) > STATE_ATOL:
        raise NotAState(f"trace {np.trace(m).real} deviates from 1 beyond {STATE_ATOL}")
    if np.linalg.eigvalsh(m).min() < -STATE_ATOL:
        raise NotAState("density matrix has a negative eigenvalue beyond tolerance")
    return m


def concurrence(rho) -> float:
    """Two-qubit concurrence from the spin-flipped operator.

    The decreasing square roots of the rho * rho~ spectrum are computed as
    the singular values of sqrt(rho) Y (x) Y sqrt(rho)*, the conditioning-
    robust equivalent of the Hermitian form sqrt(rho) rho~ sqrt(rho): their
    absolute error stays at machine scale instead of its square root, which
    matters exactly at the zero crossings of the concurrence.  Eigenvalues
    of rho below 1e-14 (noise scale of the 4x4 eigensolve, including tiny
    negatives) count as exact zeros before the square root, so rank-deficient
    states do not leak eigensolver noise into sqrt(rho).
    """
    m = _as_two_qubit_matrix(rho)
    w, v = np.linalg.eigh(m)
    w = np.where(w < 1e-14, 0.0, w)
    sqrt_m = (v * np.sqrt(w)) @ v.conj().T
    lam = np.linalg.svd(sqrt_m @ SPIN_FLIP @ sqrt_m.conj(), compute_uv=False)
    return float(max(0.0, min(1.0, lam[0] - lam[1] - lam[2] - lam[3])))


def entanglement_of_formation(c: float) -> float:
    """Binary-entropy expression E(C) = h((1 + sqrt(1 - C^2))/2)."""
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise ValueError(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    x = (1.0 + np.sqrt(1.0 - c * c)) / 2.0
    return float(_binary_entropy(x))


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * np.log2(x) - (1 - x) * np.log2(1 - x)


def negativity(rho: DensityMatrix, transpose_factors) -> float:
    """(||rho^T_B||_1 - 1)/2 for the factors listed as side B.

    Zero exactly for positive partial transposes; values within 1e-12 of
    zero are floored to zero.
    """
    pt = partial_transpose(rho, transpose_factors)
    val = (trace_norm_hermitian(pt) - 1.0) / 2.0
    return 0.0 if abs(val) < 1e-12 else float(max(0.0, val))


# ---------------------------------------------------------------------------
# closed forms on the single-excitation subspace


def concurrence_eg00(phi: float, t, g: float = 1.0):
    """Atom-atom concurrence of the evolved |eg00>:  |cos 2 K1 t - cos 2 K2 t|/4."""
    k1, k2 = rabi_frequencies(phi, g)
    t = np.asarray(t, dtype=float)
    out = 0.25 * np.abs(np.cos(2 * k1 * t) - np.cos(2 * k2 * t))
    return float(out) if out.ndim == 0 else out


def eg00_death_times(phi: float, m, g: float = 1.0):
    """Death instants t_d = m pi / (K1 - K2) of the |eg00> concurrence.

    Undefined at phi = pi where the two frequencies coincide and the
    concurrence vanishes identically.
    """
    k1, k2 = rabi_frequencies(phi, g)
    if abs(k1 - k2) < 1e-15:
        raise ZeroDivisionError("death times diverge where K1 = K2 (phi = pi)")
    m = np.asarray(m, dtype=float)
    out = np.abs(m * np.pi / (k1 - k2))
    return float(out) if out.ndim == 0 else out


def concurrence_gg10(phi: float, t, g: float = 1.0):
    """Atom-atom concurrence of the evolved |gg10>: (sin^2 K1 t + sin^2 K2 t)/2.

    Reduces to sin^2(2 g t)/2 at phi = 0 and sin^2(sqrt(2) g t) at phi = pi.
    """
    k1, k2 = rabi_frequencies(phi, g)
    t = np.asarray(t, dtype=float)
    out = 0.5 * (np.sin(k1 * t) ** 2 + np.sin(k2 * t) ** 2)
    return float(out) if out.ndim == 0 else out


def concurrence_bell00(phi: float, t, g: float = 1.0):
    """Published closed form for the evolved (|eg> + |ge>)|00>/sqrt(2):

        C = cos^2(K1 t) cos^2(phi/4) + cos^2(K2 t) sin^2(phi/4)

    Kept exactly as published.  The numeric audit (criterion: see
    :mod:`twomode.audit`) shows this form reproduces the exact dynamics only
    at phi = pi; elsewhere the cos^2(phi/4)/sin^2(phi/4) weights disagree
    with the numerically evolved state.
    """
    k1, k2 = rabi_frequencies(phi, g)
    t = np.asarray(t, dtype=float)
    out = (np.cos(k1 * t) ** 2) * np.cos(phi / 4) ** 2 + (
        np.cos(k2 * t) ** 2
    ) * np.sin(phi / 4) ** 2
    return float(out) if out.ndim == 0 else out


def negativity_lowsqueeze_approx(xi: float, t, cut: str, g: float = 1.0):
    """Small-squeezing negativity approximations for the isolated-pair
    picture seeded with |ee> and a two-mode squeezed state.

        N_atoms  ~ |min(s1^2 c1^2 - xi s1^2 c2^2, 0)|
        N_fields ~ |min(s1^2 c1^2 - xi c1^2 c2^2, 0)|

    with s1 = sin(sqrt(2) g t), c1 = cos(sqrt(2) g t), c2 = cos(2 g t).
    Valid to first order in the (real, positive) squeezing parameter;
    enforced for |xi| <= 0.2.
    """
    if abs(xi) > 0.2:
        raise OutOfValidity(f"low-squeezing approximation requires |xi| <= 0.2, got {xi}")
    t = np.asarray(t, dtype=float)
    s1 = np.sin(np.sqrt(2) * g * t)
    c1 = np.cos(np.sqrt(2) * g * t)
    c2 = np.cos(2 * g * t)
    if cut in ("atoms", "atom-atom"):
        val = s1 ** 2 * c1 ** 2 - xi * s1 ** 2 * c2 ** 2
    elif cut in ("fields", "field-field"):
        val = s1 ** 2 * c1 ** 2 - xi * c1 ** 2 * c2 ** 2
    else:
        raise ValueError(f"unknown cut {cut!r}; use 'atoms' or 'fields'")
    out = np.abs(np.minimum(val, 0.0))
    return float(out) if out.ndim == 0 else out


def x_form_concurrence(rho) -> float:
    """Concurrence 2 |<eg| rho |ge>| of the single-excitation X form.

    Exact whenever the two-qubit state has support only on {eg, ge, gg}
    with a single eg-ge coherence.
    """
    m = _as_two_qubit_matrix(rho)
    return float(2.0 * abs(m[1, 2]))

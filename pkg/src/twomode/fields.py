"""Constructors for the atomic and field initial states used by the model.

Pure field constructors that truncate an infinite Fock expansion return a
``(state, discarded)`` pair, where ``discarded`` is the population that fell
beyond the cutoff before renormalization.  Constructors whose support is
finite (Fock, eta) return the state alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    ExceedsTruncation,
    NotAState,
    TruncationTooSmall,
)
from .hilbert import CompositeSpace, DensityMatrix, StateVector, partial_trace

EPS_TRUNC_DEFAULT = 1e-8

ATOMIC_BASIS = ("ee", "eg", "ge", "gg")

_ATOMIC_VECTORS = {
    "ee": np.array([1, 0, 0, 0], dtype=complex),
    "eg": np.array([0, 1, 0, 0], dtype=complex),
    "ge": np.array([0, 0, 1, 0], dtype=complex),
    "gg": np.array([0, 0, 0, 1], dtype=complex),
    # (|ee> + |gg>)/sqrt(2)
    "phi": np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    # (|eg> + |ge>)/sqrt(2)
    "psi": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
}

ATOMIC_LABELS = tuple(_ATOMIC_VECTORS)


@dataclass(frozen=True)
class AtomicState:
    """A pure two-atom state in the fixed basis {ee, eg, ge, gg}."""

    label: str
    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex)
        if v.shape != (4,):
            raise DimensionMismatch("atomic state needs 4 amplitudes")
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise NotAState("atomic state must be normalized")
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)


def atomic_state(label: str) -> AtomicState:
    """Named atomic state; labels: ee, eg, ge, gg, phi, psi (case-insensitive)."""
    key = label.strip().lower()
    if key not in _ATOMIC_VECTORS:
        raise ValueError(f"unknown atomic label {label!r}; choose from {ATOMIC_LABELS}")
    return AtomicState(key, _ATOMIC_VECTORS[key])


def mode_space(n_max: int) -> CompositeSpace:
    return CompositeSpace((n_max + 1,))


def two_mode_space(n_max: int) -> CompositeSpace:
    return CompositeSpace((n_max + 1, n_max + 1))


def _mode_dim(space: CompositeSpace, n_modes: int) -> int:
    dims = space.factor_dims
    if len(dims) != n_modes or len(set(dims)) != 1:
        raise DimensionMismatch(
            f"expected a {n_modes}-mode space with equal cutoffs, got {dims}"
        )
    return dims[0]


def fock_state(n: int, m: int, space: CompositeSpace) -> StateVector:
    """Product Fock state |n, m> on a two-mode space."""
    d = _mode_dim(space, 2)
    if not (0 <= n < d and 0 <= m < d):
        raise ExceedsTruncation(f"occupations ({n}, {m}) exceed cutoff {d - 1}")
    return StateVector(space, space.basis_vector((n, m)))


def coherent_state(alpha: complex, space: CompositeSpace,
                   eps_trunc: float = EPS_TRUNC_DEFAULT):
    """Single-mode coherent state, renormalized after Poisson truncation."""
    d = _mode_dim(space, 1)
    n = np.arange(d)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    amp = np.exp(-abs(alpha) ** 2 / 2) * np.power(complex(alpha), n) * np.exp(-log_fact / 2)
    kept = float(np.vdot(amp, amp).real)
    discarded = max(0.0, 1.0 - kept)
    if discarded > eps_trunc:
        raise TruncationTooSmall(
            f"coherent tail {discarded:.3e} beyond n={d - 1} exceeds {eps_trunc:.1e}"
        )
    return StateVector(space, amp / np.sqrt(kept)), discarded


def squeezed_vacuum(xi: complex, space: CompositeSpace,
                    eps_trunc: float = EPS_TRUNC_DEFAULT):
    """Single-mode squeezed vacuum with only even occupations populated.

    Convention: the squeeze generator is exp((xi* a^2 - xi a+^2)/2) acting on
    vacuum, giving amplitudes
    c_{2m} = (-e^{i arg xi} tanh r)^m sqrt((2m)!)/(2^m m!)/sqrt(cosh r).
    """
    d = _mode_dim(space, 1)
    r = abs(xi)
    theta = np.angle(xi) if r > 0 else 0.0
    amp = np.zeros(d, dtype=complex)
    for m in range(0, (d - 1) // 2 + 1):
        amp[2 * m] = (
            (-np.exp(1j * theta) * np.tanh(r)) ** m
            * math.exp(0.5 * math.lgamma(2 * m + 1) - m * math.log(2) - math.lgamma(m + 1))
        )
    amp /= np.sqrt(np.cosh(r))
    kept = float(np.vdot(amp, amp).real)
    discarded = max(0.0, 1.0 - kept)
    if discarded > eps_trunc:
        raise TruncationTooSmall(
            f"squeezed-vacuum tail {discarded:.3e} beyond n={d - 1} exceeds {eps_trunc:.1e}"
        )
    return StateVector(space, amp / np.sqrt(kept)), discarded


def two_mode_squeezed(xi: complex, space: CompositeSpace,
                      eps_trunc: float = EPS_TRUNC_DEFAULT):
    """Two-mode squeezed vacuum: pair-correlated amplitudes on |n, n>.

    Convention: exp(xi* a1 a2 - xi a1+ a2+) on vacuum, so the |n, n>
    amplitude is (-e^{i arg xi} tanh r)^n / cosh r and the tail beyond the
    cutoff is exactly tanh(r)^(2(N+1)).
    """
    d = _mode_dim(space, 2)
    r = abs(xi)
    theta = np.angle(xi) if r > 0 else 0.0
    lam = np.tanh(r) ** 2
    discarded = lam ** d
    if discarded > eps_trunc:
        raise TruncationTooSmall(
            f"two-mode-squeezed tail {discarded:.3e} beyond n={d - 1} exceeds {eps_trunc:.1e}"
        )
    amp = np.zeros(d * d, dtype=complex)
    for n in range(d):
        amp[space.flat_index((n, n))] = (-np.exp(1j * theta) * np.tanh(r)) ** n
    amp /= np.cosh(r)
    amp /= np.linalg.norm(amp)
    return StateVector(space, amp), discarded


def thermal_state(nbar: float, space: CompositeSpace,
                  eps_trunc: float = EPS_TRUNC_DEFAULT):
    """Single-mode thermal state, diagonal with geometric populations."""
    if nbar < 0:
        raise ValueError("mean occupation must be nonnegative")
    d = _mode_dim(space, 1)
    if nbar == 0:
        p = np.zeros(d)
        p[0] = 1.0
        return DensityMatrix(space, np.diag(p.astype(complex))), 0.0
    q = nbar / (1.0 + nbar)
    p = (q ** np.arange(d)) / (1.0 + nbar)
    discarded = q ** d
    if discarded > eps_trunc:
        raise TruncationTooSmall(
            f"thermal tail {discarded:.3e} beyond n={d - 1} exceeds {eps_trunc:.1e}"
        )
    p /= p.sum()
    return DensityMatrix(space, np.diag(p.astype(complex))), discarded


def eta_state(n: int, m: int, space: CompositeSpace) -> StateVector:
    """Image of |n, m> under the symmetric mode mixing, written explicitly.

    Double-sum form with binomial coefficients and the (-1)^l sign:

        sum_{k<=n} sum_{l<=m} C(n,k) C(m,l) (-1)^l
            sqrt((m+n-k-l)!) sqrt((k+l)!) |m+n-k-l, k+l>
            / sqrt(2^(m+n) m! n!)
    """
    d = _mode_dim(space, 2)
    if n < 0 or m < 0 or n + m > d - 1:
        raise ExceedsTruncation(f"eta({n},{m}) needs cutoff >= {n + m}, have {d - 1}")
    amp = np.zeros(d * d, dtype=complex)
    for k in range(n + 1):
        for l in range(m + 1):
            s = k + l
            amp[space.flat_index((n + m - s, s))] += (
                math.comb(n, k) * math.comb(m, l) * (-1) ** l
                * math.sqrt(math.factorial(n + m - s))
                * math.sqrt(math.factorial(s))
            )
    amp /= math.sqrt(2 ** (n + m) * math.factorial(n) * math.factorial(m))
    return StateVector(space, amp)


def rho_nm_state(n: int, m: int, space: CompositeSpace) -> DensityMatrix:
    """Single-mode marginal of |eta_nm>, i.e. its partial trace over the
    second transformed mode.  Diagonal in the Fock basis by construction."""
    d = _mode_dim(space, 1)
    if n < 0 or m < 0 or n + m > d - 1:
        raise ExceedsTruncation(f"rho_nm({n},{m}) needs cutoff >= {n + m}, have {d - 1}")
    two = two_mode_space(d - 1)
    eta = eta_state(n, m, two)
    return partial_trace(eta.density(), keep=(0,))


def assemble_initial(atomic, field, space: CompositeSpace):
    """Tensor an atomic state with a field state in the fixed factor order.

    Returns a :class:`StateVector` when both factors are pure, else a
    :class:`DensityMatrix`.
    """
    if isinstance(atomic, str):
        atomic = atomic_state(atomic)
    field_space = field.space
    expected = (2, 2) + field_space.factor_dims
    if space.factor_dims != expected:
        raise DimensionMismatch(
            f"space {space.factor_dims} does not match atomic x field layout {expected}"
        )
    if isinstance(field, StateVector):
        return StateVector(space, np.kron(atomic.vector, field.amplitudes))
    rho_atom = np.outer(atomic.vector, atomic.vector.conj())
    return DensityMatrix(space, np.kron(rho_atom, field.matrix))

"""Hamiltonians for the two-atom/two-mode model and its equivalent pictures.

The interaction-picture Hamiltonian on the full space (hbar = 1) is

    H(phi) = g (s1+ a1 + s1+ a2 + s2+ a1 + e^{i phi} s2+ a2 + h.c.)

with the separation phase ``phi`` carrying all distance dependence.  The
symmetric/antisymmetric mode combinations

    A1 = (a1 + a2)/sqrt(2),   A2 = (a1 - a2)/sqrt(2)

turn phi = 0 into a two-atom/one-mode model (both atoms coupled to A1 with
strength sqrt(2) g) and phi = pi into two isolated atom-mode pairs.  The
Fock-space unitary implementing that mode mixing, together with a partial
trace over the decoupled mode in the phi = 0 case, maps initial states
between the pictures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .hilbert import (
    CompositeSpace,
    DensityMatrix,
    HermitianOperator,
    StateVector,
    mkron,
    partial_trace,
    unitary_from_hamiltonian,
)

# Residual local phase on atom 2 produced by the phi = pi mode transform.
# With A2 = (a1 - a2)/sqrt(2) the transform lands exactly on the decoupled
# pair Hamiltonian, so the constant is unity; kept explicit because other
# sign conventions for A2 would put a -1 here.
DJC_RESIDUAL_ATOM2_PHASE = 1.0 + 0.0j

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |e><g| in (e, g) order
SIGMA_MINUS = SIGMA_PLUS.conj().T
ATOM_NUMBER = np.diag([1.0, 0.0]).astype(complex)        # sigma+ sigma-
I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """One physical configuration: coupling, separation phase, truncation."""

    g: float = 1.0
    phi: float = 0.0
    omega0: float = 0.0
    n_max: int = 12
    eps_trunc: float = 1e-8

    def __post_init__(self):
        if self.g <= 0:
            raise ValueError("coupling g must be positive")
        if not 0.0 <= self.phi < 2 * np.pi:
            raise ValueError("phi must lie in [0, 2*pi)")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if self.eps_trunc <= 0:
            raise ValueError("eps_trunc must be positive")


def full_space(n_max: int) -> CompositeSpace:
    """The fixed four-factor layout [atom1, atom2, mode1, mode2]."""
    return CompositeSpace((2, 2, n_max + 1, n_max + 1))


def tc_space(n_max: int) -> CompositeSpace:
    """Two atoms and the single coupled mode of the phi = 0 picture."""
    return CompositeSpace((2, 2, n_max + 1))


def destroy(dim: int) -> np.ndarray:
    """Truncated annihilation operator on a dim-dimensional ladder."""
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim)).astype(complex)


def _check_space(space, builder, params):
    if space is None:
        return builder(params.n_max)
    if space.factor_dims != builder(params.n_max).factor_dims:
        raise DimensionMismatch(
            f"space {space.factor_dims} does not match n_max={params.n_max}"
        )
    return space


def build_hamiltonian(params: ModelParams, space: CompositeSpace | None = None) -> HermitianOperator:
    """Full two-mode Hamiltonian at separation phase phi.

    The omega0 term (a global phase generator on the conserved excitation
    number) is included only when params.omega0 is nonzero; entanglement
    measures are invariant either way.
    """
    space = _check_space(space, full_space, params)
    d = params.n_max + 1
    a = destroy(d)
    im = np.eye(d, dtype=complex)
    g = params.g
    h = g * (
        mkron(SIGMA_PLUS, I2, a, im)
        + mkron(SIGMA_PLUS, I2, im, a)
        + mkron(I2, SIGMA_PLUS, a, im)
        + np.exp(1j * params.phi) * mkron(I2, SIGMA_PLUS, im, a)
    )
    h = h + h.conj().T
    if params.omega0 != 0.0:
        h = h + params.omega0 * excitation_number(space).matrix
    return HermitianOperator(h, space)


def excitation_number(space: CompositeSpace) -> HermitianOperator:
    """Total excitation operator: atomic inversions plus photon numbers.

    Works on any space in the fixed layout: factors of dimension 2 count as
    atoms (|e> is index 0), larger factors as modes.
    """
    dims = space.factor_dims
    total = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    for i, d in enumerate(dims):
        local = ATOM_NUMBER if d == 2 else number_op(d)
        ops = [np.eye(dj, dtype=complex) for dj in dims]
        ops[i] = local
        total += mkron(*ops)
    return HermitianOperator(total, space)


def beam_splitter_unitary(space: CompositeSpace) -> np.ndarray:
    """Fock-space unitary W of the symmetric mode mixing.

    Heisenberg action: W a1 W+ = (a1 + a2)/sqrt(2), W a2 W+ = (a1 - a2)/sqrt(2),
    with W|0,0> = |0,0>.  Built as a mode-hopping rotation followed by a
    parity phase on mode 2, so it is independent of the explicit polynomial
    expansion used by ``fields.eta_state`` and can serve as its oracle.
    Block-diagonal in total photon number; on an N-truncated space the blocks
    with total occupation <= N act exactly as in the untruncated space.

    Accepts a two-mode space or the full four-factor space (the mode part is
    used); always returns the two-mode matrix.
    """
    dims = space.factor_dims
    if len(dims) == 4:
        dims = dims[2:]
    if len(dims) != 2 or dims[0] != dims[1]:
        raise DimensionMismatch(f"need two equal mode factors, got {space.factor_dims}")
    d = dims[0]
    a1 = mkron(destroy(d), np.eye(d, dtype=complex))
    a2 = mkron(np.eye(d, dtype=complex), destroy(d))
    hopping = 1j * (a1.conj().T @ a2 - a2.conj().T @ a1)   # Hermitian
    rotation = unitary_from_hamiltonian(hopping, -np.pi / 4)
    n2 = np.kron(np.ones(d), np.arange(d))
    parity = np.diag(np.exp(1j * np.pi * n2))
    return rotation @ parity


def build_tc_hamiltonian(params: ModelParams, space: CompositeSpace | None = None) -> HermitianOperator:
    """Both atoms coupled with strength sqrt(2) g to one mode."""
    space = _check_space(space, tc_space, params)
    d = params.n_max + 1
    a = destroy(d)
    h = np.sqrt(2) * params.g * (mkron(SIGMA_PLUS, I2, a) + mkron(I2, SIGMA_PLUS, a))
    h = h + h.conj().T
    if params.omega0 != 0.0:
        h = h + params.omega0 * excitation_number(space).matrix
    return HermitianOperator(h, space)


def build_djc_hamiltonian(params: ModelParams, space: CompositeSpace | None = None) -> HermitianOperator:
    """Two isolated atom-mode pairs: atom 1 with mode 1, atom 2 with mode 2."""
    space = _check_space(space, full_space, params)
    d = params.n_max + 1
    a = destroy(d)
    im = np.eye(d, dtype=complex)
    h = np.sqrt(2) * params.g * (
        mkron(SIGMA_PLUS, I2, a, im) + mkron(I2, SIGMA_PLUS, im, a)
    )
    h = h + h.conj().T
    if params.omega0 != 0.0:
        h = h + params.omega0 * excitation_number(space).matrix
    return HermitianOperator(h, space)


def _apply_mode_transform(state, space: CompositeSpace):
    w = mkron(np.eye(4, dtype=complex), beam_splitter_unitary(space))
    if isinstance(state, StateVector):
        return StateVector(space, w @ state.amplitudes)
    return DensityMatrix(space, w @ state.matrix @ w.conj().T)


def map_sc_to_tc(state, space: CompositeSpace | None = None) -> DensityMatrix:
    """Map a phi = 0 initial state to the equivalent one-mode picture.

    Applies the mode transform and traces out the decoupled transformed
    mode.  Many-to-one and purity is generally not preserved, so the result
    is always a density matrix on [2, 2, n_max + 1].
    """
    space = space or state.space
    transformed = _apply_mode_transform(state, space)
    if isinstance(transformed, StateVector):
        transformed = transformed.density()
    return partial_trace(transformed, keep=(0, 1, 2))


def map_ac_to_djc(state, space: CompositeSpace | None = None):
    """Map a phi = pi initial state to the isolated-pair picture.

    Only the mode transform is applied (no trace), so purity is preserved
    and the result has the same kind as the input.
    """
    space = space or state.space
    return _apply_mode_transform(state, space)

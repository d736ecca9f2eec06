"""Composite Hilbert-space bookkeeping and the dense linear algebra beneath it.

Everything here is backed by dense complex ``numpy`` arrays.  The fixed
factor ordering used throughout the package is

    [atom 1, atom 2, mode 1, mode 2]

stored row-major, so the flat basis index of ``(i1, i2, n1, n2)`` is the
usual mixed-radix number.  Atomic factors use the ordering ``(e, g)`` so
that the four-dimensional atomic basis reads ``{ee, eg, ge, gg}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadFactor,
    DimensionMismatch,
    NotAState,
    NotHermitian,
    TruncationTooLarge,
)

# Hard ceiling on any constructed matrix dimension; everything in this
# package is desk-scale dense algebra.
MAX_TOTAL_DIM = 8192

HERMITICITY_RTOL = 1e-12
NORM_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-10

_EINSUM_LETTERS = "abcdefghijklmnopqrstuvwx"


def as_complex(m) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(m, dtype=np.complex128))


def is_hermitian(m: np.ndarray, rtol: float = HERMITICITY_RTOL) -> bool:
    m = np.asarray(m)
    scale = max(np.abs(m).max(), 1.0)
    return np.abs(m - m.conj().T).max() <= rtol * scale


@dataclass(frozen=True)
class CompositeSpace:
    """A truncated tensor-product space with exact flat/multi index arithmetic."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        object.__setattr__(self, "factor_dims", dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"factor dimensions must be positive, got {dims}")
        total = 1
        for d in dims:
            total *= d
        if total > MAX_TOTAL_DIM:
            raise TruncationTooLarge(
                f"total dimension {total} exceeds the {MAX_TOTAL_DIM} budget"
            )

    @property
    def total_dim(self) -> int:
        total = 1
        for d in self.factor_dims:
            total *= d
        return total

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    def flat_index(self, multi) -> int:
        """Row-major flat index of a multi-index over the ordered factors."""
        if len(multi) != self.n_factors:
            raise ValueError(f"expected {self.n_factors} indices, got {len(multi)}")
        flat = 0
        for i, d in zip(multi, self.factor_dims):
            if not 0 <= i < d:
                raise ValueError(f"index {i} out of range for factor of dim {d}")
            flat = flat * d + i
        return flat

    def multi_index(self, flat: int) -> tuple[int, ...]:
        if not 0 <= flat < self.total_dim:
            raise ValueError(f"flat index {flat} out of range")
        out = []
        for d in reversed(self.factor_dims):
            out.append(flat % d)
            flat //= d
        return tuple(reversed(out))

    def subspace(self, keep) -> "CompositeSpace":
        keep = _check_factors(self, keep)
        return CompositeSpace(tuple(self.factor_dims[i] for i in keep))

    def basis_vector(self, multi) -> np.ndarray:
        v = np.zeros(self.total_dim, dtype=np.complex128)
        v[self.flat_index(multi)] = 1.0
        return v


def _check_factors(space: CompositeSpace, factors) -> tuple[int, ...]:
    """Normalize a factor index or iterable of them, sorted and validated."""
    if isinstance(factors, (int, np.integer)):
        factors = (int(factors),)
    factors = tuple(sorted(int(f) for f in factors))
    if not factors:
        raise BadFactor("need at least one factor index")
    if len(set(factors)) != len(factors):
        raise BadFactor(f"repeated factor index in {factors}")
    for f in factors:
        if not 0 <= f < space.n_factors:
            raise BadFactor(
                f"factor {f} does not exist in a space with {space.n_factors} factors"
            )
    return factors


class StateVector:
    """A normalized pure state on a :class:`CompositeSpace`."""

    __slots__ = ("space", "amplitudes")

    def __init__(self, space: CompositeSpace, amplitudes):
        amplitudes = as_complex(amplitudes).reshape(-1)
        if amplitudes.shape != (space.total_dim,):
            raise DimensionMismatch(
                f"amplitude vector of length {amplitudes.size} does not fit "
                f"a space of dimension {space.total_dim}"
            )
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > NORM_ATOL:
            raise NotAState(f"state norm {norm} deviates from 1 beyond {NORM_ATOL}")
        amplitudes.flags.writeable = False
        self.space = space
        self.amplitudes = amplitudes

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.space, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(other.amplitudes, self.amplitudes))

    def __repr__(self):
        return f"StateVector(dims={self.space.factor_dims})"


class DensityMatrix:
    """A Hermitian, unit-trace, positive-semidefinite operator on a space."""

    __slots__ = ("space", "matrix")

    def __init__(self, space: CompositeSpace, matrix, *, validate: bool = True):
        matrix = as_complex(matrix)
        d = space.total_dim
        if matrix.shape != (d, d):
            raise DimensionMismatch(
                f"matrix of shape {matrix.shape} does not fit dimension {d}"
            )
        if validate:
            if not is_hermitian(matrix):
                raise NotAState("density matrix is not Hermitian")
            tr = np.trace(matrix).real
            if abs(tr - 1.0) > TRACE_ATOL:
                raise NotAState(f"trace {tr} deviates from 1 beyond {TRACE_ATOL}")
            lo = np.linalg.eigvalsh(matrix).min()
            if lo < EIGENVALUE_FLOOR:
                raise NotAState(f"negative eigenvalue {lo} below {EIGENVALUE_FLOOR}")
        matrix.flags.writeable = False
        self.space = space
        self.matrix = matrix

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def __repr__(self):
        return f"DensityMatrix(dims={self.space.factor_dims})"


class HermitianOperator:
    """A dense Hermitian matrix with a write-once eigendecomposition cache.

    Instances are immutable; the cached eigensystem is computed at most once
    and may be shared freely between threads.
    """

    __slots__ = ("matrix", "space", "_eig")

    def __init__(self, matrix, space: CompositeSpace | None = None):
        matrix = as_complex(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got {matrix.shape}")
        if not is_hermitian(matrix):
            raise NotHermitian("matrix is not Hermitian within tolerance")
        if space is not None and space.total_dim != matrix.shape[0]:
            raise DimensionMismatch("space dimension does not match the matrix")
        matrix.flags.writeable = False
        self.matrix = matrix
        self.space = space
        self._eig = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigensystem(self):
        """Eigenvalues (ascending) and the unitary of column eigenvectors."""
        if self._eig is None:
            w, v = np.linalg.eigh(self.matrix)
            w.flags.writeable = False
            v.flags.writeable = False
            self._eig = (w, v)
        return self._eig

    def unitary(self, t: float) -> np.ndarray:
        """exp(-i H t) from the cached eigendecomposition."""
        w, v = self.eigensystem()
        return (v * np.exp(-1j * w * t)) @ v.conj().T


# ---------------------------------------------------------------------------
# dense operations


def kron(a, b) -> np.ndarray:
    """Tensor product of two matrices, guarded by the dimension budget."""
    a = as_complex(np.atleast_2d(a))
    b = as_complex(np.atleast_2d(b))
    if a.shape[0] * b.shape[0] > MAX_TOTAL_DIM or a.shape[1] * b.shape[1] > MAX_TOTAL_DIM:
        raise TruncationTooLarge(
            f"kron of {a.shape} and {b.shape} exceeds the {MAX_TOTAL_DIM} budget"
        )
    return np.kron(a, b)


def mkron(*matrices) -> np.ndarray:
    """Left-folded tensor product of several matrices."""
    out = as_complex(np.atleast_2d(matrices[0]))
    for m in matrices[1:]:
        out = kron(out, m)
    return out


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every factor not listed in ``keep``.

    The result lives on the subspace of kept factors, in their original
    order, and keeps the trace of the input exactly (up to rounding).
    """
    space = rho.space
    keep = _check_factors(space, keep)
    dims = space.factor_dims
    k = len(dims)
    arr = rho.matrix.reshape(dims + dims)
    row = list(_EINSUM_LETTERS[:k])
    col = [
        _EINSUM_LETTERS[k + i] if i in keep else _EINSUM_LETTERS[i] for i in range(k)
    ]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, arr)
    sub = space.subspace(keep)
    d = sub.total_dim
    return DensityMatrix(sub, reduced.reshape(d, d))


def partial_transpose(rho: DensityMatrix, factors) -> np.ndarray:
    """Transpose the listed factors of a density matrix.

    In components, transposing factor B means
    ``<j,k| rho^T_B |l,q> = <j,q| rho |l,k>``.  The result is Hermitian but
    generally not positive, so it is returned as a bare matrix.
    """
    space = rho.space
    factors = _check_factors(space, factors)
    dims = space.factor_dims
    k = len(dims)
    arr = rho.matrix.reshape(dims + dims)
    axes = list(range(2 * k))
    for f in factors:
        axes[f], axes[k + f] = axes[k + f], axes[f]
    d = space.total_dim
    return arr.transpose(axes).reshape(d, d)


def hermitian_eigen(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector unitary of a Hermitian matrix."""
    if isinstance(h, HermitianOperator):
        return h.eigensystem()
    h = as_complex(h)
    if not is_hermitian(h):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return np.linalg.eigh(h)


def unitary_from_hamiltonian(h, t: float) -> np.ndarray:
    """exp(-i H t) computed by spectral decomposition of Hermitian H."""
    if isinstance(h, HermitianOperator):
        return h.unitary(t)
    w, v = hermitian_eigen(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def trace_norm_hermitian(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    if isinstance(m, HermitianOperator):
        m = m.matrix
    m = as_complex(m)
    if not is_hermitian(m):
        raise NotHermitian("trace norm shortcut requires a Hermitian matrix")
    return float(np.abs(np.linalg.eigvalsh(m)).sum())


def clip_small_negatives(values: np.ndarray, floor: float = EIGENVALUE_FLOOR) -> np.ndarray:
    """Zero out eigenvalues that are negative only at roundoff scale."""
    values = np.asarray(values, dtype=float).copy()
    mask = (values < 0) & (values > floor)
    values[mask] = 0.0
    return values

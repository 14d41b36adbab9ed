"""Dense linear algebra for small composite quantum systems.

States and operators live on an ordered tensor product of low-dimensional
subsystems (two-level transmons, Fock-truncated resonator modes).  The
ordering of subsystems is fixed at construction and every module in this
package indexes against it; the largest space used anywhere is a few
hundred dimensions, so everything is dense complex numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

HERM_TOL = 1e-12


class DimensionError(ValueError):
    """Operator/state dimensions incompatible with the target space."""


class ValidationError(ValueError):
    """A mathematical invariant (hermiticity, trace, positivity) failed."""


def _max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


@dataclass(frozen=True)
class CompositeSpace:
    """Ordered tensor product of finite-dimensional subsystems.

    The first entry is the leftmost ket label, so for dims (2, 2, 2) the
    product state |abc> has flat index a*4 + b*2 + c.
    """

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"subsystem dims must be positive, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def index(self, occupations) -> int:
        """Flat index of the product basis state with the given occupations."""
        if len(occupations) != len(self.dims):
            raise DimensionError(
                f"need {len(self.dims)} occupation numbers, got {len(occupations)}"
            )
        for n, d in zip(occupations, self.dims):
            if not 0 <= n < d:
                raise DimensionError(f"occupation {n} outside subsystem dim {d}")
        return int(np.ravel_multi_index(tuple(occupations), self.dims))

    def basis_state(self, occupations) -> np.ndarray:
        """Product basis ket |n0 n1 ...> as a dense complex vector."""
        ket = np.zeros(self.total_dim, dtype=complex)
        ket[self.index(occupations)] = 1.0
        return ket


@dataclass(frozen=True)
class Operator:
    """Square matrix tied to a CompositeSpace."""

    space: CompositeSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator matrix must be square, got {m.shape}")
        if m.shape[0] != self.space.total_dim:
            raise DimensionError(
                f"matrix dim {m.shape[0]} != space dim {self.space.total_dim}"
            )
        object.__setattr__(self, "matrix", m)

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def is_hermitian(self, tol: float = HERM_TOL) -> bool:
        # relative max-norm test; scale floor of 1 covers the zero operator
        scale = max(1.0, _max_abs(self.matrix))
        return _max_abs(self.matrix - self.matrix.conj().T) <= tol * scale

    def __add__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def _check_same_space(self, other: "Operator"):
        if other.space.dims != self.space.dims:
            raise DimensionError(
                f"operator spaces differ: {self.space.dims} vs {other.space.dims}"
            )


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive-semidefinite state on a CompositeSpace."""

    space: CompositeSpace
    matrix: np.ndarray = field(repr=False)

    HERM_TOL = 1e-10
    TRACE_TOL = 1e-8
    EIG_TOL = -1e-8

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.total_dim, self.space.total_dim):
            raise DimensionError(
                f"density matrix shape {m.shape} != space dim {self.space.total_dim}"
            )
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_ket(cls, space: CompositeSpace, ket: np.ndarray) -> "DensityMatrix":
        ket = np.asarray(ket, dtype=complex)
        nrm = np.linalg.norm(ket)
        if nrm == 0:
            raise ValidationError("cannot build a state from the zero vector")
        ket = ket / nrm
        return cls(space, np.outer(ket, ket.conj()))

    def validate(self, eig_tol: float | None = None) -> "DensityMatrix":
        """Raise ValidationError unless hermitian, unit-trace and positive."""
        m = self.matrix
        if _max_abs(m - m.conj().T) > self.HERM_TOL * max(1.0, _max_abs(m)):
            raise ValidationError("density matrix is not hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > self.TRACE_TOL:
            raise ValidationError(f"density matrix trace {tr} deviates from 1")
        lo = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)))
        if lo < (self.EIG_TOL if eig_tol is None else eig_tol):
            raise ValidationError(f"density matrix has negative eigenvalue {lo}")
        return self


def embed(local_op: np.ndarray, space: CompositeSpace, position: int) -> Operator:
    """Lift an operator on one subsystem to the full space: I x ... x A x ... x I."""
    local = np.asarray(local_op, dtype=complex)
    if not 0 <= position < space.n_subsystems:
        raise DimensionError(f"position {position} outside {space.n_subsystems} subsystems")
    d = space.dims[position]
    if local.shape != (d, d):
        raise DimensionError(
            f"local operator shape {local.shape} != subsystem dim {d} at position {position}"
        )
    left = int(np.prod(space.dims[:position])) if position > 0 else 1
    right = int(np.prod(space.dims[position + 1:])) if position + 1 < space.n_subsystems else 1
    full = np.kron(np.kron(np.eye(left), local), np.eye(right))
    return Operator(space, full)


def destroy(dim: int) -> np.ndarray:
    """Truncated annihilation operator; for dim 2 this is sigma_minus."""
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return a


# transmon convention: index 0 = ground, index 1 = excited, sigma_z|1> = +|1>
SIGMA_MINUS = destroy(2)
SIGMA_PLUS = SIGMA_MINUS.conj().T
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
SIGMA_X = SIGMA_MINUS + SIGMA_PLUS


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def herm_expm(h: Operator, t: float) -> Operator:
    """Propagator exp(-i H t) of a hermitian generator, by eigendecomposition."""
    if not h.is_hermitian():
        raise ValidationError("herm_expm requires a hermitian generator")
    # eigh of the symmetrized matrix keeps the decomposition exactly unitary
    hm = (h.matrix + h.matrix.conj().T) / 2
    w, v = np.linalg.eigh(hm)
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    return Operator(h.space, u)


def dagger(m):
    if isinstance(m, Operator):
        return m.dag()
    return np.asarray(m).conj().T


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


def trace(op) -> complex:
    m = op.matrix if isinstance(op, (Operator, DensityMatrix)) else np.asarray(op)
    return complex(np.trace(m))


def expectation(rho: np.ndarray, ket: np.ndarray) -> float:
    """<psi|rho|psi> as a real number (imaginary part is integrator noise)."""
    return float(np.real(ket.conj() @ rho @ ket))

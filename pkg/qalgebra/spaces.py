"""
Composite Hilbert spaces and dense operator algebra.

Factor order is always (emitter 1, emitter 2[, cavity]); slots are
0-based indices into that order. Local emitter basis index 0 is the
excited state |e>, index 1 the ground state |g>, so the bare product
basis reads |e,e>, |e,g>, |g,e>, |g,g>.
"""
from dataclasses import dataclass
from functools import reduce
from math import prod

import numpy as np

from swingup.exceptions import DomainError, InvariantViolation, ShapeError

EXCITED = 0
GROUND = 1

EMITTER_SLOTS = (0, 1)
CAVITY_SLOT = 2

SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.conj().T
EXCITED_PROJECTOR = SIGMA_PLUS @ SIGMA_MINUS

OBSERVABLE_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-8
HERMITIAN_TOLERANCE = 1e-10
POSITIVITY_TOLERANCE = 1e-8
# Negative eigenvalues down to this are integrator noise on rank-deficient states and get clipped
CLIP_TOLERANCE = 1e-5


def _frozen(matrix):
    array = np.array(matrix, dtype=complex)
    array.setflags(write=False)
    return array


def _square(matrix, dim, what):
    if matrix.ndim != 2 or matrix.shape != (dim, dim):
        raise ShapeError(
            f"{what} must be {dim}x{dim}, got {matrix.shape}",
            expected=[dim, dim],
            actual=list(matrix.shape),
        )


@dataclass(frozen=True)
class HilbertSpace:
    factors: tuple

    def __post_init__(self):
        factors = tuple(int(f) for f in self.factors)
        object.__setattr__(self, 'factors', factors)
        if len(factors) not in (2, 3):
            raise ShapeError("a space holds two emitters and at most one cavity mode", factors=factors)
        if factors[0] != 2 or factors[1] != 2:
            raise ShapeError("emitter factors must be two-dimensional", factors=factors)
        if len(factors) == 3 and factors[2] < 2:
            raise ShapeError("cavity factor needs at least two Fock states", factors=factors)

    @classmethod
    def emitters(cls, n_fock=None):
        """Two emitters, plus a cavity truncated at ``n_fock`` photons if given."""
        if n_fock is None:
            return cls((2, 2))
        return cls((2, 2, n_fock + 1))

    @property
    def total_dim(self):
        return prod(self.factors)

    @property
    def has_cavity(self):
        return len(self.factors) == 3

    @property
    def n_fock(self):
        return self.factors[CAVITY_SLOT] - 1 if self.has_cavity else None

    def identity(self):
        return Operator(self, np.eye(self.total_dim), hermitian=True)


@dataclass(frozen=True, eq=False)
class Operator:
    space: HilbertSpace
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        matrix = _frozen(self.matrix)
        _square(matrix, self.space.total_dim, "operator matrix")
        object.__setattr__(self, 'matrix', matrix)
        if self.hermitian:
            deviation = hermitian_deviation(matrix)
            if deviation >= OBSERVABLE_TOLERANCE:
                raise InvariantViolation(
                    "observable is not Hermitian", metric='hermiticity', value=deviation,
                )

    def dag(self):
        return Operator(self.space, self.matrix.conj().T, hermitian=self.hermitian)

    def _check(self, other):
        if other.space != self.space:
            raise ShapeError(
                "operators live on different spaces",
                left=self.space.factors,
                right=other.space.factors,
            )

    def __matmul__(self, other):
        self._check(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def __add__(self, other):
        self._check(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self):
        return Operator(self.space, -self.matrix, hermitian=self.hermitian)

    def __mul__(self, scalar):
        return Operator(self.space, scalar * self.matrix)

    __rmul__ = __mul__

    def commutator(self, other):
        self._check(other)
        return Operator(self.space, self.matrix @ other.matrix - other.matrix @ self.matrix)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        matrix = _frozen(self.matrix)
        _square(matrix, self.space.total_dim, "density matrix")
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def pure(cls, space, ket):
        ket = np.asarray(ket, dtype=complex).reshape(-1)
        if ket.size != space.total_dim:
            raise ShapeError("state vector does not match the space", expected=space.total_dim, actual=ket.size)
        return cls(space, np.outer(ket, ket.conj()))

    def metrics(self):
        hermitian = hermitian_deviation(self.matrix)
        symmetric = 0.5 * (self.matrix + self.matrix.conj().T)
        return {
            'trace': abs(np.trace(self.matrix) - 1.0),
            'hermiticity': hermitian,
            'positivity': float(np.linalg.eigvalsh(symmetric)[0]),
        }

    def check(self, time=None, positivity_floor=POSITIVITY_TOLERANCE):
        """Raise ``InvariantViolation`` naming the first metric out of tolerance."""
        metrics = self.metrics()
        if metrics['trace'] > TRACE_TOLERANCE:
            raise InvariantViolation("trace drifted from 1", metric='trace', value=metrics['trace'], time=time)
        if metrics['hermiticity'] > HERMITIAN_TOLERANCE:
            raise InvariantViolation(
                "state lost Hermiticity", metric='hermiticity', value=metrics['hermiticity'], time=time,
            )
        if metrics['positivity'] < -positivity_floor:
            raise InvariantViolation(
                "state has a negative eigenvalue", metric='positivity', value=metrics['positivity'], time=time,
            )
        return metrics

    def projected(self):
        """Nearest unit-trace state: Hermitian part with negative eigenvalues set to zero."""
        values, vectors = np.linalg.eigh(0.5 * (self.matrix + self.matrix.conj().T))
        values = np.clip(values, 0.0, None)
        matrix = (vectors * values) @ vectors.conj().T
        return DensityMatrix(self.space, matrix / values.sum())

    def settled(self, time=None):
        """Checked state, projected back onto the physical states when it dipped below zero.

        Trace and Hermiticity use the ``check`` tolerances; a lowest
        eigenvalue between -CLIP_TOLERANCE and -POSITIVITY_TOLERANCE is
        clipped rather than reported.
        """
        metrics = self.check(time=time, positivity_floor=CLIP_TOLERANCE)
        if metrics['positivity'] < -POSITIVITY_TOLERANCE:
            return self.projected()
        return self


def hermitian_deviation(matrix):
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


def embed(local_op, slot, space):
    """Pad ``local_op`` with identities so it acts on factor ``slot`` of ``space``."""
    local = np.asarray(local_op, dtype=complex)
    if not 0 <= slot < len(space.factors):
        raise ShapeError(f"slot {slot} is outside the space", factors=space.factors)
    _square(local, space.factors[slot], f"local operator for slot {slot}")
    pieces = [local if index == slot else np.eye(dim) for index, dim in enumerate(space.factors)]
    return Operator(space, reduce(np.kron, pieces))


def annihilation(n_fock):
    """Truncated ladder operator on Fock states 0..n_fock."""
    if n_fock < 1:
        raise DomainError("Fock cutoff must be at least 1", n_fock=n_fock)
    return np.diag(np.sqrt(np.arange(1, n_fock + 1)), k=1).astype(complex)


def cavity_annihilation(space):
    if not space.has_cavity:
        raise ShapeError("space has no cavity mode", factors=space.factors)
    return embed(annihilation(space.n_fock), CAVITY_SLOT, space)


def photon_number_operator(space):
    a = cavity_annihilation(space)
    return Operator(space, a.matrix.conj().T @ a.matrix, hermitian=True)


def raising(emitter, space):
    return embed(SIGMA_PLUS, EMITTER_SLOTS[emitter], space)


def lowering(emitter, space):
    return embed(SIGMA_MINUS, EMITTER_SLOTS[emitter], space)


def basis_ket(space, emitter1, emitter2, photons=0):
    """Product ket with local indices (0 = e, 1 = g) and ``photons`` in the mode."""
    ket = np.zeros(space.total_dim, dtype=complex)
    index = emitter1 * 2 + emitter2
    if space.has_cavity:
        index = index * space.factors[CAVITY_SLOT] + photons
    ket[index] = 1.0
    return ket


def expectation(op, rho):
    if op.space != rho.space:
        raise ShapeError("operator and state live on different spaces", operator=op.space.factors,
                         state=rho.space.factors)
    return complex(np.einsum('ij,ji->', op.matrix, rho.matrix))


def partial_trace(rho, keep):
    """Reduced matrix on the factors in ``keep`` (ascending slot order)."""
    factors = list(rho.space.factors)
    keep = sorted(set(keep))
    if any(not 0 <= slot < len(factors) for slot in keep):
        raise ShapeError("partial trace slot outside the space", keep=keep, factors=factors)
    tensor = np.asarray(rho.matrix).reshape(factors + factors)
    remaining = len(factors)
    for slot in reversed(range(len(factors))):
        if slot in keep:
            continue
        tensor = np.trace(tensor, axis1=slot, axis2=slot + remaining)
        remaining -= 1
    dim = prod(factors[slot] for slot in keep)
    return tensor.reshape(dim, dim)


def emitter_block(rho):
    """4x4 emitter state with any cavity traced out."""
    if rho.space.has_cavity:
        return partial_trace(rho, EMITTER_SLOTS)
    return np.asarray(rho.matrix)

"""Operators, states, and Heisenberg evolution for dichotomic-observable models.

Conventions (hbar = 1 throughout):
    * Heisenberg evolution   A(t) = exp(iHt) A exp(-iHt).
    * Spin precession uses   H = (omega/2) axis.sigma,
      so omega * (tj - ti) is the Bloch rotation angle between two
      time-separated copies of the measured observable.

All wrapper types are frozen dataclasses holding read-only complex arrays;
every operation returns new values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HERMITIAN_TOL",
    "PSD_TOL",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "DichotomicObservable",
    "State",
    "Hamiltonian",
    "Projector",
    "pauli_observable",
    "evolve_heisenberg",
    "propagator",
    "projector",
    "density_from_bloch",
    "expectation",
    "real_expectation",
    "sample_state",
]

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

PAULI_X.setflags(write=False)
PAULI_Y.setflags(write=False)
PAULI_Z.setflags(write=False)


def _as_square_matrix(value, what: str) -> np.ndarray:
    m = np.array(value, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {m.shape}")
    m.setflags(write=False)
    return m


def _check_hermitian(m: np.ndarray, what: str, tol: float = HERMITIAN_TOL) -> None:
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise ValueError(f"{what} is not Hermitian: max |M - M^dag| = {dev:.3e} > {tol:.0e}")


def matrix(value) -> np.ndarray:
    """Unwrap an operator-carrying value (or pass a bare array through)."""
    inner = getattr(value, "matrix", value)
    return np.asarray(inner, dtype=complex)


@dataclass(frozen=True, eq=False)
class DichotomicObservable:
    """A Hermitian involution (eigenvalues +/-1) on a 2..8 dimensional space."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_square_matrix(self.matrix, "observable")
        d = m.shape[0]
        if not 2 <= d <= 8:
            raise ValueError(f"observable dimension must be in 2..8, got {d}")
        _check_hermitian(m, "observable")
        dev = float(np.max(np.abs(m @ m - np.eye(d))))
        if dev > HERMITIAN_TOL:
            raise ValueError(
                f"observable is not an involution: max |Q^2 - 1| = {dev:.3e} > {HERMITIAN_TOL:.0e}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class State:
    """Density matrix: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_square_matrix(self.matrix, "state")
        _check_hermitian(m, "state")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"state must have unit trace, got trace {tr}")
        lo = float(np.min(np.linalg.eigvalsh(m)))
        if lo < -PSD_TOL:
            raise ValueError(f"state is not positive semidefinite: min eigenvalue {lo:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hermitian generator of the dynamics."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_square_matrix(self.matrix, "Hamiltonian")
        _check_hermitian(m, "Hamiltonian")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_square_matrix(self.matrix, "projector")
        _check_hermitian(m, "projector")
        dev = float(np.max(np.abs(m @ m - m)))
        if dev > HERMITIAN_TOL:
            raise ValueError(f"projector is not idempotent: max |P^2 - P| = {dev:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(float(np.trace(self.matrix).real)))


def pauli_observable(axis) -> DichotomicObservable:
    """Spin observable axis.sigma for a unit 3-vector axis.

    Args:
        axis: real 3-vector with Euclidean norm 1 (within 1e-12).

    Returns:
        The qubit observable axis[0]*X + axis[1]*Y + axis[2]*Z.
    """
    a = np.asarray(axis, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"axis must be a real 3-vector, got shape {a.shape}")
    norm = float(np.linalg.norm(a))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"axis must be a unit vector: norm {norm!r} != 1")
    return DichotomicObservable(a[0] * PAULI_X + a[1] * PAULI_Y + a[2] * PAULI_Z)


def propagator(H: Hamiltonian, t: float) -> np.ndarray:
    """Unitary exp(iHt), computed by spectral decomposition of H."""
    # H is frozen, so its decomposition can be reused across all times
    eig = getattr(H, "_eig", None)
    if eig is None:
        eig = np.linalg.eigh(matrix(H))
        object.__setattr__(H, "_eig", eig)
    w, v = eig
    return (v * np.exp(1j * w * float(t))) @ v.conj().T


def heisenberg_matrix(A, H: Hamiltonian, t: float) -> np.ndarray:
    """exp(iHt) A exp(-iHt) for a bare operator matrix."""
    a = matrix(A)
    # one scenario evolves the same operator at the same few times over and
    # over; cache per Hamiltonian, keyed by operator content
    cache = getattr(H, "_heis", None)
    if cache is None:
        cache = {}
        object.__setattr__(H, "_heis", cache)
    key = (a.tobytes(), float(t))
    hit = cache.get(key)
    if hit is not None:
        return hit
    u = propagator(H, t)
    out = u @ a @ u.conj().T
    out.setflags(write=False)
    if len(cache) < 256:
        cache[key] = out
    return out


def evolve_heisenberg(Q: DichotomicObservable, H: Hamiltonian, t: float) -> DichotomicObservable:
    """Heisenberg-picture observable at time t: exp(iHt) Q exp(-iHt)."""
    m = heisenberg_matrix(Q, H, t)
    # re-symmetrize to keep validation honest against float drift
    return DichotomicObservable(0.5 * (m + m.conj().T))


def projector(Q: DichotomicObservable, s: int) -> Projector:
    """Eigenprojector (1 + s Q)/2 onto the outcome-s subspace, s in {+1, -1}."""
    if s not in (+1, -1):
        raise ValueError(f"outcome sign must be +1 or -1, got {s!r}")
    return Projector(0.5 * (np.eye(Q.dim) + s * Q.matrix))


def density_from_bloch(r) -> State:
    """Qubit density matrix (1 + r.sigma)/2 for a Bloch vector with |r| <= 1."""
    v = np.asarray(r, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"Bloch vector must be a real 3-vector, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if norm > 1.0 + 1e-12:
        raise ValueError(f"Bloch vector must satisfy |r| <= 1: norm {norm!r}")
    m = 0.5 * (np.eye(2) + v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z)
    return State(m)


def expectation(rho: State, A) -> complex:
    """Tr(A rho). Real within float error when A is Hermitian."""
    a = matrix(A)
    r = matrix(rho)
    if a.shape != r.shape:
        raise ValueError(f"operator shape {a.shape} does not match state shape {r.shape}")
    return complex(np.trace(a @ r))


def real_expectation(rho: State, A) -> float:
    """Tr(A rho) for Hermitian A, with a guard on the imaginary part."""
    val = expectation(rho, A)
    if abs(val.imag) > 1e-9:
        raise ValueError(f"expectation of a supposedly Hermitian operator has Im = {val.imag:.3e}")
    return val.real


def sample_state(seed: int, kind: str = "pure-haar", dim: int = 2) -> State:
    """Deterministic random state.

    kind "pure-haar": Haar-random pure state in the given dimension.
    kind "mixed-ball": qubit state drawn uniformly from the Bloch ball
    (dim must be 2).
    """
    rng = np.random.default_rng(seed)
    if kind == "pure-haar":
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        return State(np.outer(psi, psi.conj()))
    if kind == "mixed-ball":
        if dim != 2:
            raise ValueError(f"mixed-ball sampling is defined for dim 2, got {dim}")
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        radius = rng.uniform() ** (1.0 / 3.0)
        return density_from_bloch(radius * direction)
    raise ValueError(f"unknown state kind {kind!r}; expected 'pure-haar' or 'mixed-ball'")

from __future__ import annotations

import numpy as np

from mrbench import DichotomicObservable, Hamiltonian, State, pauli_observable

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def unit3(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def rand_dichotomic(rng: np.random.Generator, dim: int) -> DichotomicObservable:
    # random +/-1 spectrum in a Haar-random eigenbasis; involutive by construction
    u = haar_unitary(rng, dim)
    signs = rng.choice([-1.0, 1.0], size=dim)
    return DichotomicObservable(u @ np.diag(signs) @ u.conj().T)


def rand_state(rng: np.random.Generator, dim: int) -> State:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return State(rho / np.trace(rho).real)


def rand_hamiltonian(rng: np.random.Generator, dim: int, scale: float = 2.0) -> Hamiltonian:
    a = rng.normal(size=(dim, dim), scale=scale) + 1j * rng.normal(size=(dim, dim), scale=scale)
    return Hamiltonian(0.5 * (a + a.conj().T))


def rand_qubit_model(rng: np.random.Generator):
    """Random precession ingredients: (rho, Q, H, omega) with H = (omega/2) n.sigma."""
    rho = rand_state(rng, 2)
    q_axis = unit3(rng)
    h_axis = unit3(rng)
    omega = float(rng.uniform(0.1, 4.0))
    Q = pauli_observable(q_axis)
    H = Hamiltonian(0.5 * omega * pauli_observable(h_axis).matrix)
    return rho, Q, H, omega

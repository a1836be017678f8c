from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg

from conftest import SX, SY, SZ, rand_dichotomic, rand_hamiltonian, rand_state, unit3
from mrbench import (
    DichotomicObservable,
    Hamiltonian,
    State,
    density_from_bloch,
    evolve_heisenberg,
    expectation,
    pauli_observable,
    projector,
    propagator,
    sample_state,
)


def test_pauli_observable_z_axis() -> None:
    q = pauli_observable((0, 0, 1))
    assert np.allclose(q.matrix, SZ)
    assert q.dim == 2


def test_pauli_observable_x_axis() -> None:
    q = pauli_observable((1, 0, 0))
    assert np.allclose(q.matrix, SX)


def test_pauli_observable_rejects_non_unit() -> None:
    with pytest.raises(ValueError, match="norm"):
        pauli_observable((0, 0, 2))


def test_pauli_observable_generic_axis_involutive() -> None:
    rng = np.random.default_rng(1)
    for _ in range(20):
        q = pauli_observable(unit3(rng))
        assert np.allclose(q.matrix, q.matrix.conj().T, atol=1e-12)
        assert np.linalg.norm(q.matrix @ q.matrix - np.eye(2)) < 1e-12


def test_dichotomic_rejects_non_involutive() -> None:
    with pytest.raises(ValueError):
        DichotomicObservable(2.0 * SZ)


def test_dichotomic_rejects_non_hermitian() -> None:
    with pytest.raises(ValueError):
        DichotomicObservable(np.array([[1, 1], [0, -1]], dtype=complex))


def test_state_validation() -> None:
    with pytest.raises(ValueError):
        State(np.diag([0.6, 0.6]))  # trace 1.2
    with pytest.raises(ValueError):
        State(np.diag([1.5, -0.5]))  # negative eigenvalue
    with pytest.raises(ValueError):
        State(np.array([[0.5, 0.5], [0.0, 0.5]]))  # not Hermitian


def test_hamiltonian_requires_hermitian() -> None:
    with pytest.raises(ValueError):
        Hamiltonian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_projector_basis_cases() -> None:
    qz = pauli_observable((0, 0, 1))
    assert np.allclose(projector(qz, 1).matrix, np.diag([1.0, 0.0]))
    assert np.allclose(projector(qz, -1).matrix, np.diag([0.0, 1.0]))
    qx = pauli_observable((1, 0, 0))
    assert np.allclose(projector(qx, 1).matrix, 0.5 * np.ones((2, 2)))


def test_projector_rejects_bad_sign() -> None:
    qz = pauli_observable((0, 0, 1))
    with pytest.raises(ValueError):
        projector(qz, 0)


def test_projector_completeness_random() -> None:
    rng = np.random.default_rng(2)
    for dim in (2, 3, 4, 5):
        for _ in range(10):
            q = rand_dichotomic(rng, dim)
            total = projector(q, 1).matrix + projector(q, -1).matrix
            assert np.linalg.norm(total - np.eye(dim)) < 1e-12
            p = projector(q, 1).matrix
            assert np.linalg.norm(p @ p - p) < 1e-12


def test_density_from_bloch_cases() -> None:
    assert np.allclose(density_from_bloch((0, 0, 0)).matrix, 0.5 * np.eye(2))
    plus_y = density_from_bloch((0, 1, 0))
    assert abs(expectation(plus_y, SY).real - 1.0) < 1e-12
    assert abs(np.trace(plus_y.matrix @ plus_y.matrix).real - 1.0) < 1e-12  # pure
    with pytest.raises(ValueError):
        density_from_bloch((0, 0, 2))


def test_expectation_cases() -> None:
    plus_z = density_from_bloch((0, 0, 1))
    assert abs(expectation(plus_z, SZ) - 1.0) < 1e-12
    mixed = State(0.5 * np.eye(2))
    assert abs(expectation(mixed, SZ)) < 1e-12
    with pytest.raises(ValueError):
        expectation(plus_z, np.eye(3))


def test_evolve_heisenberg_closed_form_rotation() -> None:
    # Q = sigma_z under H = (omega/2) sigma_x with the e^{iHt} Q e^{-iHt}
    # convention rotates as cos(wt) sigma_z + sin(wt) sigma_y
    qz = pauli_observable((0, 0, 1))
    omega = 1.3
    h = Hamiltonian(0.5 * omega * SX)
    for t in (0.0, 0.4, 1.0, 2.5, 3.9):
        got = evolve_heisenberg(qz, h, t).matrix
        want = np.cos(omega * t) * SZ + np.sin(omega * t) * SY
        assert np.linalg.norm(got - want) < 1e-12


def test_evolve_heisenberg_matches_expm_oracle() -> None:
    # independent route: dense matrix exponential instead of eigendecomposition
    rng = np.random.default_rng(3)
    for dim in (2, 3, 4):
        for _ in range(5):
            q = rand_dichotomic(rng, dim)
            h = rand_hamiltonian(rng, dim)
            t = float(rng.uniform(-2, 2))
            u = scipy.linalg.expm(1j * h.matrix * t)
            want = u @ q.matrix @ u.conj().T
            got = evolve_heisenberg(q, h, t).matrix
            assert np.linalg.norm(got - want) < 1e-10


def test_evolve_identity_at_t0() -> None:
    rng = np.random.default_rng(4)
    q = rand_dichotomic(rng, 3)
    h = rand_hamiltonian(rng, 3)
    assert np.allclose(evolve_heisenberg(q, h, 0.0).matrix, q.matrix, atol=1e-12)


def test_evolve_commuting_hamiltonian() -> None:
    qz = pauli_observable((0, 0, 1))
    h = Hamiltonian(SZ)
    for t in (0.3, 1.7, 5.0):
        assert np.allclose(evolve_heisenberg(qz, h, t).matrix, SZ, atol=1e-12)


def test_evolve_rejects_dimension_mismatch() -> None:
    qz = pauli_observable((0, 0, 1))
    with pytest.raises(ValueError):
        evolve_heisenberg(qz, Hamiltonian(np.eye(3)), 1.0)


def test_evolution_preserves_involution_and_spectrum() -> None:
    rng = np.random.default_rng(5)
    for dim in (2, 3, 5, 6):
        q = rand_dichotomic(rng, dim)
        h = rand_hamiltonian(rng, dim)
        for t in rng.uniform(-4, 4, size=4):
            qt = evolve_heisenberg(q, h, float(t))
            assert np.linalg.norm(qt.matrix @ qt.matrix - np.eye(dim)) < 1e-10
            assert np.linalg.norm(qt.matrix - qt.matrix.conj().T) < 1e-12
            eigs = np.sort(np.linalg.eigvalsh(qt.matrix))
            assert np.all(np.abs(np.abs(eigs) - 1.0) < 1e-10)


def test_propagator_matches_expm() -> None:
    rng = np.random.default_rng(6)
    for dim in (2, 4):
        h = rand_hamiltonian(rng, dim)
        for t in (0.0, 0.8, -1.6):
            want = scipy.linalg.expm(1j * h.matrix * t)
            assert np.linalg.norm(propagator(h, t) - want) < 1e-10


def test_sample_state_deterministic() -> None:
    a = sample_state(1, kind="pure-haar")
    b = sample_state(1, kind="pure-haar")
    assert np.array_equal(a.matrix, b.matrix)


def test_sample_state_seed_sensitivity() -> None:
    a = sample_state(1, kind="pure-haar")
    b = sample_state(2, kind="pure-haar")
    # trace distance > 0
    assert 0.5 * np.sum(np.abs(np.linalg.eigvalsh(a.matrix - b.matrix))) > 1e-3


def test_sample_state_mixed_ball() -> None:
    for seed in range(20):
        rho = sample_state(seed, kind="mixed-ball")
        eigs = np.linalg.eigvalsh(rho.matrix)
        assert np.all(eigs >= -1e-12)
        assert np.all(eigs <= 1.0 + 1e-12)
    with pytest.raises(ValueError):
        sample_state(0, kind="mixed-ball", dim=3)


def test_sample_state_pure_haar_dims() -> None:
    for dim in (2, 3, 5):
        rho = sample_state(7, kind="pure-haar", dim=dim)
        assert rho.dim == dim
        assert abs(np.trace(rho.matrix @ rho.matrix).real - 1.0) < 1e-12


def test_sample_state_unknown_kind() -> None:
    with pytest.raises(ValueError, match="kind"):
        sample_state(0, kind="thermal")


def test_rand_state_helper_valid() -> None:
    rng = np.random.default_rng(8)
    for dim in (2, 3):
        rho = rand_state(rng, dim)
        assert abs(np.trace(rho.matrix).real - 1.0) < 1e-12

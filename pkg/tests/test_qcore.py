"""Core linear-algebra operations, checked against loop-level oracles."""

import numpy as np
import pytest

from contextsim.qcore import (
    I2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    check_density_matrix,
    expectation,
    partial_transpose,
    pm_projectors,
    projector,
    random_density_matrix,
    tensor,
)
from contextsim.state_catalog import catalog, density, get_state


def kron_oracle(a, b):
    """Index-arithmetic Kronecker product, independent of np.kron."""
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da * db, da * db), dtype=complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                for l in range(db):
                    out[i * db + k, j * db + l] = a[i, j] * b[k, l]
    return out


def trace_oracle(m):
    return sum(m[i, i] for i in range(m.shape[0]))


def test_tensor_identity():
    assert np.array_equal(tensor(I2, I2), np.eye(4))


def test_tensor_diagonal():
    assert np.array_equal(tensor(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]).astype(complex))


def test_tensor_z_x_against_oracle():
    got = tensor(SIGMA_Z, SIGMA_X)
    assert np.array_equal(got, kron_oracle(SIGMA_Z, SIGMA_X))
    assert got[0, 1] == 1.0
    assert got[2, 3] == -1.0


def test_tensor_random_against_oracle():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert np.allclose(tensor(a, b), kron_oracle(a, b), atol=1e-14)


def test_tensor_associativity():
    rng = np.random.default_rng(1)
    for _ in range(5):
        a, b, c = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
        assert np.allclose(tensor(a, tensor(b, c)), tensor(tensor(a, b), c), atol=1e-13)


def test_expectation_traceless_on_maximally_mixed():
    assert expectation(np.eye(4) / 4, tensor(SIGMA_Z, SIGMA_Z)) == pytest.approx(0.0, abs=1e-12)


def test_expectation_bell_state():
    rho = density(get_state("psi_1"))
    assert expectation(rho, tensor(SIGMA_Z, SIGMA_Z)) == pytest.approx(1.0, abs=1e-12)


def test_expectation_path_superposition():
    rho = density(get_state("psi_14"))
    assert expectation(rho, tensor(SIGMA_X, I2)) == pytest.approx(1.0, abs=1e-12)


def test_expectation_matches_trace_oracle():
    rng = np.random.default_rng(2)
    rho = random_density_matrix(rng)
    obs = tensor(SIGMA_Y, SIGMA_X)
    assert expectation(rho, obs) == pytest.approx(trace_oracle(rho @ obs).real, abs=1e-12)


def test_expectation_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        expectation(np.eye(4) / 4, SIGMA_Z)


def test_expectation_identity_is_one_for_catalog():
    for spec in catalog():
        assert expectation(density(spec), np.eye(4)) == pytest.approx(1.0, abs=1e-12)


def test_pm_projectors_sigma_z():
    p_plus, p_minus = pm_projectors(SIGMA_Z)
    assert np.allclose(p_plus, np.diag([1, 0]), atol=1e-15)
    assert np.allclose(p_minus, np.diag([0, 1]), atol=1e-15)


def test_pm_projectors_sigma_x():
    p_plus, p_minus = pm_projectors(SIGMA_X)
    assert np.allclose(p_plus, 0.5 * np.array([[1, 1], [1, 1]]), atol=1e-15)
    assert np.allclose(p_minus, 0.5 * np.array([[1, -1], [-1, 1]]), atol=1e-15)


def test_pm_projectors_gamma_against_eigh_oracle():
    gamma = tensor(SIGMA_Y, SIGMA_Y)
    p_plus, p_minus = pm_projectors(gamma)

    # Oracle: spectral projectors from an eigendecomposition.
    eigvals, eigvecs = np.linalg.eigh(gamma)
    plus_oracle = sum(np.outer(eigvecs[:, i], eigvecs[:, i].conj())
                      for i in range(4) if eigvals[i] > 0)
    assert np.allclose(p_plus, plus_oracle, atol=1e-12)

    assert np.trace(p_plus).real == pytest.approx(2.0, abs=1e-12)
    psi_1 = get_state("psi_1").pure_ket
    assert np.linalg.norm(p_plus @ psi_1) == pytest.approx(0.0, abs=1e-12)


def test_pm_projectors_algebra():
    for obs in (SIGMA_Z, SIGMA_X, tensor(SIGMA_Y, SIGMA_Y), tensor(SIGMA_Z, SIGMA_X)):
        p_plus, p_minus = pm_projectors(obs)
        eye = np.eye(obs.shape[0])
        assert np.max(np.abs(p_plus + p_minus - eye)) < 1e-12
        assert np.max(np.abs(p_plus @ p_minus)) < 1e-12
        assert np.max(np.abs(p_plus @ p_plus - p_plus)) < 1e-12
        assert np.max(np.abs(p_minus @ p_minus - p_minus)) < 1e-12


def test_pm_projectors_rejects_non_involution():
    with pytest.raises(ValueError, match="involution"):
        pm_projectors(np.diag([1.0, 2.0]))


def test_partial_transpose_product_state_invariant():
    rho = density(get_state("psi_8"))
    pt = partial_transpose(rho)
    assert np.allclose(pt, rho, atol=1e-15)
    assert np.linalg.eigvalsh(pt)[0] >= -1e-12


def test_partial_transpose_bell_state_min_eig():
    pt = partial_transpose(density(get_state("psi_1")))
    assert np.linalg.eigvalsh(pt)[0] == pytest.approx(-0.5, abs=1e-12)


def test_partial_transpose_maximally_mixed():
    rho = np.eye(4, dtype=complex) / 4
    assert np.array_equal(partial_transpose(rho), rho)


def test_partial_transpose_is_exact_involution():
    rng = np.random.default_rng(3)
    rho = random_density_matrix(rng)
    assert np.array_equal(partial_transpose(partial_transpose(rho)), rho)


def test_partial_transpose_elementwise_oracle():
    rng = np.random.default_rng(4)
    rho = random_density_matrix(rng)
    pt = partial_transpose(rho)
    for s in range(2):
        for p in range(2):
            for s2 in range(2):
                for p2 in range(2):
                    assert pt[2 * s + p, 2 * s2 + p2] == rho[2 * s + p2, 2 * s2 + p]


def test_partial_transpose_preserves_hermiticity_and_trace():
    rng = np.random.default_rng(5)
    rho = random_density_matrix(rng)
    pt = partial_transpose(rho)
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-12
    assert pt.trace() == pytest.approx(rho.trace())


def test_check_density_matrix_rejects_bad_inputs():
    with pytest.raises(ValueError, match="Hermitian"):
        check_density_matrix(np.eye(4) / 4 + 1j * np.diag([1e-6, 0, 0, 0]))
    with pytest.raises(ValueError, match="trace"):
        check_density_matrix(np.eye(4) / 2)
    bad = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError, match="negative eigenvalue"):
        check_density_matrix(bad)


def test_random_density_matrices_are_valid():
    rng = np.random.default_rng(6)
    for _ in range(25):
        check_density_matrix(random_density_matrix(rng))


def test_projector_is_rank_one():
    psi = get_state("psi_16").pure_ket
    p = projector(psi)
    assert np.trace(p).real == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(p @ p, p, atol=1e-12)

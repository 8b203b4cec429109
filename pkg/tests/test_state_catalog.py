"""Catalog construction and entanglement classifiers.

The CHSH classifier is cross-checked against a direct multi-start
maximization over measurement settings, independent of the closed-form
correlation-matrix criterion.
"""

from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import minimize

from contextsim.qcore import SIGMA_X, SIGMA_Y, SIGMA_Z, check_density_matrix, projector, tensor
from contextsim.state_catalog import (
    catalog,
    chsh_max,
    correlation_matrix,
    density,
    entanglement_report,
    get_state,
    ppt_min_eig,
    state_index,
)

SQ2 = np.sqrt(2.0)


def chsh_oracle(rho, starts=24, seed=0):
    """Best CHSH value found by direct optimization over measurement settings.

    Settings are unit vectors a, a', b, b'; for fixed b, b' the optimum over
    a, a' is |T(b+b')| + |T(b-b')|, which is then maximized numerically over
    the four angles of b and b'.
    """
    t = correlation_matrix(rho)

    def direction(theta, phi):
        return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])

    def negated(x):
        b = direction(x[0], x[1])
        bp = direction(x[2], x[3])
        return -(np.linalg.norm(t @ (b + bp)) + np.linalg.norm(t @ (b - bp)))

    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(starts):
        x0 = rng.uniform(0, np.pi, size=4)
        res = minimize(negated, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
        best = max(best, -res.fun)
    return best


def test_catalog_has_twenty_states_in_order():
    specs = catalog()
    assert len(specs) == 20
    assert [s.id for s in specs] == (
        [f"psi_{i}" for i in range(1, 5)] + [f"rho_{i}" for i in range(5, 8)]
        + [f"psi_{i}" for i in range(8, 20)] + ["rho_20"]
    )
    assert state_index("psi_1") == 0
    assert state_index("rho_20") == 19


def test_catalog_entry_definitions():
    psi_1 = get_state("psi_1")
    assert np.allclose(psi_1.pure_ket, np.array([1, 0, 0, 1]) / SQ2)
    psi_13 = get_state("psi_13")
    assert np.allclose(psi_13.pure_ket, np.array([1, 1j, 0, 0]) / SQ2)
    rho_20 = get_state("rho_20")
    assert rho_20.mixture == tuple((f"psi_{j}", Fraction(1, 4)) for j in range(1, 5))


def test_mixture_weights_are_exact_rationals():
    assert dict(get_state("rho_5").mixture)["psi_1"] == Fraction(13, 16)
    assert dict(get_state("rho_6").mixture)["psi_2"] == Fraction(1, 8)
    assert dict(get_state("rho_7").mixture)["psi_4"] == Fraction(3, 16)
    for spec in catalog():
        if spec.kind == "mixed":
            assert sum(w for _, w in spec.mixture) == 1


def test_unknown_state_id():
    with pytest.raises(KeyError, match="unknown state id"):
        get_state("psi_21")


def test_density_psi8_is_basis_projector():
    rho = density(get_state("psi_8"))
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 0] = 1.0
    assert np.allclose(rho, expected, atol=0)


def test_density_rho20_is_maximally_mixed():
    # Oracle: the four Bell-type kets are complete, so the sum of their
    # projectors over 4 is I/4.
    acc = np.zeros((4, 4), dtype=complex)
    for j in range(1, 5):
        acc += projector(get_state(f"psi_{j}").pure_ket) / 4.0
    assert np.allclose(acc, np.eye(4) / 4.0, atol=1e-15)
    assert np.max(np.abs(density(get_state("rho_20")) - np.eye(4) / 4.0)) < 1e-12


def test_density_rho5_spectrum():
    eigs = np.sort(np.linalg.eigvalsh(density(get_state("rho_5"))))[::-1]
    assert np.allclose(eigs, [13 / 16, 1 / 16, 1 / 16, 1 / 16], atol=1e-12)


def test_all_catalog_densities_are_valid():
    for spec in catalog():
        check_density_matrix(density(spec))


def test_bell_states_orthonormal():
    kets = [get_state(f"psi_{j}").pure_ket for j in range(1, 5)]
    gram = np.array([[np.vdot(u, v) for v in kets] for u in kets])
    assert np.max(np.abs(gram - np.eye(4))) < 1e-12


def test_chsh_max_bell_state():
    assert chsh_max(density(get_state("psi_1"))) == pytest.approx(2.0 * SQ2, abs=1e-12)


def test_chsh_max_rho6_is_sqrt2():
    assert chsh_max(density(get_state("rho_6"))) == pytest.approx(SQ2, abs=1e-12)


def test_chsh_max_maximally_mixed_is_zero():
    assert chsh_max(np.eye(4, dtype=complex) / 4.0) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("state_id", ["psi_1", "rho_5", "rho_6", "psi_8", "psi_16"])
def test_chsh_max_against_optimization_oracle(state_id):
    rho = density(get_state(state_id))
    assert chsh_max(rho) == pytest.approx(chsh_oracle(rho), abs=1e-6)


def test_correlation_matrix_of_bell_state():
    t = correlation_matrix(density(get_state("psi_1")))
    assert np.allclose(t, np.diag([1.0, -1.0, 1.0]), atol=1e-12)


def test_ppt_min_eig_values():
    assert ppt_min_eig(density(get_state("rho_7"))) == pytest.approx(1 / 16, abs=1e-12)
    assert ppt_min_eig(density(get_state("rho_6"))) == pytest.approx(-1 / 8, abs=1e-12)
    assert ppt_min_eig(density(get_state("rho_5"))) == pytest.approx(-5 / 16, abs=1e-12)
    for state_id in ("psi_8", "psi_12", "psi_17"):
        assert ppt_min_eig(density(get_state(state_id))) >= -1e-12


def test_classification_partition():
    """The four classes: maximal CHSH, CHSH-violating, entangled-no-CHSH,
    separable; product states and the maximally mixed state are separable."""
    reports = {spec.id: entanglement_report(density(spec)) for spec in catalog()}
    for j in range(1, 5):
        assert reports[f"psi_{j}"].chsh_max == pytest.approx(2.0 * SQ2, abs=1e-9)
        assert reports[f"psi_{j}"].violates_chsh
    assert reports["rho_5"].violates_chsh
    assert not reports["rho_5"].is_ppt_separable
    assert not reports["rho_6"].violates_chsh
    assert not reports["rho_6"].is_ppt_separable
    assert reports["rho_7"].is_ppt_separable
    for j in range(8, 20):
        assert reports[f"psi_{j}"].is_ppt_separable
        assert not reports[f"psi_{j}"].violates_chsh
    assert reports["rho_20"].is_ppt_separable
    assert reports["rho_20"].chsh_max == pytest.approx(0.0, abs=1e-12)

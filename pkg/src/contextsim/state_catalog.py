"""Benchmark catalog of 20 two-qubit photon states and entanglement classifiers.

The catalog holds the four Bell states of the path/polarization pair, three
Bell-diagonal mixtures of them, twelve pure product states and the maximally
mixed state.  Mixture weights are kept as exact rationals until matrix
assembly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .qcore import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    check_density_matrix,
    normalize,
    partial_transpose,
    projector,
    tensor,
)

_SQ2 = np.sqrt(2.0)


@dataclass(frozen=True)
class StateSpec:
    """Catalog entry: either a pure ket or a rational mixture of other entries."""

    id: str
    kind: str  # "pure" | "mixed"
    definition: str
    pure_ket: np.ndarray | None = None
    mixture: tuple[tuple[str, Fraction], ...] | None = None


@dataclass(frozen=True)
class EntanglementReport:
    """CHSH reachability and positivity of the partial transpose."""

    chsh_max: float
    ppt_min_eig: float
    violates_chsh: bool
    is_ppt_separable: bool


def _pure(id_: str, definition: str, amplitudes) -> StateSpec:
    ket = normalize(np.array(amplitudes, dtype=complex))
    return StateSpec(id=id_, kind="pure", definition=definition, pure_ket=ket)


def _mixed(id_: str, definition: str, weights: dict[str, Fraction]) -> StateSpec:
    total = sum(weights.values())
    if total != 1:
        raise ValueError(f"mixture weights of {id_} sum to {total}, expected 1")
    return StateSpec(id=id_, kind="mixed", definition=definition,
                     mixture=tuple(weights.items()))


def _bell_mixture(id_: str, w1: Fraction, rest: Fraction) -> StateSpec:
    definition = f"{w1}|psi_1><psi_1| + {rest}(|psi_2><psi_2| + |psi_3><psi_3| + |psi_4><psi_4|)"
    return _mixed(id_, definition, {"psi_1": w1, "psi_2": rest, "psi_3": rest, "psi_4": rest})


@lru_cache(maxsize=1)
def catalog() -> tuple[StateSpec, ...]:
    """All 20 benchmark states, in fixed reporting order."""
    return (
        _pure("psi_1", "(|tH> + |rV>)/sqrt(2)", [1, 0, 0, 1]),
        _pure("psi_2", "(|tH> - |rV>)/sqrt(2)", [1, 0, 0, -1]),
        _pure("psi_3", "(|tV> + |rH>)/sqrt(2)", [0, 1, 1, 0]),
        _pure("psi_4", "(|tV> - |rH>)/sqrt(2)", [0, 1, -1, 0]),
        _bell_mixture("rho_5", Fraction(13, 16), Fraction(1, 16)),
        _bell_mixture("rho_6", Fraction(5, 8), Fraction(1, 8)),
        _bell_mixture("rho_7", Fraction(7, 16), Fraction(3, 16)),
        _pure("psi_8", "|tH>", [1, 0, 0, 0]),
        _pure("psi_9", "|tV>", [0, 1, 0, 0]),
        _pure("psi_10", "|rH>", [0, 0, 1, 0]),
        _pure("psi_11", "|rV>", [0, 0, 0, 1]),
        _pure("psi_12", "|t>(|H> + |V>)/sqrt(2)", [1, 1, 0, 0]),
        _pure("psi_13", "|t>(|H> + i|V>)/sqrt(2)", [1, 1j, 0, 0]),
        _pure("psi_14", "(|t> + |r>)|H>/sqrt(2)", [1, 0, 1, 0]),
        _pure("psi_15", "(|t> + i|r>)|H>/sqrt(2)", [1, 0, 1j, 0]),
        _pure("psi_16", "(|t> + |r>)(|H> + |V>)/2", [1, 1, 1, 1]),
        _pure("psi_17", "(|t> + i|r>)(|H> + |V>)/2", [1, 1, 1j, 1j]),
        _pure("psi_18", "(|t> + |r>)(|H> + i|V>)/2", [1, 1j, 1, 1j]),
        _pure("psi_19", "(|t> + i|r>)(|H> + i|V>)/2", [1, 1j, 1j, -1]),
        _mixed("rho_20", "(1/4) sum_j |psi_j><psi_j|, j = 1..4",
               {k: Fraction(1, 4) for k in ("psi_1", "psi_2", "psi_3", "psi_4")}),
    )


@lru_cache(maxsize=1)
def _by_id() -> dict[str, StateSpec]:
    return {spec.id: spec for spec in catalog()}


def get_state(id_: str) -> StateSpec:
    try:
        return _by_id()[id_]
    except KeyError:
        raise KeyError(f"unknown state id: {id_!r}") from None


def state_index(id_: str) -> int:
    """Position of a state in the catalog (used to derive RNG streams)."""
    for i, spec in enumerate(catalog()):
        if spec.id == id_:
            return i
    raise KeyError(f"unknown state id: {id_!r}")


def density(spec: StateSpec) -> np.ndarray:
    """Density matrix of a catalog entry; mixtures expand over their components."""
    if spec.kind == "pure":
        rho = projector(spec.pure_ket)
    else:
        rho = np.zeros((4, 4), dtype=complex)
        for component_id, weight in spec.mixture:
            component = get_state(component_id)
            if component.kind != "pure":
                raise ValueError(f"mixture component {component_id!r} is not pure")
            rho += float(weight) * projector(component.pure_ket)
    return check_density_matrix(rho)


def correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """3x3 matrix T_ij = Tr(rho s_i x s_j) over the Pauli axes (x, y, z)."""
    paulis = (SIGMA_X, SIGMA_Y, SIGMA_Z)
    t = np.empty((3, 3))
    for i, si in enumerate(paulis):
        for j, sj in enumerate(paulis):
            t[i, j] = np.trace(rho @ tensor(si, sj)).real
    return t


def chsh_max(rho: np.ndarray) -> float:
    """Largest CHSH value reachable with any measurement settings.

    Equals 2*sqrt(m1 + m2) where m1 >= m2 are the two largest eigenvalues of
    T^T T, T being the Pauli correlation matrix of the state.
    """
    t = correlation_matrix(rho)
    eigs = np.sort(np.linalg.eigvalsh(t.T @ t))
    return float(2.0 * np.sqrt(max(eigs[-1] + eigs[-2], 0.0)))


def ppt_min_eig(rho: np.ndarray) -> float:
    """Minimum eigenvalue of the partial transpose (negative iff entangled)."""
    return float(np.linalg.eigvalsh(partial_transpose(rho))[0])


def entanglement_report(rho: np.ndarray) -> EntanglementReport:
    chsh = chsh_max(rho)
    ppt = ppt_min_eig(rho)
    return EntanglementReport(
        chsh_max=chsh,
        ppt_min_eig=ppt,
        violates_chsh=chsh > 2.0 + 1e-9,
        is_ppt_separable=ppt >= -1e-10,
    )

"""Dense complex linear algebra on the 4-dimensional path/polarization space.

A single photon carries two qubits: the spatial-path qubit (transmitted ``t``
or reflected ``r``) and the polarization qubit (horizontal ``H`` or vertical
``V``).  Every module in this package uses the same fixed product basis

    (|t,H>, |t,V>, |r,H>, |r,V>)

with the path as the slow (first) tensor factor, ``|0>_s = |t>``,
``|1>_s = |r>``, ``|0>_p = |H>``, ``|1>_p = |V>``.
"""

from __future__ import annotations

import numpy as np

DIM = 4

#: Mode names in basis order.
MODE_LABELS = ("tH", "tV", "rH", "rV")

#: Tolerance for structural identities (hermiticity, trace, projector algebra).
ATOL_STRUCT = 1e-12
#: Tolerance for derived spectral quantities.
ATOL_SPECTRAL = 1e-10

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` on the path factor and ``b`` on polarization."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def is_hermitian(m: np.ndarray, atol: float = ATOL_STRUCT) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def is_unitary(m: np.ndarray, atol: float = ATOL_SPECTRAL) -> bool:
    m = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= atol)


def normalize(psi: np.ndarray) -> np.ndarray:
    """Return ``psi`` scaled to unit norm."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    n = np.linalg.norm(psi)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return psi / n


def projector(psi: np.ndarray) -> np.ndarray:
    """Rank-1 projector |psi><psi| for a normalized state vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def check_ket(psi: np.ndarray, atol: float = ATOL_STRUCT) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(psi) - 1.0) > atol:
        raise ValueError(f"ket is not normalized: |norm - 1| = {abs(np.linalg.norm(psi) - 1.0):.3e}")
    return psi


def check_density_matrix(rho: np.ndarray, atol_struct: float = ATOL_STRUCT,
                         atol_eig: float = 1e-10) -> np.ndarray:
    """Validate hermiticity, unit trace and positivity of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"expected a {DIM}x{DIM} matrix, got {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > atol_struct:
        raise ValueError(f"density matrix is not Hermitian: deviation {herm:.3e}")
    tr = rho.trace()
    if abs(tr - 1.0) > atol_struct:
        raise ValueError(f"density matrix trace is {tr}, expected 1")
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    if min_eig < -atol_eig:
        raise ValueError(f"density matrix has negative eigenvalue {min_eig:.3e}")
    return rho


def expectation(rho: np.ndarray, obs: np.ndarray, atol: float = ATOL_SPECTRAL) -> float:
    """Expectation value Tr(rho O) of a Hermitian observable.

    The imaginary residue of the trace is asserted to be below ``atol`` and
    discarded.
    """
    rho = np.asarray(rho, dtype=complex)
    obs = np.asarray(obs, dtype=complex)
    if rho.shape != obs.shape:
        raise ValueError(f"dimension mismatch: state {rho.shape} vs observable {obs.shape}")
    value = np.trace(rho @ obs)
    if abs(value.imag) > atol:
        raise ValueError(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def pm_projectors(obs: np.ndarray, atol: float = ATOL_SPECTRAL) -> tuple[np.ndarray, np.ndarray]:
    """Spectral projectors (P_plus, P_minus) of a +/-1-valued observable.

    Requires ``obs`` to be a Hermitian involution (O^2 = I); the projectors are
    then the closed forms (I +/- O)/2.
    """
    obs = np.asarray(obs, dtype=complex)
    if not is_hermitian(obs, atol):
        raise ValueError("observable is not Hermitian")
    eye = np.eye(obs.shape[0], dtype=complex)
    invol = np.max(np.abs(obs @ obs - eye))
    if invol > atol:
        raise ValueError(f"observable is not an involution: |O^2 - I| = {invol:.3e}")
    return (eye + obs) / 2.0, (eye - obs) / 2.0


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose on the polarization factor only.

    Pure reindexing; applying it twice returns the original matrix exactly.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"expected a {DIM}x{DIM} matrix, got {rho.shape}")
    r = rho.reshape(2, 2, 2, 2)            # indices (s, p, s', p')
    return r.transpose(0, 3, 2, 1).reshape(DIM, DIM)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix from the Ginibre ensemble."""
    g = rng.normal(size=(DIM, DIM)) + 1j * rng.normal(size=(DIM, DIM))
    rho = g @ g.conj().T
    return rho / rho.trace()

"""Dense complex linear algebra over the two-atom state space.

States live in a 25-dimensional space: five levels (0, 1, p, r, d) per
atom, flat index 5*c + t with c the control level and t the target level.
"""

import numpy as np

from .constants import DIM2, L0, L1, LEVELS, N_LEVELS

HERM_TOL = 1e-10


def kron(a, b):
    """Tensor product of two operators."""
    return np.kron(np.asarray(a), np.asarray(b))


def is_hermitian(m, tol=HERM_TOL):
    m = np.asarray(m)
    scale = max(np.abs(m).max(), 1.0)
    return np.abs(m - m.conj().T).max() <= tol * scale


def herm_eig(m):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
    matrix.  Non-Hermitian input is rejected."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("herm_eig: input is not Hermitian")
    vals, vecs = np.linalg.eigh(m)
    return vals, vecs


def flat_index(c_level, t_level):
    """Flat two-atom basis index for (control level, target level)."""
    if not (0 <= c_level < N_LEVELS and 0 <= t_level < N_LEVELS):
        raise ValueError("level index out of range")
    return N_LEVELS * c_level + t_level


def level_pair(index):
    """Inverse of flat_index."""
    if not 0 <= index < DIM2:
        raise ValueError("flat index out of range")
    return divmod(index, N_LEVELS)


def basis_label(index):
    c, t = level_pair(index)
    return LEVELS[c] + LEVELS[t]


def basis_state(index, dim=DIM2):
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


# flat indices of the computational basis |00>, |01>, |10>, |11>
COMPUTATIONAL = (
    flat_index(L0, L0),
    flat_index(L0, L1),
    flat_index(L1, L0),
    flat_index(L1, L1),
)


def computational_state(j):
    """j-th two-qubit basis state (j in 0..3, binary order) as a 25-vector."""
    return basis_state(COMPUTATIONAL[j])


def density_from_ket(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def check_density(rho, herm_tol=1e-10, trace_tol=1e-8, eig_tol=1e-8):
    """Validate Hermiticity, unit trace and positivity of a density matrix.

    Returns (hermitian_ok, trace_ok, positive_ok)."""
    rho = np.asarray(rho)
    herm_ok = is_hermitian(rho, herm_tol)
    trace_ok = abs(np.trace(rho).real - 1.0) <= trace_tol
    min_eig = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    return herm_ok, trace_ok, min_eig >= -eig_tol

import numpy as np
import pytest

from stirapcz import qla
from stirapcz.constants import DIM2, N_LEVELS


def test_kron_matches_numpy():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(4, 4))
    assert np.allclose(qla.kron(a, b), np.kron(a, b))


def test_flat_index_round_trip():
    for i in range(N_LEVELS):
        for j in range(N_LEVELS):
            assert qla.level_pair(qla.flat_index(i, j)) == (i, j)


def test_basis_labels():
    assert qla.basis_label(qla.flat_index(0, 1)) == "01"
    assert len({qla.basis_label(k) for k in range(DIM2)}) == DIM2


def test_computational_states_orthonormal():
    vecs = [qla.computational_state(j) for j in range(4)]
    gram = np.array([[v.conj() @ w for w in vecs] for v in vecs])
    assert np.allclose(gram, np.eye(4))


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        qla.herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_herm_eig_diagonalizes():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = m + m.conj().T
    vals, vecs = qla.herm_eig(h)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.conj().T, h)


def test_check_density_flags():
    rho = qla.density_from_ket(qla.computational_state(2))
    assert qla.check_density(rho) == (True, True, True)
    bad = rho.copy()
    bad[0, 0] = -0.5
    herm, trace, pos = qla.check_density(bad)
    assert not (trace and pos)

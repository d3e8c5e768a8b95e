import numpy as np
import pytest
from scipy import stats

from luinv.sampling import (
    apply_local,
    basis_state,
    bell_state,
    haar_random_pure,
    haar_random_unitary,
    local_unitaries,
    random_orthogonal,
    random_real_pure,
    separable_state,
    standard_complex_normal,
    substream,
)
from luinv.tensor import pure_to_density

N_MC = 2000


def test_pure_state_shape_and_norm():
    psi = haar_random_pure([2], substream(3))
    assert abs(np.linalg.norm(psi.amp) - 1) < 1e-12
    assert haar_random_pure([10, 10, 10], substream(42)).amp.shape == (1000,)


def test_haar_pure_first_moment():
    p = np.array([abs(haar_random_pure([2], substream(1, k)).amp[0]) ** 2 for k in range(N_MC)])
    # |a_0|^2 is uniform on [0, 1] for a Haar qubit: variance 1/12
    sigma = np.sqrt(1 / 12 / N_MC)
    assert abs(p.mean() - 0.5) < 3 * sigma


def test_haar_pure_is_unitarily_invariant_in_distribution():
    # mean density matrix of Haar states is I/d, even after a fixed rotation
    V = haar_random_unitary(3, substream(99))
    acc = np.zeros((3, 3), dtype=complex)
    for k in range(N_MC):
        acc += pure_to_density(apply_local(haar_random_pure([3], substream(2, k)), [V])).mat
    assert np.abs(acc / N_MC - np.eye(3) / 3).max() < 0.03


def test_unitary_examples():
    u = haar_random_unitary(1, substream(0))
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-15
    U = haar_random_unitary(4, substream(5))
    assert np.abs(U.conj().T @ U - np.eye(4)).max() <= 1e-13


def test_unitary_first_moment():
    x = np.array([abs(haar_random_unitary(2, substream(3, k))[0, 0]) ** 2 for k in range(N_MC)])
    assert abs(x.mean() - 0.5) < 3 * np.sqrt(1 / 12 / N_MC)


def test_unitary_eigenphases_uniform():
    phases = np.concatenate([np.angle(np.linalg.eigvals(haar_random_unitary(6, substream(4, k))))
                             for k in range(500)])
    assert stats.kstest(phases, stats.uniform(loc=-np.pi, scale=2 * np.pi).cdf).pvalue > 0.01


def test_phase_fix_removes_qr_bias():
    uniform = stats.uniform(loc=-np.pi, scale=2 * np.pi).cdf
    naive = [np.angle(np.linalg.qr(standard_complex_normal(substream(6, k), (2, 2)))[0][0, 0])
             for k in range(500)]
    fixed = [np.angle(haar_random_unitary(2, substream(6, k))[0, 0]) for k in range(500)]
    assert stats.kstest(naive, uniform).pvalue < 1e-6
    assert stats.kstest(fixed, uniform).pvalue > 0.01


def test_orthogonal_examples():
    O = random_orthogonal(2, substream(7))
    assert abs(abs(np.linalg.det(O)) - 1) <= 1e-13
    assert np.abs(O.T @ O - np.eye(2)).max() <= 1e-13
    assert O.dtype == float


def test_orthogonal_first_moment():
    x = np.array([random_orthogonal(2, substream(8, k))[0, 0] ** 2 for k in range(N_MC)])
    # O_00 = cos(theta), theta uniform: E cos^2 = 1/2, Var = 1/8
    assert abs(x.mean() - 0.5) < 3 * np.sqrt(1 / 8 / N_MC)


def test_determinism_and_independence():
    a = haar_random_pure([4, 4], substream(11)).amp
    b = haar_random_pure([4, 4], substream(11)).amp
    c = haar_random_pure([4, 4], substream(12)).amp
    assert np.array_equal(a, b)
    assert not np.any(a == c)
    s1 = substream(5, 0).standard_normal(100)
    s2 = substream(5, 1).standard_normal(100)
    assert not np.any(s1 == s2)


def test_real_pure_state_is_real():
    psi = random_real_pure([2, 3], substream(1))
    assert np.all(psi.amp.imag == 0)


def test_local_unitaries_dims():
    Us = local_unitaries([2, 3, 1], substream(3))
    assert [U.shape for U in Us] == [(2, 2), (3, 3), (1, 1)]


def test_separable_state_examples():
    psi = separable_state("bi", [bell_state(), basis_state([2], 0)])
    expected = np.zeros(8)
    expected[0] = expected[6] = 1 / np.sqrt(2)
    np.testing.assert_allclose(psi.amp, expected, atol=1e-16)
    z = basis_state([2], 0)
    assert np.array_equal(separable_state("tri", [z, z, z]).amp, basis_state([2, 2, 2], 0).amp)
    rng = substream(9)
    fs = [haar_random_pure([d], rng) for d in (2, 3, 4)]
    assert abs(np.linalg.norm(separable_state("tri", fs).amp) - 1) < 1e-14


def test_separable_state_rejects_mismatch():
    z = basis_state([2], 0)
    with pytest.raises(ValueError):
        separable_state("bi", [z, z, z])
    with pytest.raises(ValueError):
        separable_state("tri", [bell_state(), z])
    with pytest.raises(ValueError):
        separable_state("quad", [z])

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from luinv.sampling import bell_state, basis_state, haar_random_pure, substream
from luinv.tensor import (
    DensityMatrix,
    PureState,
    ccn_norm,
    load_state,
    partial_transpose,
    pure_to_density,
    realign,
    reduced_density,
    save_state,
    state_from_json,
    state_to_json,
    swap_operator,
)

from conftest import brute_reduced, random_matrix


def brute_pt(M, d1, d2):
    out = np.empty_like(M)
    for i in range(d1):
        for a in range(d2):
            for j in range(d1):
                for b in range(d2):
                    # <i|<b| M^T2 |j>|a> = <i|<a| M |j>|b>
                    out[i * d2 + b, j * d2 + a] = M[i * d2 + a, j * d2 + b]
    return out


def brute_realign(M, d1, d2):
    out = np.empty((d1 * d1, d2 * d2), dtype=M.dtype)
    for i in range(d1):
        for j in range(d1):
            for a in range(d2):
                for b in range(d2):
                    out[i * d1 + j, a * d2 + b] = M[i * d2 + a, j * d2 + b]
    return out


def test_pure_to_density_basis_and_bell():
    assert np.array_equal(pure_to_density(basis_state([2], 0)).mat, np.diag([1, 0]))
    rho = pure_to_density(bell_state()).mat
    expected = np.zeros((4, 4))
    for r in (0, 3):
        for c in (0, 3):
            expected[r, c] = 0.5
    np.testing.assert_allclose(rho, expected, atol=1e-15)


def test_pure_state_purity(rng):
    rho = pure_to_density(haar_random_pure([3, 2], rng))
    assert abs(rho.purity() - 1) < 1e-12
    assert np.linalg.matrix_rank(rho.mat, tol=1e-10) == 1


def test_validation():
    with pytest.raises(ValueError, match="normalized"):
        PureState([2], [1, 1])
    with pytest.raises(ValueError, match="invalid dimension"):
        PureState([0, 2], [])
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix([2], [[0.5, 1], [0, 0.5]])
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix([2], np.eye(2))


def test_reduced_density_examples():
    np.testing.assert_allclose(reduced_density(bell_state(), [0]).mat, np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(reduced_density(basis_state([2, 2], 0), [1]).mat, np.diag([1, 0]))


@pytest.mark.parametrize("keep", [[0], [1, 0], [2, 0], [0, 2, 1], [1]])
def test_reduced_density_matches_enumeration(rng, keep):
    dims = (2, 3, 2)
    psi = haar_random_pure(dims, rng)
    rho = pure_to_density(psi)
    ref = brute_reduced(rho.mat, dims, keep)
    np.testing.assert_allclose(reduced_density(psi, keep).mat, ref, atol=1e-14)
    np.testing.assert_allclose(reduced_density(rho, keep).mat, ref, atol=1e-14)


def test_reduced_density_order_is_swap_conjugation(rng):
    psi = haar_random_pure((2, 3, 2), rng)
    r02 = reduced_density(psi, [0, 2]).mat
    r20 = reduced_density(psi, [2, 0]).mat
    S = swap_operator(2)
    assert np.array_equal(S @ r02 @ S, r20)


def test_reduced_density_of_product_state(rng):
    a = haar_random_pure([3], rng)
    b = haar_random_pure([2], rng)
    psi = PureState([3, 2], np.kron(a.amp, b.amp))
    np.testing.assert_allclose(reduced_density(psi, [1]).mat, np.outer(b.amp, b.amp.conj()), atol=1e-15)


def test_reduced_density_bad_labels(rng):
    psi = haar_random_pure((2, 2), rng)
    with pytest.raises(ValueError, match="duplicate"):
        reduced_density(psi, [0, 0])
    with pytest.raises(ValueError, match="out of range"):
        reduced_density(psi, [2])


def test_partial_transpose_bell_spectrum():
    rho = pure_to_density(bell_state())
    # oracle: hand-written partial transpose of the Bell projector
    oracle = np.zeros((4, 4))
    oracle[0, 0] = oracle[3, 3] = 0.5
    oracle[1, 2] = oracle[2, 1] = 0.5
    pt = partial_transpose(rho, 1)
    np.testing.assert_allclose(pt, oracle, atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(pt), [-0.5, 0.5, 0.5, 0.5], atol=1e-14)


def test_partial_transpose_product_state(rng):
    A = pure_to_density(haar_random_pure([2], rng)).mat
    B = reduced_density(haar_random_pure([3, 2], rng), [0]).mat
    pt = partial_transpose(np.kron(A, B), 1, dims=(2, 3))
    np.testing.assert_allclose(pt, np.kron(A, B.T), atol=1e-15)
    assert np.linalg.eigvalsh(pt).min() > -1e-12


@pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3), (3, 2), (1, 3)])
def test_partial_transpose_matches_enumeration(rng, d1, d2):
    M = random_matrix(rng, d1 * d2)
    np.testing.assert_array_equal(partial_transpose(M, 1, dims=(d1, d2)), brute_pt(M, d1, d2))
    # transposing the first factor equals full transpose of the second-factor PT
    np.testing.assert_array_equal(partial_transpose(M, 0, dims=(d1, d2)), brute_pt(M, d1, d2).T)


def test_partial_transpose_rejects_bad_shape():
    with pytest.raises(ValueError):
        partial_transpose(np.eye(5), 1, dims=(2, 2))
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4), 2, dims=(2, 2))


def test_realign_identity_and_sigma_x():
    np.testing.assert_array_equal(realign(np.eye(2), (2, 1)), np.array([[1], [0], [0], [1]]))
    sx = np.array([[0, 1], [1, 0]])
    np.testing.assert_array_equal(realign(sx, (2, 1)).ravel(), [0, 1, 1, 0])


@pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3), (3, 1)])
def test_realign_matches_enumeration(rng, d1, d2):
    M = random_matrix(rng, d1 * d2)
    np.testing.assert_array_equal(realign(M, (d1, d2)), brute_realign(M, d1, d2))


def test_realign_of_kron_is_rank_one(rng):
    A = random_matrix(rng, 2)
    B = random_matrix(rng, 2)
    R = realign(np.kron(A, B), (2, 2))
    np.testing.assert_allclose(R, np.outer(A.ravel(), B.ravel()), atol=1e-14)
    assert np.linalg.matrix_rank(R) == 1


def test_realign_rejects_bad_shape():
    with pytest.raises(ValueError):
        realign(np.eye(6), (2, 2))


@given(d1=st.integers(1, 4), d2=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_rearrangements_permute_entries(d1, d2, seed):
    M = random_matrix(substream(seed), d1 * d2)
    key = lambda a: np.sort_complex(a.ravel())
    assert np.array_equal(key(partial_transpose(M, 1, dims=(d1, d2))), key(M))
    assert np.array_equal(key(realign(M, (d1, d2))), key(M))
    assert np.array_equal(partial_transpose(partial_transpose(M, 1, dims=(d1, d2)), 1, dims=(d1, d2)), M)


@given(d=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_realign_is_involution_for_square_blocks(d, seed):
    M = random_matrix(substream(seed), d * d)
    assert np.array_equal(realign(realign(M, (d, d)), (d, d)), M)


def test_ccn_norm_examples():
    assert ccn_norm(pure_to_density(basis_state([2, 2], 0))) == pytest.approx(1.0, abs=1e-14)
    assert ccn_norm(pure_to_density(bell_state())) == pytest.approx(2.0, abs=1e-14)
    assert ccn_norm(DensityMatrix([2, 2], np.eye(4) / 4)) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("d", [2, 3])
def test_ccn_norm_maximally_entangled(d):
    rho = pure_to_density(bell_state(d)).mat
    oracle = np.linalg.svd(brute_realign(rho, d, d), compute_uv=False).sum()
    assert abs(oracle - d) < 1e-12
    assert ccn_norm(rho, (d, d)) == pytest.approx(oracle, abs=1e-12)


def test_swap_operator():
    assert np.array_equal(swap_operator(1), [[1]])
    S = swap_operator(2)
    assert np.array_equal(S, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    S3 = swap_operator(3)
    assert np.array_equal(S3 @ S3, np.eye(9))
    assert np.array_equal(S3, S3.T)


def test_operations_are_deterministic(rng):
    psi = haar_random_pure((2, 3, 2), rng)
    assert np.array_equal(reduced_density(psi, [2, 1]).mat, reduced_density(psi, [2, 1]).mat)


def test_state_json_round_trip(tmp_path, rng):
    psi = haar_random_pure((2, 3), rng)
    f = tmp_path / "psi.json"
    save_state(psi, f)
    back = load_state(f)
    assert back.dims == psi.dims
    assert np.array_equal(back.amp, psi.amp)

    rho = reduced_density(haar_random_pure((2, 2, 2), rng), [0, 1])
    obj = state_to_json(rho)
    assert obj["kind"] == "mixed" and len(obj["rho"]) == 4
    assert np.array_equal(state_from_json(obj).mat, rho.mat)


def test_state_json_rejects_garbage():
    with pytest.raises(ValueError):
        state_from_json({"dims": [2], "kind": "weird"})
    with pytest.raises(ValueError):
        state_from_json({"kind": "pure", "amp": [[1, 0]]})

"""Seeded Haar-random states, unitaries and orthogonal matrices.

Every draw takes an explicit ``Generator``.  :func:`substream` derives one
from ``(seed, *keys)`` with the counter-based Philox bit generator, so sample
``k`` of a survey is reproducible no matter which worker computes it.
"""

from __future__ import annotations

import numpy as np

from .tensor import DensityMatrix, PureState

__all__ = [
    "substream",
    "standard_complex_normal",
    "haar_random_pure",
    "random_real_pure",
    "haar_random_unitary",
    "random_orthogonal",
    "local_unitaries",
    "apply_local",
    "product_state",
    "separable_state",
    "basis_state",
    "bell_state",
    "ghz_state",
]


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for the stream labelled ``(seed, *keys)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, keys)])))


def _rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return substream(rng)


def standard_complex_normal(rng, size) -> np.ndarray:
    """i.i.d. complex Gaussians with ``E|z|^2 = 1``."""
    rng = _rng(rng)
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


def haar_random_pure(dims, rng) -> PureState:
    """Haar-distributed pure state: a normalized complex Gaussian vector."""
    rng = _rng(rng)
    D = int(np.prod(dims))
    while True:
        z = standard_complex_normal(rng, D)
        norm = np.linalg.norm(z)
        if norm > 0:
            return PureState(dims, z / norm)


def random_real_pure(dims, rng) -> PureState:
    """Uniformly random state with real amplitudes (a rebit-type state)."""
    rng = _rng(rng)
    D = int(np.prod(dims))
    while True:
        x = rng.standard_normal(D)
        norm = np.linalg.norm(x)
        if norm > 0:
            return PureState(dims, x / norm)


def haar_random_unitary(d: int, rng) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix.

    ``Q`` is multiplied column-wise by the phases of ``diag(R)`` so the
    factorization is unique and the result exactly Haar distributed.
    """
    if d < 1:
        raise ValueError("d must be positive")
    Z = standard_complex_normal(rng, (d, d))
    Q, R = np.linalg.qr(Z)
    r = np.diagonal(R)
    return Q * (r / np.abs(r))


def random_orthogonal(d: int, rng) -> np.ndarray:
    """Haar-distributed real orthogonal matrix (Ginibre + QR + sign fix)."""
    if d < 1:
        raise ValueError("d must be positive")
    A = _rng(rng).standard_normal((d, d))
    Q, R = np.linalg.qr(A)
    return Q * np.sign(np.diagonal(R))


def local_unitaries(dims, rng, orthogonal: bool = False) -> list[np.ndarray]:
    rng = _rng(rng)
    draw = random_orthogonal if orthogonal else haar_random_unitary
    return [draw(d, rng) for d in dims]


def apply_local(state, unitaries):
    """Return ``(U_0 x ... x U_{N-1}) state`` (conjugated for density matrices)."""
    dims = state.dims
    if len(unitaries) != len(dims):
        raise ValueError("need one unitary per subsystem")
    if isinstance(state, PureState):
        t = state.tensor()
        for k, U in enumerate(unitaries):
            t = np.moveaxis(np.tensordot(U, t, axes=(1, k)), 0, k)
        return PureState(dims, t.ravel() / np.linalg.norm(t))
    W = unitaries[0]
    for U in unitaries[1:]:
        W = np.kron(W, U)
    rho = W @ state.mat @ W.conj().T
    return DensityMatrix(dims, 0.5 * (rho + rho.conj().T))


def product_state(factors) -> PureState:
    """Tensor product of pure states, in the given subsystem order."""
    dims: list[int] = []
    amp = np.ones(1, dtype=complex)
    for f in factors:
        dims.extend(f.dims)
        amp = np.kron(amp, f.amp)
    return PureState(dims, amp / np.linalg.norm(amp))


def separable_state(kind: str, factors) -> PureState:
    """Bi-separable ``|phi_12> x |chi_3>`` or tri-separable product state.

    ``kind="bi"`` expects a two-subsystem factor followed by a one-subsystem
    factor; ``kind="tri"`` expects three single-subsystem factors.
    """
    shapes = [len(f.dims) for f in factors]
    if kind == "bi":
        if shapes != [2, 1]:
            raise ValueError(f"bi-separable needs factors with 2 and 1 subsystems, got {shapes}")
    elif kind == "tri":
        if shapes != [1, 1, 1]:
            raise ValueError(f"tri-separable needs three single-subsystem factors, got {shapes}")
    else:
        raise ValueError(f"kind must be 'bi' or 'tri', not {kind!r}")
    return product_state(factors)


def basis_state(dims, index) -> PureState:
    """Computational basis state; `index` is a flat index or one digit per subsystem."""
    D = int(np.prod(dims))
    if not np.isscalar(index):
        index = int(np.ravel_multi_index(tuple(index), tuple(dims)))
    amp = np.zeros(D, dtype=complex)
    amp[index] = 1
    return PureState(dims, amp)


def bell_state(d: int = 2) -> PureState:
    """Maximally entangled ``sum_i |ii> / sqrt(d)``."""
    amp = np.eye(d, dtype=complex).ravel() / np.sqrt(d)
    return PureState((d, d), amp)


def ghz_state(n: int = 3, d: int = 2) -> PureState:
    amp = np.zeros(d**n, dtype=complex)
    for i in range(d):
        amp[sum(i * d**k for k in range(n))] = 1
    return PureState((d,) * n, amp / np.sqrt(d))

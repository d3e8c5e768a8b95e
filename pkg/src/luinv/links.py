"""Per-edge transformation matrices.

The general link from subsystem ``a`` to subsystem ``b`` is the realigned
partial transpose ``R(rho_{ba}^{T_a})``, a ``d_b**2 x d_a**2`` array.  For
qubits it is unitarily equivalent to the Pauli-basis link
``S_nm = 1/2 tr[rho_ab sigma_m x sigma_n]`` through the constant matrix
returned by :func:`u_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import DensityMatrix, PureState, reduced_density

__all__ = [
    "PAULI",
    "LinkMatrix",
    "link_matrix",
    "link_matrix_by_traces",
    "pauli_link_matrix",
    "u_matrix",
]

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
PAULI.setflags(write=False)

# imaginary noise allowed in the Pauli link before it is dropped
PAULI_IMAG_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class LinkMatrix:
    """``mat[(i,j), (a,b)] = rho_{to,from}[(i,b), (j,a)]``.

    Row pairs ``(i, j)`` run over the `to` subsystem and pack as
    ``i*d_to + j``; column pairs ``(a, b)`` pack as ``a*d_from + b``.
    """

    from_label: int
    to_label: int
    d_from: int
    d_to: int
    mat: np.ndarray

    def __post_init__(self):
        if self.mat.shape != (self.d_to**2, self.d_from**2):
            raise ValueError(
                f"link matrix shape {self.mat.shape} != ({self.d_to**2}, {self.d_from**2})"
            )

    @property
    def H(self) -> np.ndarray:
        return self.mat.conj().T


def _pair_marginal(state, from_label: int, to_label: int) -> DensityMatrix:
    if from_label == to_label:
        raise ValueError(f"a link needs two distinct subsystems, got {from_label} twice")
    if isinstance(state, (PureState, DensityMatrix)):
        return reduced_density(state, [to_label, from_label])
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def link_matrix(state, from_label: int, to_label: int) -> LinkMatrix:
    """Realigned partial transpose linking `from_label` to `to_label`.

    The pair marginal ``rho_{to,from}`` is taken internally, so `state` may
    have any number of subsystems.  Labels are 0-based.
    """
    rho = _pair_marginal(state, from_label, to_label)
    d_to, d_from = rho.dims
    # rho[i, b, j, a] -> link[i, j, a, b]
    t = rho.mat.reshape(d_to, d_from, d_to, d_from)
    mat = np.ascontiguousarray(np.transpose(t, (0, 2, 3, 1))).reshape(d_to**2, d_from**2)
    return LinkMatrix(from_label, to_label, d_from, d_to, mat)


def link_matrix_by_traces(state, from_label: int, to_label: int) -> np.ndarray:
    """Same link built element by element from ``tr[rho_{from,to} e_ab x e_ij^T]``.

    Costs one trace per entry; used as a cross-check for :func:`link_matrix`.
    """
    rho = reduced_density(state, [from_label, to_label]) if from_label != to_label else None
    if rho is None:
        raise ValueError(f"a link needs two distinct subsystems, got {from_label} twice")
    d_from, d_to = rho.dims
    out = np.empty((d_to**2, d_from**2), dtype=complex)
    e_from = np.zeros((d_from, d_from))
    e_to = np.zeros((d_to, d_to))
    for i in range(d_to):
        for j in range(d_to):
            e_to[:] = 0
            e_to[i, j] = 1
            for a in range(d_from):
                for b in range(d_from):
                    e_from[:] = 0
                    e_from[a, b] = 1
                    op = np.kron(e_from, e_to.T)
                    out[i * d_to + j, a * d_from + b] = np.trace(rho.mat @ op)
    return out


def pauli_link_matrix(rho12) -> np.ndarray:
    """Pauli-basis link ``S_nm = 1/2 tr[rho12 sigma_m x sigma_n]`` for two qubits.

    Returns a real 4x4 array indexed ``[n, m]``.  `rho12` is a two-qubit
    :class:`DensityMatrix` or :class:`PureState`; ``m`` acts on the first
    qubit (the link's source), ``n`` on the second.
    """
    if isinstance(rho12, PureState):
        rho12 = reduced_density(rho12, [0, 1])
    if not isinstance(rho12, DensityMatrix):
        raise TypeError("rho12 must be a DensityMatrix or PureState")
    if rho12.dims != (2, 2):
        raise ValueError(f"Pauli links need two qubits, got dims {list(rho12.dims)}")
    # tr[rho (s_m x s_n)] = sum rho[(i,a),(j,b)] s_m[j,i] s_n[b,a]
    r = rho12.mat.reshape(2, 2, 2, 2)
    S = 0.5 * np.einsum("iajb,mji,nba->nm", r, PAULI, PAULI)
    imag = np.max(np.abs(S.imag))
    if imag > PAULI_IMAG_TOL:
        raise ArithmeticError(f"Pauli link has imaginary residue {imag:.3e}; input not Hermitian?")
    return S.real.copy()


def u_matrix() -> np.ndarray:
    """Columns are the realigned identity and Pauli matrices, divided by sqrt(2).

    Element law ``<ji|U|m> = <j|sigma_m|i> / sqrt(2)``.
    """
    U = np.empty((4, 4), dtype=complex)
    for m in range(4):
        for j in range(2):
            for i in range(2):
                U[2 * j + i, m] = PAULI[m, j, i]
    return U / np.sqrt(2)

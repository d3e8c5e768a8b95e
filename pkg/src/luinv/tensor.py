"""States on multipartite Hilbert spaces and the elemental index rearrangements.

Composite indices are row-major over subsystem order: subsystem 0 is the most
significant digit, the last subsystem varies fastest.  Every reshape in this
package relies on that convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "HERMITIAN_TOL",
    "TRACE_TOL",
    "PSD_TOL",
    "PureState",
    "DensityMatrix",
    "pure_to_density",
    "as_density",
    "reduced_density",
    "partial_transpose",
    "realign",
    "ccn_norm",
    "swap_operator",
    "state_to_json",
    "state_from_json",
    "save_state",
    "load_state",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("dims must list at least one subsystem")
    if any(d < 1 for d in dims):
        raise ValueError(f"invalid dimension in {list(dims)}: every subsystem needs d >= 1")
    return dims


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector on ``H_{d_0} x ... x H_{d_{N-1}}``."""

    dims: tuple[int, ...]
    amp: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amp = _frozen(np.ravel(self.amp))
        if amp.size != int(np.prod(dims)):
            raise ValueError(f"amplitude length {amp.size} does not match dims {list(dims)}")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > TRACE_TOL:
            raise ValueError(f"state is not normalized (norm = {norm!r})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amp", amp)

    @classmethod
    def from_unnormalized(cls, dims, amp) -> "PureState":
        amp = np.asarray(amp, dtype=complex).ravel()
        return cls(dims, amp / np.linalg.norm(amp))

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        """Amplitudes as an array with one axis per subsystem."""
        return self.amp.reshape(self.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace operator with subsystem dimensions attached.

    Positivity is not checked on construction; call :meth:`is_psd`.
    """

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = _frozen(self.mat)
        D = int(np.prod(dims))
        if mat.shape != (D, D):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {list(dims)}")
        herm = np.max(np.abs(mat - mat.conj().T)) if D else 0.0
        if herm > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3e})")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"matrix trace is {tr!r}, expected 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.mat)[0])

    def is_psd(self, tol: float = PSD_TOL) -> bool:
        return self.min_eigenvalue() >= -tol

    def purity(self) -> float:
        return float(np.real(np.vdot(self.mat, self.mat)))


State = Union[PureState, DensityMatrix]


def pure_to_density(psi: PureState) -> DensityMatrix:
    """Return ``|psi><psi|``."""
    return DensityMatrix(psi.dims, np.outer(psi.amp, psi.amp.conj()))


def as_density(state: State) -> DensityMatrix:
    if isinstance(state, PureState):
        return pure_to_density(state)
    if isinstance(state, DensityMatrix):
        return state
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def _check_labels(labels: Sequence[int], n: int) -> list[int]:
    labels = [int(k) for k in labels]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate subsystem labels in {labels}")
    for k in labels:
        if not 0 <= k < n:
            raise ValueError(f"subsystem label {k} out of range for {n} subsystems")
    return labels


def reduced_density(state: State, keep: Sequence[int]) -> DensityMatrix:
    """Trace out everything not in `keep`, ordering the result as `keep`.

    Parameters
    ----------
    state : PureState or DensityMatrix
    keep : sequence of int
        0-based subsystem labels.  The order matters: ``keep=[1, 0]`` gives
        the marginal with subsystem 1 as the leading tensor factor, which is
        ``S rho_{01} S`` for the SWAP ``S``.

    Returns
    -------
    DensityMatrix
        Dimensions ``[dims[k] for k in keep]``.
    """
    n = state.n_subsystems
    keep = _check_labels(keep, n)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    traced = [k for k in range(n) if k not in keep]
    dims = state.dims
    kept_dims = tuple(dims[k] for k in keep)
    d_keep = int(np.prod(kept_dims))

    if isinstance(state, PureState):
        psi = np.transpose(state.tensor(), keep + traced).reshape(d_keep, -1)
        mat = psi @ psi.conj().T
    else:
        t = state.mat.reshape(dims + dims)
        perm = keep + traced
        t = np.transpose(t, perm + [n + k for k in perm])
        d_tr = int(np.prod([dims[k] for k in traced]))
        mat = np.einsum("iaja->ij", t.reshape(d_keep, d_tr, d_keep, d_tr))
    # Hermitize away rounding so the result passes the constructor check.
    mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(kept_dims, mat)


def partial_transpose(rho, subsystem: int = 1, dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose one tensor factor of an operator.

    For a bipartite operator and ``subsystem=1`` this is
    ``<i|<b| rho^T |j>|a> = <i|<a| rho |j>|b>``.

    `rho` may be a :class:`DensityMatrix` (its dims are used) or a plain
    square array, in which case `dims` is required.
    """
    if isinstance(rho, DensityMatrix):
        dims, mat = rho.dims, rho.mat
    else:
        if dims is None:
            raise ValueError("dims are required when rho is a plain array")
        dims = _check_dims(dims)
        mat = np.asarray(rho)
    n = len(dims)
    D = int(np.prod(dims))
    if mat.shape != (D, D):
        raise ValueError(f"matrix shape {mat.shape} does not match dims {list(dims)}")
    if not 0 <= subsystem < n:
        raise ValueError(f"subsystem {subsystem} out of range for {n} subsystems")
    axes = list(range(2 * n))
    axes[subsystem], axes[n + subsystem] = axes[n + subsystem], axes[subsystem]
    return np.transpose(mat.reshape(tuple(dims) * 2), axes).reshape(D, D)


def realign(mat, shape: tuple[int, int]) -> np.ndarray:
    """Realignment ``<i|<j| R(M) |a>|b> = <i|<a| M |j>|b>``.

    Parameters
    ----------
    mat : array_like, shape (d_row*d_col, d_row*d_col)
    shape : (d_row, d_col)
        Block structure of `mat` as an operator on ``H_{d_row} x H_{d_col}``.

    Returns
    -------
    ndarray, shape (d_row**2, d_col**2)
    """
    d_row, d_col = (int(d) for d in shape)
    if d_row < 1 or d_col < 1:
        raise ValueError(f"invalid bipartite shape {shape}")
    mat = np.asarray(mat)
    D = d_row * d_col
    if mat.shape != (D, D):
        raise ValueError(f"matrix shape {mat.shape} does not match bipartite shape {(d_row, d_col)}")
    t = mat.reshape(d_row, d_col, d_row, d_col)
    return np.transpose(t, (0, 2, 1, 3)).reshape(d_row * d_row, d_col * d_col)


def ccn_norm(rho, shape: tuple[int, int] | None = None) -> float:
    """Trace norm of the realigned matrix (the computable cross norm).

    Values above 1 certify entanglement; nothing is adjudicated here.
    """
    if isinstance(rho, DensityMatrix):
        if shape is None:
            if rho.n_subsystems != 2:
                raise ValueError("shape is required for a non-bipartite DensityMatrix")
            shape = rho.dims
        rho = rho.mat
    elif shape is None:
        raise ValueError("shape is required when rho is a plain array")
    return float(np.sum(np.linalg.svd(realign(rho, shape), compute_uv=False)))


def swap_operator(d: int) -> np.ndarray:
    """SWAP on ``H_d x H_d``: ``<lm|S|ij> = delta_lj delta_mi``."""
    d = int(d)
    if d < 1:
        raise ValueError("d must be positive")
    return np.eye(d * d).reshape(d, d, d, d).transpose(0, 1, 3, 2).reshape(d * d, d * d)


# -- state files ------------------------------------------------------------

def _encode(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _decode(obj) -> np.ndarray:
    a = np.asarray(obj, dtype=float)
    if a.shape[-1] != 2:
        raise ValueError("complex numbers must be encoded as [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def state_to_json(state: State) -> dict:
    if isinstance(state, PureState):
        return {"dims": list(state.dims), "kind": "pure", "amp": _encode(state.amp)}
    return {"dims": list(state.dims), "kind": "mixed", "rho": _encode(state.mat)}


def state_from_json(obj: dict) -> State:
    try:
        dims = obj["dims"]
        kind = obj.get("kind", "pure" if "amp" in obj else "mixed")
        if kind == "pure":
            return PureState(dims, _decode(obj["amp"]))
        if kind == "mixed":
            return DensityMatrix(dims, _decode(obj["rho"]))
    except KeyError as exc:
        raise ValueError(f"state file is missing field {exc}") from None
    raise ValueError(f"unknown state kind {kind!r}")


def save_state(state: State, path) -> None:
    with open(path, "w") as fh:
        # json writes floats with repr(), which round-trips doubles exactly.
        json.dump(state_to_json(state), fh)


def load_state(path) -> State:
    with open(path) as fh:
        return state_from_json(json.load(fh))

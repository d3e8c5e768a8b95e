"""Closed-path operators and the local-unitary invariants read off them.

A path ``(a_1, ..., a_K)`` is the loop ``a_1 -> a_2 -> ... -> a_K -> a_1``.
Its operator is the product of link matrices taken right to left,

    P = L(a_K -> a_1) ... L(a_2 -> a_3) L(a_1 -> a_2),

a square matrix of size ``d_{a_1}**2``.  Trace, spectrum and characteristic
polynomial of ``P`` are unchanged by local unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np
from scipy.optimize import linear_sum_assignment

from .links import link_matrix
from .tensor import PureState, State, partial_transpose, reduced_density, swap_operator

__all__ = [
    "NumericalError",
    "Path",
    "InvariantReport",
    "path_operator",
    "half_path_operator",
    "path_trace_invariant",
    "spectrum",
    "char_poly_coefficients",
    "is_retracing",
    "invariant_report",
    "conjugate_pairing_error",
    "two_tangle",
    "kempe_invariant",
    "pt_cube_trace",
    "swap_conjugation_error",
]

TRACE_IMAG_TOL = 1e-10
CHARPOLY_IMAG_TOL = 1e-9
PAIRING_TOL = 1e-9
RESIDUAL_TOL = 1e-8
DET_NEG_TOL = 1e-12
POSITIVITY_TOL = 1e-10


class NumericalError(ArithmeticError):
    """A result violated a property that holds exactly in exact arithmetic."""


@dataclass(frozen=True)
class Path:
    """Closed loop of 0-based subsystem labels.

    Labels may repeat, but never consecutively (the closing step included).
    """

    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(a) for a in self.labels)
        if len(labels) < 2:
            raise ValueError("a closed path needs at least two labels")
        if any(a < 0 for a in labels):
            raise ValueError(f"negative subsystem label in {labels}")
        for k, a in enumerate(labels):
            if a == labels[(k + 1) % len(labels)]:
                raise ValueError(f"path {list(labels)} repeats label {a} on consecutive steps")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def edges(self):
        """``(from, to)`` pairs in application order, closing edge last."""
        K = len(self.labels)
        return [(self.labels[k], self.labels[(k + 1) % K]) for k in range(K)]

    def rotated(self, shift: int) -> "Path":
        shift %= len(self.labels)
        return Path(self.labels[shift:] + self.labels[:shift])


def _as_path(path) -> Path:
    return path if isinstance(path, Path) else Path(tuple(path))


def _validate_for(state: State, path: Path):
    n = state.n_subsystems
    bad = [a for a in path.labels if a >= n]
    if bad:
        raise ValueError(f"path labels {bad} out of range for {n} subsystems")


def _chain(state: State, edges) -> np.ndarray:
    out = None
    for a, b in edges:
        L = link_matrix(state, a, b).mat
        out = L if out is None else L @ out
    return out


def path_operator(state: State, path) -> np.ndarray:
    """Product of links around `path`, read right to left."""
    path = _as_path(path)
    _validate_for(state, path)
    return _chain(state, path.edges())


def half_path_operator(state: State, path) -> np.ndarray:
    """Outbound product ``M`` of a retracing path, so that ``P = M^dagger M``."""
    path = _as_path(path)
    if not is_retracing(path):
        raise ValueError(f"path {list(path.labels)} is not fully retracing")
    _validate_for(state, path)
    L = len(path) // 2 + 1
    return _chain(state, path.edges()[: L - 1])


def path_trace_invariant(state: State, path) -> float:
    """Real trace of the path operator.

    Raises
    ------
    NumericalError
        If the imaginary part exceeds ``1e-10 * max(1, |tr P|)``.
    """
    t = np.trace(path_operator(state, path))
    _check_trace_real(t)
    return float(t.real)


def _check_trace_real(t: complex):
    if abs(t.imag) > TRACE_IMAG_TOL * max(1.0, abs(t)):
        raise NumericalError(f"trace has imaginary residue {t.imag:.3e}")


def spectrum(P, return_vectors: bool = False):
    """Eigenvalues of a general complex square matrix.

    Uses LAPACK's ``geev`` (Hessenberg reduction followed by shifted QR).
    With ``return_vectors=True`` the residual ``|Pv - lv|`` of every pair is
    checked against ``1e-8 * |P|_2``.
    """
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError(f"spectrum needs a square matrix, got shape {P.shape}")
    try:
        if not return_vectors:
            return np.linalg.eigvals(P)
        w, V = np.linalg.eig(P)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    if P.size:
        res = np.linalg.norm(P @ V - V * w, axis=0)
        worst = float(res.max())
        scale = np.linalg.norm(P, 2)
        if worst > RESIDUAL_TOL * max(scale, np.finfo(float).tiny):
            raise NumericalError(f"eigenpair residual {worst:.3e} exceeds tolerance")
    return w, V


def char_poly_coefficients(P=None, eigenvalues=None) -> np.ndarray:
    """Real coefficients of ``det(x I - P)``, leading 1 first.

    Built from the eigenvalues.  The last coefficient is ``(-1)**n det P``,
    the second is ``-tr P``.
    """
    if eigenvalues is None:
        eigenvalues = spectrum(P)
    c = np.ones(1, dtype=complex)
    for lam in eigenvalues:
        c = np.convolve(c, [1.0, -lam])
    scale = max(1.0, float(np.max(np.abs(c))))
    imag = float(np.max(np.abs(c.imag)))
    if imag > CHARPOLY_IMAG_TOL * scale:
        raise NumericalError(f"characteristic polynomial has imaginary residue {imag:.3e}")
    return c.real.copy()


def is_retracing(path) -> bool:
    """True if the loop goes out ``a_1 ... a_L`` and straight back.

    Canonical form ``(a_1, ..., a_L, a_{L-1}, ..., a_2)``, closing at
    ``a_1``; ``K = 2L - 2``.
    """
    labels = _as_path(path).labels
    K = len(labels)
    if K % 2:
        return False
    L = K // 2 + 1
    # 0-based: labels[L-1+j] must equal labels[L-1-j]
    return all(labels[L - 1 + j] == labels[L - 1 - j] for j in range(1, L - 1))


def conjugate_pairing_error(eigenvalues) -> float:
    """Largest distance between the multiset and its complex conjugate.

    Eigenvalues are matched to conjugates by minimum-cost assignment.
    """
    w = np.asarray(eigenvalues, dtype=complex)
    if w.size == 0:
        return 0.0
    cost = np.abs(w[:, None] - w.conj()[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


@dataclass
class InvariantReport:
    path: tuple[int, ...]
    trace: complex
    eigenvalues: np.ndarray
    charpoly: np.ndarray
    retracing: bool
    positive: bool | None
    details: dict = field(default_factory=dict)

    @property
    def trace_invariant(self) -> float:
        return float(self.trace.real)


def invariant_report(state: State, path) -> InvariantReport:
    """Trace, spectrum and characteristic polynomial of one path operator.

    `positive` is only filled in for retracing paths, where the operator is
    ``M^dagger M``; it is None otherwise.
    """
    path = _as_path(path)
    P = path_operator(state, path)
    t = complex(np.trace(P))
    _check_trace_real(t)
    w = spectrum(P)
    norm = float(np.linalg.norm(P, 2)) if P.size else 0.0
    pairing = conjugate_pairing_error(w)
    if pairing > PAIRING_TOL * max(1.0, norm):
        raise NumericalError(f"spectrum not closed under conjugation (error {pairing:.3e})")
    retracing = is_retracing(path)
    positive = None
    if retracing:
        positive = bool(np.all(np.abs(w.imag) <= PAIRING_TOL * max(1.0, norm))
                        and w.real.min() >= -POSITIVITY_TOL * norm)
    return InvariantReport(
        path=path.labels,
        trace=t,
        eigenvalues=w,
        charpoly=char_poly_coefficients(eigenvalues=w),
        retracing=retracing,
        positive=positive,
        details={"norm": norm, "pairing_error": pairing,
                 "swap_conjugation_error": swap_conjugation_error(P, state.dims[path.labels[0]])},
    )


def swap_conjugation_error(P, d: int) -> float:
    S = swap_operator(d)
    return float(np.max(np.abs(S @ P @ S - P.conj())))


def two_tangle(psi: PureState) -> float:
    """``4 det[R(rho_12^T2) R(rho_21^T1)]**(1/4)`` for a two-qubit pure state.

    The determinant belongs to a positive operator, so the real non-negative
    fourth root is taken.
    """
    if not isinstance(psi, PureState):
        raise TypeError("two_tangle needs a PureState")
    if psi.dims != (2, 2):
        raise ValueError(f"two_tangle needs two qubits, got dims {list(psi.dims)}")
    det = complex(np.linalg.det(path_operator(psi, (0, 1))))
    if det.real < -DET_NEG_TOL or abs(det.imag) > DET_NEG_TOL:
        raise NumericalError(f"determinant {det!r} is not real non-negative")
    return 4.0 * max(det.real, 0.0) ** 0.25


def kempe_invariant(state: State) -> float:
    """Trace of the path operator on the loop through every subsystem once."""
    if state.n_subsystems < 3:
        raise ValueError("the Kempe-type invariant needs at least three subsystems")
    return path_trace_invariant(state, tuple(range(state.n_subsystems)))


def pt_cube_trace(state: State, pair=(0, 1)) -> float:
    """``tr[(rho_ab^{T_b})**3]``, the lone nonzero eigenvalue for bi-separable states."""
    rho = reduced_density(state, list(pair))
    X = partial_transpose(rho, 1)
    return float(np.trace(X @ X @ X).real)

"""Numerical checks of the structural identities behind the path invariants.

Each check returns a :class:`CheckResult`; a failed identity is a result,
not an exception.  ``passed`` is always ``max_violation <= tolerance``.
Composite checks normalize each sub-violation by its own tolerance and
report the worst ratio against a tolerance of 1.

Expected-negative controls (entangling unitaries, realignment without
partial transpose) pass when invariance is *broken*, which guards the
positive checks against being vacuous.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .links import link_matrix, pauli_link_matrix, u_matrix
from .paths import (
    NumericalError,
    Path,
    half_path_operator,
    is_retracing,
    path_operator,
    pt_cube_trace,
    spectrum,
)
from .sampling import (
    apply_local,
    haar_random_pure,
    haar_random_unitary,
    local_unitaries,
    random_real_pure,
    separable_state,
    substream,
)
from .tensor import DensityMatrix, PureState, realign, reduced_density, swap_operator

__all__ = [
    "TOLERANCES",
    "CheckResult",
    "SurveyRecord",
    "spectrum_distance",
    "check_pauli_equivalence",
    "check_lu_invariance",
    "check_nonlocal_control",
    "check_link_covariance",
    "check_realign_only",
    "realign_only_value",
    "check_srs",
    "check_adjoint",
    "check_retracing_positivity",
    "check_charpoly_real",
    "separable_spectra_check",
    "spectral_survey",
    "summarize_survey",
    "write_survey",
    "SUITES",
    "run_suite",
]

TOLERANCES = {
    "pauli_equivalence": 1e-12,
    "lu_invariance": 1e-9,  # relative to |P|_2
    "lu_conjugation": 1e-10,
    "link_covariance": 1e-12,
    "swap_conjugation": 1e-13,
    "adjoint": 1e-13,
    "retracing_min_eig": 1e-10,  # relative to |P|_2
    "retracing_factorization": 1e-12,
    "charpoly_imag": 1e-9,
    "separable_spectrum": 1e-10,
    "realign_orthogonal": 1e-10,
    "realign_unitary_deviation": 1e-6,
    "realign_unitary_fraction": 0.9,
    "nonlocal_deviation": 1e-3,
    "nonlocal_fraction": 0.9,
    "dominant_real": 1e-9,  # relative to |lambda_max|
    "dominance_gap": 1e-6,
    "magnitude_band": 0.25,
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_violation: float
    trials: int
    tolerance: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<40s} max_violation={self.max_violation:.3e}  tol={self.tolerance:.1e}  trials={self.trials}"


def _result(name, violation, tol, trials, **details) -> CheckResult:
    violation = float(violation)
    return CheckResult(name, bool(violation <= tol), violation, int(trials), float(tol), details)


def _composite(name, parts: dict, trials, **details) -> CheckResult:
    """Combine ``{label: (violation, tol)}`` into one normalized result."""
    ratios = {k: v / t for k, (v, t) in parts.items()}
    details["parts"] = {k: {"violation": float(v), "tolerance": float(t)} for k, (v, t) in parts.items()}
    return CheckResult(name, all(r <= 1.0 for r in ratios.values()), float(max(ratios.values())),
                       int(trials), 1.0, details)


def spectrum_distance(w1, w2) -> float:
    """Largest eigenvalue displacement under the best one-to-one matching."""
    w1, w2 = np.asarray(w1), np.asarray(w2)
    if w1.shape != w2.shape:
        raise ValueError("spectra have different sizes")
    if w1.size == 0:
        return 0.0
    cost = np.abs(w1[:, None] - w2[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def _random_pair_marginal(rng, dims=(2, 2), extra: int = 0) -> DensityMatrix:
    """Marginal of a Haar state on ``dims + (extra,)``; mixed when ``extra > 1``."""
    if extra <= 1:
        return reduced_density(haar_random_pure(dims, rng), [0, 1])
    return reduced_density(haar_random_pure(tuple(dims) + (extra,), rng), [0, 1])


# -- qubit bridge ------------------------------------------------------------

def check_pauli_equivalence(trials: int = 100, seed: int = 0, tol: float | None = None) -> CheckResult:
    """Pauli link against ``U^dagger R(rho_21^T1) U`` on random two-qubit states.

    Half the trials use pure states, half use marginals of three- or
    four-qubit states (mixed).
    """
    tol = TOLERANCES["pauli_equivalence"] if tol is None else tol
    U = u_matrix()
    worst = 0.0
    for k in range(trials):
        rng = substream(seed, 1, k)
        extra = 1 if k % 2 == 0 else (2 if k % 4 == 1 else 4)
        rho = _random_pair_marginal(rng, (2, 2), extra)
        S = pauli_link_matrix(rho)
        L = link_matrix(rho, 0, 1).mat
        worst = max(worst, float(np.max(np.abs(S - U.conj().T @ L @ U))))
    return _result("pauli_link_equivalence", worst, tol, trials, seed=seed)


# -- local-unitary invariance -------------------------------------------------

def _trace_spectrum(state, path):
    P = path_operator(state, path)
    return P, complex(np.trace(P)), spectrum(P)


def check_lu_invariance(state, path, trials: int = 10, seed: int = 0,
                        tol: float | None = None, conj_tol: float | None = None) -> CheckResult:
    """Trace, spectrum and operator covariance of a path under random local unitaries.

    Besides the scalar invariants, checks the matrix identity
    ``P~ = (U_a1 x U_a1^*) P (U_a1 x U_a1^*)^dagger``.
    """
    tol = TOLERANCES["lu_invariance"] if tol is None else tol
    conj_tol = TOLERANCES["lu_conjugation"] if conj_tol is None else conj_tol
    path = path if isinstance(path, Path) else Path(tuple(path))
    P0, t0, w0 = _trace_spectrum(state, path)
    scale = max(float(np.linalg.norm(P0, 2)), abs(t0), np.finfo(float).tiny)
    a1 = path.labels[0]
    tr_dev = sp_dev = conj_dev = 0.0
    for k in range(trials):
        Us = local_unitaries(state.dims, substream(seed, 2, k))
        P1, t1, w1 = _trace_spectrum(apply_local(state, Us), path)
        tr_dev = max(tr_dev, abs(t1 - t0) / scale)
        sp_dev = max(sp_dev, spectrum_distance(w0, w1) / scale)
        W = np.kron(Us[a1], Us[a1].conj())
        conj_dev = max(conj_dev, float(np.max(np.abs(P1 - W @ P0 @ W.conj().T))))
    return _composite(
        f"lu_invariance{list(path.labels)}",
        {"trace": (tr_dev, tol), "spectrum": (sp_dev, tol), "conjugation": (conj_dev, conj_tol)},
        trials, dims=list(state.dims), seed=seed,
    )


def check_nonlocal_control(state, path, trials: int = 10, seed: int = 0) -> CheckResult:
    """Expected-negative control: an entangling Haar unitary on the whole space.

    Passes when the path trace moves by more than ``1e-3 * max(|tr P|, |P|_2)``
    in at least 90% of trials.  The reported violation is
    ``required_fraction / observed_fraction``.
    """
    thresh = TOLERANCES["nonlocal_deviation"]
    need = TOLERANCES["nonlocal_fraction"]
    P0, t0, _ = _trace_spectrum(state, path)
    scale = max(float(np.linalg.norm(P0, 2)), abs(t0))
    D = int(np.prod(state.dims))
    devs = []
    for k in range(trials):
        V = haar_random_unitary(D, substream(seed, 3, k))
        if isinstance(state, PureState):
            st = PureState(state.dims, V @ state.amp)
        else:
            rho = V @ state.mat @ V.conj().T
            st = DensityMatrix(state.dims, 0.5 * (rho + rho.conj().T))
        devs.append(float(abs(np.trace(path_operator(st, path)) - t0)) / scale)
    frac = float(np.mean(np.array(devs) > thresh))
    return _result("nonlocal_control", need / max(frac, 1e-300), 1.0, trials,
                   fraction_variant=frac, median_relative_deviation=float(np.median(devs)))


def check_link_covariance(state, pair, trials: int = 10, seed: int = 0, act: str = "both",
                          tol: float | None = None) -> CheckResult:
    """``R(rho_ba^Ta) = (U_b x U_b^*)^dagger R(rho~_ba^Ta) (U_a x U_a^*)``.

    `act` selects which end carries a random unitary: ``"to"`` (left action
    only), ``"from"`` (right action only) or ``"both"``.
    """
    tol = TOLERANCES["link_covariance"] if tol is None else tol
    a, b = pair
    L0 = link_matrix(state, a, b).mat
    worst = 0.0
    for k in range(trials):
        Us = [np.eye(d, dtype=complex) for d in state.dims]
        rng = substream(seed, 4, k)
        if act in ("from", "both"):
            Us[a] = haar_random_unitary(state.dims[a], rng)
        if act in ("to", "both"):
            Us[b] = haar_random_unitary(state.dims[b], rng)
        if act not in ("from", "to", "both"):
            raise ValueError(f"act must be 'from', 'to' or 'both', not {act!r}")
        L1 = link_matrix(apply_local(state, Us), a, b).mat
        Wa = np.kron(Us[a], Us[a].conj())
        Wb = np.kron(Us[b], Us[b].conj())
        worst = max(worst, float(np.max(np.abs(L0 - Wb.conj().T @ L1 @ Wa))))
    return _result(f"link_covariance[{act}]", worst, tol, trials, pair=list(pair))


def realign_only_value(state, pair=(0, 1)) -> complex:
    """``tr[R(rho_ab) R(rho_ba)]`` with realignment but no partial transpose."""
    a, b = pair
    rab = reduced_density(state, [a, b])
    rba = reduced_density(state, [b, a])
    return complex(np.trace(realign(rab.mat, rab.dims) @ realign(rba.mat, rba.dims)))


def check_realign_only(state, pair=(0, 1), trials: int = 50, seed: int = 0,
                       real_state: PureState | None = None) -> CheckResult:
    """Realignment alone is invariant under orthogonal but not unitary transforms.

    (a) Haar local unitaries on `state` must change ``tr[R(rho_ab) R(rho_ba)]``
    by more than 1e-6 in at least 90% of trials.  (b) Random local orthogonal
    matrices on a real-amplitude state (drawn from `seed` unless given) must
    leave it unchanged within 1e-10.
    """
    dev_tol = TOLERANCES["realign_unitary_deviation"]
    need = TOLERANCES["realign_unitary_fraction"]
    orth_tol = TOLERANCES["realign_orthogonal"]
    if real_state is None:
        real_state = random_real_pure(state.dims, substream(seed, 5))
    q0 = realign_only_value(state, pair)
    r0 = realign_only_value(real_state, pair)
    moved = 0
    orth_dev = 0.0
    for k in range(trials):
        Us = local_unitaries(state.dims, substream(seed, 6, k))
        moved += abs(realign_only_value(apply_local(state, Us), pair) - q0) > dev_tol
        Os = local_unitaries(real_state.dims, substream(seed, 7, k), orthogonal=True)
        orth_dev = max(orth_dev, abs(realign_only_value(apply_local(real_state, Os), pair) - r0))
    frac = moved / trials
    return _composite(
        "realign_only",
        {"orthogonal_invariance": (orth_dev, orth_tol),
         "unitary_variance": (need / max(frac, 1e-300), 1.0)},
        trials, fraction_variant=frac, pair=list(pair),
    )


# -- conjugation structure and positivity -------------------------------------

def check_srs(state, pair, tol: float | None = None) -> CheckResult:
    """``S_b R(rho_ba^Ta) S_a = R(rho_ba^Ta)^*``."""
    tol = TOLERANCES["swap_conjugation"] if tol is None else tol
    a, b = pair
    L = link_matrix(state, a, b)
    dev = np.max(np.abs(swap_operator(L.d_to) @ L.mat @ swap_operator(L.d_from) - L.mat.conj()))
    return _result("swap_conjugation", dev, tol, 1, pair=list(pair))


def check_adjoint(state, pair, tol: float | None = None) -> CheckResult:
    """``R(rho_ba^Ta) = R(rho_ab^Tb)^dagger``."""
    tol = TOLERANCES["adjoint"] if tol is None else tol
    a, b = pair
    dev = np.max(np.abs(link_matrix(state, a, b).mat - link_matrix(state, b, a).H))
    return _result("link_adjoint", dev, tol, 1, pair=list(pair))


def check_retracing_positivity(state, path) -> CheckResult:
    """Retracing loops give ``P = M^dagger M``: non-negative real spectrum."""
    path = path if isinstance(path, Path) else Path(tuple(path))
    if not is_retracing(path):
        raise ValueError(f"path {list(path.labels)} is not fully retracing")
    P = path_operator(state, path)
    M = half_path_operator(state, path)
    norm = float(np.linalg.norm(P, 2))
    w = spectrum(P)
    neg = max(0.0, -float(w.real.min())) / max(norm, np.finfo(float).tiny)
    fact = float(np.max(np.abs(P - M.conj().T @ M)))
    return _composite(
        f"retracing_positivity{list(path.labels)}",
        {"min_eigenvalue": (neg, TOLERANCES["retracing_min_eig"]),
         "factorization": (fact, TOLERANCES["retracing_factorization"])},
        1, max_imag=float(np.abs(w.imag).max()), norm=norm,
    )


def check_charpoly_real(state, path) -> CheckResult:
    """Imaginary residue of the characteristic polynomial, relative to its largest coefficient."""
    w = spectrum(path_operator(state, path))
    c = np.ones(1, dtype=complex)
    for lam in w:
        c = np.convolve(c, [1.0, -lam])
    dev = float(np.max(np.abs(c.imag))) / max(1.0, float(np.max(np.abs(c))))
    return _result(f"charpoly_real{list(path)}", dev, TOLERANCES["charpoly_imag"], 1)


# -- separable states ---------------------------------------------------------

def _single_nonzero_error(w, expected) -> float:
    w = np.asarray(w)
    k = int(np.argmax(np.abs(w)))
    rest = np.delete(w, k)
    return max(abs(w[k] - expected), float(np.abs(rest).max()) if rest.size else 0.0)


def separable_spectra_check(kind: str = "bi", dims=(2, 2, 2), trials: int = 5, seed: int = 0,
                            factors=None) -> CheckResult:
    """Spectra of ``P(1,2,3)`` and ``P(1,2,1,2)`` on separable pure states.

    bi: ``|phi_12> x |chi_3>`` gives one nonzero eigenvalue of ``P(1,2,3)``
    equal to ``tr[(rho_12^T2)^3]``, and ``tr P(1,2,1,2) = (tr rho_1^2)^2``.
    tri: both operators have spectrum ``{1, 0, ..., 0}``.

    With explicit `factors` a single trial is run on their product.  The
    number of nonzero eigenvalues of ``P(1,2,1,2)`` is recorded in
    ``details`` but not asserted for bi-separable states.
    """
    tol = TOLERANCES["separable_spectrum"]
    worst = 0.0
    nonzero_1212 = []
    n_trials = 1 if factors is not None else trials
    for k in range(n_trials):
        if factors is None:
            rng = substream(seed, 8, k)
            if kind == "bi":
                fs = [haar_random_pure(dims[:2], rng), haar_random_pure(dims[2:3], rng)]
            else:
                fs = [haar_random_pure(dims[j:j + 1], rng) for j in range(3)]
        else:
            fs = factors
        st = separable_state(kind, fs)
        w123 = spectrum(path_operator(st, (0, 1, 2)))
        P1212 = path_operator(st, (0, 1, 0, 1))
        w1212 = spectrum(P1212)
        nonzero_1212.append(int(np.sum(np.abs(w1212) > tol)))
        if kind == "bi":
            worst = max(worst, _single_nonzero_error(w123, pt_cube_trace(st, (0, 1))))
            purity = reduced_density(st, [0]).purity()
            worst = max(worst, abs(np.trace(P1212) - purity**2))
        else:
            worst = max(worst, _single_nonzero_error(w123, 1.0), _single_nonzero_error(w1212, 1.0))
    return _result(f"separable_spectra[{kind}]", worst, tol, n_trials,
                   dims=[int(d) for d in (st.dims)], nonzero_eigs_1212=nonzero_1212)


# -- spectral survey ----------------------------------------------------------

@dataclass
class SurveyRecord:
    sample_index: int
    eigenvalues: np.ndarray
    dominant: complex
    runner_up_modulus: float
    trace: float
    diag_mean: float = float("nan")
    offdiag_mean: float = float("nan")
    link_dominance_ratio: float = float("nan")
    error: str | None = None

    @property
    def dominance_ratio(self) -> float:
        if self.runner_up_modulus == 0:
            return float("inf")
        return abs(self.dominant) / self.runner_up_modulus

    @property
    def strictly_dominant(self) -> bool:
        return self.error is None and self.dominance_ratio > 1 + TOLERANCES["dominance_gap"]


def _dominance(w):
    order = np.argsort(-np.abs(w))
    dom = complex(w[order[0]])
    runner = float(abs(w[order[1]])) if w.size > 1 else 0.0
    return dom, runner


def _survey_sample(dims, seed, k, path) -> SurveyRecord:
    state = haar_random_pure(dims, substream(seed, k))
    try:
        P = path_operator(state, path)
        w = spectrum(P)
    except NumericalError as exc:
        return SurveyRecord(k, np.array([]), complex("nan"), float("nan"), float("nan"), error=str(exc))
    dom, runner = _dominance(w)
    rho21 = reduced_density(state, [1, 0]).mat
    diag = np.abs(np.diagonal(rho21))
    off = np.abs(rho21[~np.eye(rho21.shape[0], dtype=bool)])
    lw = spectrum(link_matrix(state, 0, 1).mat) if dims[0] == dims[1] else np.linalg.svd(
        link_matrix(state, 0, 1).mat, compute_uv=False)
    ldom, lrun = _dominance(lw)
    return SurveyRecord(
        sample_index=k,
        eigenvalues=w,
        dominant=dom,
        runner_up_modulus=runner,
        trace=float(np.trace(P).real),
        diag_mean=float(diag.mean()),
        offdiag_mean=float(off.mean()) if off.size else float("nan"),
        link_dominance_ratio=abs(ldom) / lrun if lrun else float("inf"),
    )


def spectral_survey(dims=(10, 10, 10), samples: int = 100, seed: int = 0, path=(0, 1, 2),
                    workers: int | None = None) -> list[SurveyRecord]:
    """Full spectrum of a path operator over Haar-random pure states.

    Sample ``k`` is drawn from ``substream(seed, k)``, so the records do not
    depend on `workers`.  Eigensolver failures are stored in
    ``SurveyRecord.error`` and the survey carries on.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    dims = tuple(int(d) for d in dims)
    path = Path(tuple(path))
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(lambda k: _survey_sample(dims, seed, k, path), range(samples)))
    else:
        records = [_survey_sample(dims, seed, k, path) for k in range(samples)]
    return sorted(records, key=lambda r: r.sample_index)


def summarize_survey(records, dims) -> dict:
    ok = [r for r in records if r.error is None]
    strict = [r for r in ok if r.strictly_dominant]
    real_tol = TOLERANCES["dominant_real"]
    imag_rel = [abs(r.dominant.imag) / abs(r.dominant) for r in strict]
    ratios = np.array([r.dominance_ratio for r in ok]) if ok else np.array([np.nan])
    d1, d2 = dims[0], dims[1]
    d3 = int(np.prod(dims[2:])) if len(dims) > 2 else 1
    return {
        "dims": list(dims),
        "samples": len(records),
        "failed": len(records) - len(ok),
        "strictly_dominant": len(strict),
        "dominant_real": int(sum(x <= real_tol for x in imag_rel)),
        "max_dominant_imag_rel": float(max(imag_rel)) if imag_rel else 0.0,
        "dominance_ratio_mean": float(np.mean(ratios)),
        "dominance_ratio_median": float(np.median(ratios)),
        "dominance_ratio_min": float(np.min(ratios)),
        "link_dominance_ratio_mean": float(np.mean([r.link_dominance_ratio for r in ok])) if ok else float("nan"),
        "dominant_real_part_mean": float(np.mean([r.dominant.real for r in ok])) if ok else float("nan"),
        "diag_mean": float(np.mean([r.diag_mean for r in ok])) if ok else float("nan"),
        "offdiag_mean": float(np.mean([r.offdiag_mean for r in ok])) if ok else float("nan"),
        "diag_reference": 1.0 / (d1 * d2),
        "offdiag_reference": float(1.0 / (d1 * d2 * np.sqrt(d3))),
        "tolerances": {k: TOLERANCES[k] for k in ("dominant_real", "dominance_gap", "magnitude_band")},
    }


def write_survey(records, summary: dict, prefix) -> tuple[str, str]:
    """Write ``PREFIX.csv`` (one row per eigenvalue) and ``PREFIX.json``."""
    csv_path, json_path = f"{prefix}.csv", f"{prefix}.json"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sample_index", "k", "re", "im"])
        for r in records:
            for k, lam in enumerate(r.eigenvalues):
                w.writerow([r.sample_index, k, f"{lam.real:.17g}", f"{lam.imag:.17g}"])
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=2)
    return csv_path, json_path


# -- suites -------------------------------------------------------------------

def _suite_equiv(trials, seed):
    return [check_pauli_equivalence(max(trials, 1), seed)]


def _suite_prop1(trials, seed):
    out = []
    for k, dims in enumerate([(2, 2, 2), (3, 4, 2), (4, 3, 3)]):
        st = haar_random_pure(dims, substream(seed, 100, k))
        for path in [(0, 1, 2), (0, 1, 2, 1), (0, 1, 0, 1)]:
            out.append(check_lu_invariance(st, path, trials, seed))
        for act in ("to", "from", "both"):
            out.append(check_link_covariance(st, (0, 1), trials, seed, act=act))
        out.append(check_nonlocal_control(st, (0, 1, 2), max(trials, 10), seed))
    return out


def _suite_prop2(trials, seed):
    out = []
    for k, dims in enumerate([(2, 2), (3, 5), (2, 2, 3), (3, 5, 2)]):
        st = haar_random_pure(dims, substream(seed, 200, k))
        out.append(check_srs(st, (0, 1)))
        out.append(check_adjoint(st, (0, 1)))
        out.append(check_srs(st, (1, 0)))
    for k, (dims, path) in enumerate([((3, 4), (0, 1)), ((2, 3, 2), (0, 1, 2, 1)),
                                       ((2, 2, 2, 2), (0, 1, 2, 3, 2, 1))]):
        st = haar_random_pure(dims, substream(seed, 201, k))
        out.append(check_retracing_positivity(st, path))
        out.append(check_charpoly_real(st, path))
    st = haar_random_pure((3, 3, 3), substream(seed, 202))
    out.append(check_charpoly_real(st, (0, 1, 2)))
    return out


def _suite_separable(trials, seed):
    return [separable_spectra_check("bi", (2, 2, 2), max(trials, 1), seed),
            separable_spectra_check("bi", (3, 4, 2), max(trials, 1), seed),
            separable_spectra_check("tri", (3, 3, 3), max(trials, 1), seed)]


def _suite_realign(trials, seed):
    st = haar_random_pure((2, 2), substream(seed, 300))
    return [check_realign_only(st, (0, 1), max(trials, 10), seed)]


SUITES = {
    "equiv": _suite_equiv,
    "prop1": _suite_prop1,
    "prop2": _suite_prop2,
    "separable": _suite_separable,
    "realign": _suite_realign,
}


def run_suite(name: str, trials: int = 10, seed: int = 0) -> list[CheckResult]:
    """Run one named suite, or every suite for ``name="all"``."""
    if name == "all":
        return [r for key in SUITES for r in SUITES[key](trials, seed)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return SUITES[name](trials, seed)

"""Command-line front end.

Subsystem labels are 1-based here and 0-based everywhere else; the
conversion happens in :func:`_parse_path` and nowhere else.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .links import pauli_link_matrix, link_matrix, u_matrix
from .paths import NumericalError, invariant_report
from .sampling import haar_random_pure, random_real_pure, substream
from .tensor import load_state, reduced_density, save_state
from .verify import TOLERANCES, run_suite, spectral_survey, summarize_survey, write_survey


class UsageError(Exception):
    pass


def _parse_ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"invalid {what} {text!r}: expected comma-separated integers") from None


def _parse_dims(text: str) -> list[int]:
    dims = _parse_ints(text, "dims")
    if not dims or any(d < 1 for d in dims):
        raise UsageError(f"invalid dimension in {text!r}: every subsystem needs d >= 1")
    return dims


def _parse_path(text: str, n: int, closed: bool = True) -> tuple[int, ...]:
    labels = _parse_ints(text, "path")
    if any(a < 1 or a > n for a in labels):
        raise UsageError(f"path labels must lie in 1..{n}, got {labels}")
    if closed:
        if len(labels) < 2:
            raise UsageError("a closed path needs at least two labels")
        for k, a in enumerate(labels):
            if a == labels[(k + 1) % len(labels)]:
                raise UsageError(f"path {labels} repeats label {a} on consecutive steps")
    return tuple(a - 1 for a in labels)


def _emit_config(args, config: dict):
    if not getattr(args, "json", False):
        print("# config: " + json.dumps(config))


def _complex(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def cmd_random(args) -> int:
    dims = _parse_dims(args.dims)
    draw = random_real_pure if args.real else haar_random_pure
    state = draw(dims, substream(args.seed))
    config = {"command": "random", "dims": dims, "seed": args.seed, "real": args.real, "out": args.out}
    _emit_config(args, config)
    try:
        save_state(state, args.out)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    if args.json:
        print(json.dumps({"config": config, "amplitudes": len(state.amp)}))
    else:
        print(f"wrote {len(state.amp)} amplitudes to {args.out}")
    return 0


def _load(path):
    try:
        return load_state(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad state file {path}: {exc}") from None


def _report(args):
    state = _load(args.state)
    path = _parse_path(args.path, len(state.dims))
    try:
        rep = invariant_report(state, path)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = {"command": args.command, "state": args.state, "dims": list(state.dims),
              "path": [a + 1 for a in path], "tolerances": {"trace_imag": 1e-10, "pairing": 1e-9}}
    return state, rep, config


def cmd_invariant(args) -> int:
    _, rep, config = _report(args)
    out = {
        "config": config,
        "trace": rep.trace.real,
        "imag_residue": rep.trace.imag,
        "retracing": rep.retracing,
        "positive": rep.positive,
        "charpoly": rep.charpoly.tolist(),
    }
    if args.json:
        print(json.dumps(out))
    else:
        _emit_config(args, config)
        print(f"trace         {rep.trace.real:.17g}")
        print(f"imag residue  {rep.trace.imag:.3e}")
        print(f"retracing     {rep.retracing}")
        print(f"positive      {rep.positive}")
    return 0


def cmd_spectrum(args) -> int:
    _, rep, config = _report(args)
    config["out"] = args.out
    w = rep.eigenvalues[np.argsort(-np.abs(rep.eigenvalues), kind="stable")]
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                wr = csv.writer(fh)
                wr.writerow(["k", "re", "im"])
                for k, lam in enumerate(w):
                    wr.writerow([k, f"{lam.real:.17g}", f"{lam.imag:.17g}"])
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    if args.json:
        print(json.dumps({"config": config, "eigenvalues": [_complex(z) for z in w]}))
    else:
        _emit_config(args, config)
        if not args.out:
            for k, lam in enumerate(w):
                print(f"{k},{lam.real:.17g},{lam.imag:.17g}")
        else:
            print(f"wrote {len(w)} eigenvalues to {args.out}")
    return 0


def cmd_verify(args) -> int:
    config = {"command": "verify", "suite": args.suite, "trials": args.trials, "seed": args.seed,
              "tolerances": TOLERANCES}
    try:
        results = run_suite(args.suite, args.trials, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps({
            "config": config,
            "passed": ok,
            "checks": [{"name": r.name, "passed": r.passed, "max_violation": r.max_violation,
                        "tolerance": r.tolerance, "trials": r.trials} for r in results],
        }))
    else:
        _emit_config(args, config)
        for r in results:
            print(r.line())
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if ok else 1


def cmd_survey(args) -> int:
    dims = _parse_dims(args.dims)
    path = _parse_path(args.path, len(dims))
    config = {"command": "survey", "dims": dims, "samples": args.samples, "seed": args.seed,
              "path": [a + 1 for a in path], "out": args.out, "tolerances": {
                  k: TOLERANCES[k] for k in ("dominant_real", "dominance_gap", "magnitude_band")}}
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    records = spectral_survey(dims, args.samples, args.seed, path, workers=args.workers)
    summary = summarize_survey(records, dims)
    summary["config"] = config
    for r in records:
        if r.error:
            print(f"sample {r.sample_index}: {r.error}", file=sys.stderr)
    try:
        write_survey(records, summary, args.out)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    if args.json:
        print(json.dumps(summary))
    else:
        _emit_config(args, config)
        for key in ("samples", "failed", "strictly_dominant", "dominant_real",
                    "dominance_ratio_mean", "diag_mean", "diag_reference",
                    "offdiag_mean", "offdiag_reference"):
            print(f"{key:<22s} {summary[key]}")
        print(f"wrote {args.out}.csv and {args.out}.json")
    return 1 if summary["failed"] > 0.01 * len(records) else 0


def cmd_equiv(args) -> int:
    """Compare the Pauli link with ``U^dagger R U`` on one state file or on random states."""
    tol = TOLERANCES["pauli_equivalence"]
    config = {"command": "equiv", "tolerance": tol}
    if args.state:
        state = _load(args.state)
        pair = _parse_path(args.pair, len(state.dims), closed=False)
        if len(pair) != 2 or pair[0] == pair[1]:
            raise UsageError(f"--pair needs two distinct labels, got {args.pair!r}")
        a, b = pair
        if state.dims[a] != 2 or state.dims[b] != 2:
            raise UsageError("the Pauli link is defined for qubit pairs only")
        rho = reduced_density(state, [a, b])
        U = u_matrix()
        dev = float(np.max(np.abs(pauli_link_matrix(rho) - U.conj().T @ link_matrix(rho, 0, 1).mat @ U)))
        config.update(state=args.state, pair=[a + 1, b + 1])
        trials = 1
    else:
        results = run_suite("equiv", args.trials, args.seed)
        dev, trials = results[0].max_violation, results[0].trials
        config.update(trials=args.trials, seed=args.seed)
    ok = dev <= tol
    if args.json:
        print(json.dumps({"config": config, "max_violation": dev, "trials": trials, "passed": ok}))
    else:
        _emit_config(args, config)
        print(f"{'PASS' if ok else 'FAIL'}  max |S - U^dag R U| = {dev:.3e} over {trials} state(s)")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="luinv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = common(sub.add_parser("random", help="write a Haar-random pure state file"))
    sp.add_argument("--dims", required=True, help="comma-separated subsystem dimensions")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--real", action="store_true", help="real amplitudes instead of Haar")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_random)

    for name, func, hlp in [("invariant", cmd_invariant, "trace invariant of a closed path"),
                            ("spectrum", cmd_spectrum, "eigenvalues of a closed-path operator")]:
        sp = common(sub.add_parser(name, help=hlp))
        sp.add_argument("--state", required=True)
        sp.add_argument("--path", required=True, help="1-based labels, e.g. 1,2,3")
        if name == "spectrum":
            sp.add_argument("--out", help="CSV file (columns k, re, im)")
        sp.set_defaults(func=func)

    sp = common(sub.add_parser("verify", help="run verification suites"))
    sp.add_argument("--suite", default="all", choices=["all", "prop1", "prop2", "equiv", "separable", "realign"])
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = common(sub.add_parser("survey", help="spectra of a path operator over random states"))
    sp.add_argument("--dims", default="10,10,10")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--path", default="1,2,3")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--out", required=True, help="output prefix for PREFIX.csv and PREFIX.json")
    sp.set_defaults(func=cmd_survey)

    sp = common(sub.add_parser("equiv", help="Pauli link versus realigned partial transpose"))
    sp.add_argument("--state", help="state file; random two-qubit states if omitted")
    sp.add_argument("--pair", default="1,2", help="qubit pair (1-based) when --state is given")
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_equiv)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"luinv {args.command}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"luinv {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

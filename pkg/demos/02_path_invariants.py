"""Closed-path operators and their local-unitary invariance."""
import numpy as np

from luinv import (apply_local, haar_random_pure, local_unitaries, path_operator, path_trace_invariant,
                   spectrum, substream)

psi = haar_random_pure((4, 3, 2), substream(3))
for path in [(0, 1, 2), (0, 1, 2, 1), (0, 1, 0, 1)]:
    t0 = path_trace_invariant(psi, path)
    moved = apply_local(psi, local_unitaries(psi.dims, substream(4)))
    t1 = path_trace_invariant(moved, path)
    print(f"path {path}: tr P = {t0:.12f}, after local unitaries {t1:.12f}")

# P is not Hermitian, but its spectrum is closed under complex conjugation
w = spectrum(path_operator(psi, (0, 1, 2)))
print("leading eigenvalues of P(1,2,3):", np.round(w[np.argsort(-abs(w))][:4], 5))
print("non-real eigenvalues:", int(np.sum(abs(w.imag) > 1e-9 * abs(w).max())), "of", w.size)

# retracing loops give P = M^dag M, hence a non-negative spectrum
w = spectrum(path_operator(psi, (0, 1, 2, 1)))
print("smallest eigenvalue of P(1,2,3,2):", w.real.min())

"""Two-tangle from a determinant, and spectra of separable states."""
import numpy as np

from luinv import (bell_state, haar_random_pure, path_operator, separable_state, spectrum, substream,
                   two_tangle, pt_cube_trace)

psi = haar_random_pure((2, 2), substream(5))
a = psi.amp
print("two-tangle", two_tangle(psi), " concurrence^2", (2 * abs(a[0] * a[3] - a[1] * a[2])) ** 2)

# |phi_12> x |chi_3>: P(1,2,3) has a single nonzero eigenvalue
st = separable_state("bi", [bell_state(), haar_random_pure([2], substream(6))])
w = spectrum(path_operator(st, (0, 1, 2)))
print("P(1,2,3) spectrum:", np.round(w, 12), " tr[(rho^T2)^3] =", pt_cube_trace(st))

import itertools

import numpy as np
import pytest

from luinv.sampling import substream


@pytest.fixture
def rng():
    return substream(20261018)


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def brute_reduced(rho, dims, keep):
    """Partial trace by explicit index enumeration."""
    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    kd = [dims[k] for k in keep]
    out = np.zeros((int(np.prod(kd)),) * 2, dtype=complex)
    for r in itertools.product(*[range(d) for d in kd]):
        for c in itertools.product(*[range(d) for d in kd]):
            s = 0
            for t in itertools.product(*[range(dims[k]) for k in traced]):
                row = [0] * n
                col = [0] * n
                for k, v in zip(keep, r):
                    row[k] = v
                for k, v in zip(keep, c):
                    col[k] = v
                for k, v in zip(traced, t):
                    row[k] = col[k] = v
                s += rho[np.ravel_multi_index(row, dims), np.ravel_multi_index(col, dims)]
            out[np.ravel_multi_index(r, kd), np.ravel_multi_index(c, kd)] = s
    return out

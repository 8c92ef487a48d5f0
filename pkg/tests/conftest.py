import numpy as np
import pytest

from pinchlab import build_curvature, ricci_spectrum


def random_tensor(rng, min_gap=1e-4):
    """Random valid curvature tensor with well-separated Ricci eigenvalues.

    Samples the 20 independent components uniformly in [-1, 1] and rejects
    draws whose Ricci eigenvalue gaps fall below ``min_gap``.
    """
    while True:
        rm = build_curvature(rng.uniform(-1.0, 1.0, 20))
        lam = ricci_spectrum(rm).lam
        if min(np.diff(lam)) >= min_gap:
            return rm


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

import numpy as np
import pytest

from far.tensor import FillSpec, make_tensor


def max_abs(a, b=None) -> float:
    arr = np.asarray(a) if b is None else np.asarray(a) - np.asarray(b)
    return float(np.abs(arr).max()) if arr.size else 0.0


def rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-12)


def seeded_complex(seed: int, n: int) -> np.ndarray:
    re = make_tensor((n,), FillSpec.uniform(-1.0, 1.0, seed)).data
    im = make_tensor((n,), FillSpec.uniform(-1.0, 1.0, seed + 1)).data
    return re + 1j * im


@pytest.fixture
def uniform_tensor():
    def build(dims, seed, lo=-1.0, hi=1.0):
        return make_tensor(dims, FillSpec.uniform(lo, hi, seed))

    return build

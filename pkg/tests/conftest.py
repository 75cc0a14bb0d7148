import numpy as np
import pytest


def random_complex(rng: np.random.Generator, m: int) -> np.ndarray:
    return rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))


def random_trace_zero(rng: np.random.Generator, m: int) -> np.ndarray:
    a = random_complex(rng, m) / np.sqrt(2.0 * m)
    a -= (np.trace(a) / m) * np.eye(m)
    return a


def random_zero_diagonal(rng: np.random.Generator, m: int) -> np.ndarray:
    a = random_complex(rng, m)
    np.fill_diagonal(a, 0.0)
    return a


def random_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, m))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)

import numpy as np
import pytest

from qdelta import build_scheme


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(dim, rng):
    q, r = np.linalg.qr(random_complex(rng, dim, dim))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(dim, rng):
    a = random_complex(rng, dim, dim)
    return (a + a.conj().T) / 2


@pytest.fixture
def qubit_schemes():
    return {
        "sic_qubit": build_scheme("sic_qubit"),
        "trine_qubit": build_scheme("trine_qubit"),
        "projective": build_scheme("projective", d=2),
        "mub": build_scheme("mub", d=2),
        "single_outcome": build_scheme("single_outcome", d=2),
    }

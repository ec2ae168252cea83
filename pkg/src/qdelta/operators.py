"""Dense complex-matrix primitives shared by every other module.

Small dense operators only (dimension up to ~16): Hermitian spectral
tools, norms built on a single spectral primitive (``numpy.linalg.eigh``),
the qubit Bloch parametrization, seeded random test inputs, and the JSON
wire format for complex matrices.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "HERMITIAN_ATOL",
    "PSD_ATOL",
    "TRACE_ATOL",
    "PROJECTION_ATOL",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PAULIS",
    "as_matrix",
    "hermitize",
    "validate_density",
    "validate_projection",
    "projection_rank",
    "op_norm",
    "trace_distance",
    "antihermitian_split",
    "bloch_to_state",
    "state_to_bloch",
    "random_projection",
    "random_density",
    "matrix_to_json",
    "matrix_from_json",
]

# Tolerances used by every validator in the package.
HERMITIAN_ATOL = 1e-12
PSD_ATOL = 1e-10
TRACE_ATOL = 1e-10
PROJECTION_ATOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(m) -> np.ndarray:
    """Coerce input to a square complex matrix with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermitize(m) -> np.ndarray:
    """Hermitian part (M + M†)/2; absorbs round-off from compositions."""
    a = as_matrix(m)
    return (a + a.conj().T) / 2


def op_norm(m) -> float:
    """Largest singular value of a square matrix.

    For Hermitian input this is the spectral radius.  Computed through
    the Hermitian eigenproblem of M†M, the package's single spectral
    primitive.
    """
    a = as_matrix(m)
    w = np.linalg.eigvalsh(a.conj().T @ a)
    return float(np.sqrt(max(float(w[-1]), 0.0)))


def validate_density(rho) -> np.ndarray:
    """Symmetrize and validate a density matrix.

    Raises ValueError when the minimum eigenvalue drops below -1e-10 or
    the trace deviates from 1 by more than 1e-10.  Returns the
    symmetrized array.
    """
    a = hermitize(rho)
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValueError(f"density matrix trace {tr!r} deviates from 1 beyond {TRACE_ATOL}")
    w = np.linalg.eigvalsh(a)
    if float(w[0]) < -PSD_ATOL:
        raise ValueError(
            f"density matrix is not positive semidefinite (min eigenvalue {float(w[0]):.3e})"
        )
    return a


def validate_projection(p) -> np.ndarray:
    """Symmetrize and validate an orthogonal projection (P² = P)."""
    a = hermitize(p)
    defect = op_norm(a @ a - a)
    if defect > PROJECTION_ATOL:
        raise ValueError(f"matrix is not a projection (||P^2 - P|| = {defect:.3e})")
    return a


def projection_rank(p) -> int:
    """Rank of a projection, read off its trace."""
    a = validate_projection(p)
    return int(round(float(np.trace(a).real)))


def trace_distance(rho, tau) -> float:
    """Trace distance (1/2) tr|rho - tau| between two density matrices.

    Equals half the sum of the absolute eigenvalues of the Hermitian
    difference; lies in [0, 1].
    """
    a = validate_density(rho)
    b = validate_density(tau)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    w = np.linalg.eigvalsh(a - b)
    return float(0.5 * np.abs(w).sum())


def antihermitian_split(a) -> tuple[np.ndarray, np.ndarray]:
    """Split an antihermitian A into A = i(A+ - A-) with PSD parts.

    A+ and A- are the positive and negative spectral parts of -iA, so
    both satisfy 0 <= A± <= ||A|| I and the reconstruction i(A+ - A-)
    returns A to machine precision.
    """
    m = as_matrix(a)
    defect = op_norm(m + m.conj().T)
    if defect > HERMITIAN_ATOL:
        raise ValueError(f"input is not antihermitian (||A + A†|| = {defect:.3e})")
    h = hermitize(-1j * m)
    w, v = np.linalg.eigh(h)
    plus = (v * np.clip(w, 0.0, None)) @ v.conj().T
    minus = (v * np.clip(-w, 0.0, None)) @ v.conj().T
    return hermitize(plus), hermitize(minus)


def bloch_to_state(r) -> np.ndarray:
    """Qubit state (I + r·sigma)/2 for a Bloch vector with |r| <= 1."""
    vec = np.asarray(r, dtype=float)
    if vec.shape != (3,):
        raise ValueError(f"Bloch vector must have shape (3,), got {vec.shape}")
    if float(np.linalg.norm(vec)) > 1.0 + 1e-12:
        raise ValueError(f"Bloch vector has norm {np.linalg.norm(vec)!r} > 1")
    rho = 0.5 * (np.eye(2, dtype=complex) + vec[0] * PAULI_X + vec[1] * PAULI_Y + vec[2] * PAULI_Z)
    return rho


def state_to_bloch(rho) -> np.ndarray:
    """Bloch vector r_k = tr(rho sigma_k) of a qubit density matrix."""
    a = validate_density(rho)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 state, got shape {a.shape}")
    return np.array([float(np.trace(a @ s).real) for s in PAULIS])


def random_projection(dim: int, rank: int, seed: int) -> np.ndarray:
    """Seeded random rank-``rank`` projection from orthonormalized Gaussian columns.

    Deterministic for a fixed seed (PCG64 generator).  ``rank`` 0 and
    ``dim`` give the zero matrix and the identity.
    """
    if not 0 <= rank <= dim:
        raise ValueError(f"rank {rank} outside [0, {dim}]")
    if rank == 0:
        return np.zeros((dim, dim), dtype=complex)
    if rank == dim:
        return np.eye(dim, dtype=complex)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    q, _ = np.linalg.qr(g)
    return hermitize(q @ q.conj().T)


def random_density(dim: int, seed: int) -> np.ndarray:
    """Seeded random full-rank density matrix from a normalized Gram matrix."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    gram = g @ g.conj().T
    return hermitize(gram / float(np.trace(gram).real))


def matrix_to_json(m) -> dict:
    """Encode a complex matrix as {"re": [[...]], "im": [[...]]} (row-major)."""
    a = as_matrix(m)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(obj) -> np.ndarray:
    """Decode the {"re", "im"} wire format back into a complex matrix."""
    if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
        raise ValueError('matrix JSON must be an object with "re" and "im" arrays')
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != im.shape:
        raise ValueError(f'"re" shape {re.shape} differs from "im" shape {im.shape}')
    return as_matrix(re + 1j * im)

"""Completely positive maps in Kraus form, with Choi-matrix certification.

Conventions
-----------
* The Heisenberg picture is primary: ``apply(A) = sum_k K_k† A K_k`` for
  an observable ``A`` of size ``dim_in``, producing an operator of size
  ``dim_out``.  Each Kraus operator is a ``(dim_in, dim_out)`` array.
* The Schrodinger action is derived by trace duality,
  ``tr(dual_apply(rho) X) = tr(rho apply(X))``, and never stored
  separately; it maps states of size ``dim_out`` to states of size
  ``dim_in``.
* Choi matrices are unnormalized: ``sum_ij |i><j| (x) dual(|i><j|)``
  with ``i, j`` running over the Schrodinger input index (``dim_out``)
  and blocks of size ``dim_in``; a map is completely positive iff this
  matrix is positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .operators import as_matrix, hermitize, matrix_from_json, matrix_to_json, op_norm

__all__ = [
    "CHOI_PSD_ATOL",
    "UNITAL_ATOL",
    "CPMap",
    "commutator",
    "choi_of_schrodinger",
    "random_unital_cpmap",
]

CHOI_PSD_ATOL = 1e-9
UNITAL_ATOL = 1e-10


def commutator(a, b) -> np.ndarray:
    """Commutator AB - BA of two equal-size square matrices."""
    x = as_matrix(a)
    y = as_matrix(b)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return x @ y - y @ x


def choi_of_schrodinger(action: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    """Choi matrix of a linear map given by its Schrodinger action.

    Builds ``sum_ij |i><j| (x) action(|i><j|)`` from the map's values on
    matrix units.  Works for arbitrary linear actions, not only CP ones,
    which is what makes it usable as a positivity test fixture.
    """
    blocks = []
    for i in range(dim):
        row = []
        for j in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[i, j] = 1.0
            row.append(as_matrix(action(unit)))
        blocks.append(row)
    return np.block(blocks)


@dataclass(frozen=True)
class CPMap:
    """A completely positive map held as a tuple of Kraus operators."""

    kraus: tuple[np.ndarray, ...]
    dim_in: int
    dim_out: int

    @classmethod
    def from_kraus(cls, ops: Iterable[np.ndarray], require_unital: bool = False) -> "CPMap":
        mats = []
        for k in ops:
            a = np.asarray(k, dtype=complex)
            if a.ndim != 2:
                raise ValueError(f"Kraus operator must be 2-d, got shape {a.shape}")
            if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
                raise ValueError("Kraus operator has non-finite entries")
            a = a.copy()
            a.setflags(write=False)
            mats.append(a)
        if not mats:
            raise ValueError("a CPMap needs at least one Kraus operator")
        shape = mats[0].shape
        if any(m.shape != shape for m in mats):
            raise ValueError("all Kraus operators must share one shape")
        out = cls(kraus=tuple(mats), dim_in=shape[0], dim_out=shape[1])
        if require_unital and not out.is_unital:
            raise ValueError(
                f"map is not unital (||T(I) - I|| = {out.unitality_defect():.3e})"
            )
        return out

    @classmethod
    def identity(cls, dim: int) -> "CPMap":
        return cls.from_kraus([np.eye(dim, dtype=complex)])

    def _stack(self) -> np.ndarray:
        return np.stack(self.kraus)

    def apply(self, a) -> np.ndarray:
        """Heisenberg action sum_k K† A K on an operator of size dim_in."""
        m = as_matrix(a)
        if m.shape != (self.dim_in, self.dim_in):
            raise ValueError(f"operator has dimension {m.shape[0]}, map expects {self.dim_in}")
        ks = self._stack()
        return np.einsum("kia,ij,kjb->ab", ks.conj(), m, ks)

    def dual_apply(self, rho) -> np.ndarray:
        """Schrodinger action sum_k K rho K† on a state of size dim_out."""
        m = as_matrix(rho)
        if m.shape != (self.dim_out, self.dim_out):
            raise ValueError(f"state has dimension {m.shape[0]}, map expects {self.dim_out}")
        ks = self._stack()
        return np.einsum("kai,ij,kbj->ab", ks, m, ks.conj())

    def unitality_defect(self) -> float:
        return op_norm(self.apply(np.eye(self.dim_in)) - np.eye(self.dim_out))

    @property
    def is_unital(self) -> bool:
        return self.unitality_defect() <= UNITAL_ATOL

    def compose(self, other: "CPMap") -> "CPMap":
        """Composite self ∘ other: ``other`` acts first in the Heisenberg picture."""
        if self.dim_in != other.dim_out:
            raise ValueError(
                f"cannot compose: inner map outputs dimension {other.dim_out}, "
                f"outer expects {self.dim_in}"
            )
        ops = [k @ l for k in other.kraus for l in self.kraus]
        return CPMap.from_kraus(ops)

    def tensor(self, other: "CPMap") -> "CPMap":
        """Tensor product map, Kraus operators ``k1 (x) k2`` for all pairs."""
        ops = [np.kron(k1, k2) for k1 in self.kraus for k2 in other.kraus]
        return CPMap.from_kraus(ops)

    def choi(self) -> np.ndarray:
        """Unnormalized Choi matrix (see module docstring for the convention)."""
        ks = self._stack()
        d = self.dim_out * self.dim_in
        j = np.einsum("kai,kbj->iajb", ks, ks.conj())
        return j.reshape(d, d)

    def is_cp(self, atol: float = CHOI_PSD_ATOL) -> bool:
        """True iff the Choi matrix is PSD within ``atol``."""
        w = np.linalg.eigvalsh(hermitize(self.choi()))
        return bool(float(w[0]) >= -atol)

    def to_json_dict(self) -> dict:
        return {
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "kraus": [matrix_to_json_rect(k) for k in self.kraus],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CPMap":
        ops = [matrix_from_json_rect(k) for k in obj["kraus"]]
        out = cls.from_kraus(ops)
        if out.dim_in != obj["dim_in"] or out.dim_out != obj["dim_out"]:
            raise ValueError("declared dimensions disagree with the Kraus shapes")
        return out


def matrix_to_json_rect(m) -> dict:
    """Rectangular variant of the matrix wire format (Kraus operators)."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    if a.shape[0] == a.shape[1]:
        return matrix_to_json(a)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json_rect(obj) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != im.shape or re.ndim != 2:
        raise ValueError("malformed rectangular matrix JSON")
    if re.shape[0] == re.shape[1]:
        return matrix_from_json(obj)
    return re + 1j * im


def _inv_sqrt_psd(s: np.ndarray, floor: float = 1e-12) -> np.ndarray:
    w, v = np.linalg.eigh(hermitize(s))
    if float(w[-1]) <= 0.0:
        raise ValueError("matrix has no positive part; cannot take inverse square root")
    w = np.clip(w, floor * float(w[-1]), None)
    return (v / np.sqrt(w)) @ v.conj().T


def random_unital_cpmap(dim: int, kraus_count: int, seed: int) -> CPMap:
    """Seeded random unital CP map on ``dim`` x ``dim`` matrices.

    Gaussian Kraus operators are normalized to unitality through the
    inverse square root of sum_k K†K, which spans generic unital maps.
    """
    if kraus_count < 1:
        raise ValueError("need at least one Kraus operator")
    rng = np.random.default_rng(seed)
    gs = rng.standard_normal((kraus_count, dim, dim)) + 1j * rng.standard_normal(
        (kraus_count, dim, dim)
    )
    s = sum(g.conj().T @ g for g in gs)
    w = _inv_sqrt_psd(s)
    return CPMap.from_kraus([g @ w for g in gs])

"""Measure-and-prepare coding of quantum states.

A :class:`CodingScheme` pairs an ``n``-outcome POVM ``{E_i}`` (the coding
side, which turns a state into classical data) with prepared states
``{sigma_i}`` (the decoding side, which rebuilds a state from the
outcome).  The classical middle layer is the commutative algebra of
functions on the outcome set, embedded as diagonal ``n x n`` matrices
when a full channel representation is needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _jsonio
from .channels import CPMap
from .operators import (
    PSD_ATOL,
    as_matrix,
    hermitize,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    validate_density,
)

__all__ = ["POVM_SUM_ATOL", "CodingScheme", "load_scheme"]

POVM_SUM_ATOL = 1e-10

_EIG_CUTOFF = 1e-12  # eigenvalues below this are dropped when building Kraus operators


@dataclass(frozen=True)
class CodingScheme:
    """POVM effects plus prepared states, validated on construction.

    ``effects`` and ``preparations`` are ``(n, d, d)`` complex stacks.
    Construction symmetrizes every operator, then rejects (never
    renormalizes) schemes whose effects are not PSD within ``-1e-10``,
    whose effects do not sum to the identity within ``1e-10`` in operator
    norm, or whose preparations are not valid density matrices.
    """

    effects: np.ndarray
    preparations: np.ndarray

    def __post_init__(self):
        eff = _coerce_stack(self.effects, "effects")
        prep = _coerce_stack(self.preparations, "preparations")
        if eff.shape != prep.shape:
            raise ValueError(
                f"effects stack {eff.shape} and preparations stack {prep.shape} disagree"
            )
        n, d, _ = eff.shape
        if d < 2:
            raise ValueError(f"scheme dimension must be at least 2, got {d}")
        for i in range(n):
            w = np.linalg.eigvalsh(eff[i])
            if float(w[0]) < -PSD_ATOL:
                raise ValueError(
                    f"effect {i} is not positive semidefinite (min eigenvalue {float(w[0]):.3e})"
                )
        defect = op_norm(eff.sum(axis=0) - np.eye(d))
        if defect > POVM_SUM_ATOL:
            raise ValueError(f"effects do not sum to the identity (defect {defect:.3e})")
        for i in range(n):
            try:
                prep[i] = validate_density(prep[i])
            except ValueError as exc:
                raise ValueError(f"preparation {i}: {exc}") from None
        eff.setflags(write=False)
        prep.setflags(write=False)
        object.__setattr__(self, "effects", eff)
        object.__setattr__(self, "preparations", prep)

    @property
    def d(self) -> int:
        return self.effects.shape[1]

    @property
    def n(self) -> int:
        return self.effects.shape[0]

    def c_apply(self, f) -> np.ndarray:
        """Coding map on a classical vector: sum_i f(i) E_i."""
        vec = np.asarray(f, dtype=complex)
        if vec.shape != (self.n,):
            raise ValueError(f"classical vector must have length {self.n}, got {vec.shape}")
        return np.einsum("i,iab->ab", vec, self.effects)

    def d_apply(self, b) -> np.ndarray:
        """Decoding map on an operator: the classical vector tr(sigma_i B)."""
        m = self._check_dim(b)
        return np.einsum("iab,ba->i", self.preparations, m)

    def cd_apply(self, b) -> np.ndarray:
        """Heisenberg-picture composite sum_i tr(sigma_i B) E_i."""
        m = self._check_dim(b)
        t = np.einsum("iab,ba->i", self.preparations, m)
        return np.einsum("i,iab->ab", t, self.effects)

    def measure_prepare(self, rho) -> np.ndarray:
        """Schrodinger-picture composite: measure, then prepare sigma_i.

        Returns ``sum_i tr(rho E_i) sigma_i``, a valid density matrix.
        """
        m = validate_density(rho)
        if m.shape[0] != self.d:
            raise ValueError(f"state has dimension {m.shape[0]}, scheme expects {self.d}")
        probs = np.einsum("iab,ba->i", self.effects, m)
        return hermitize(np.einsum("i,iab->ab", probs, self.preparations))

    def as_cpmaps(self) -> tuple[CPMap, CPMap]:
        """The coding/decoding pair as CP maps through the diagonal embedding.

        The decoding map sends ``d x d`` observables to ``n x n`` diagonal
        matrices; the coding map reads the diagonal back into ``sum_i
        f(i) E_i`` and annihilates the off-diagonal classical sector.
        Their composite agrees with :meth:`cd_apply`.
        """
        d, n = self.d, self.n
        c_ops = []
        for i in range(n):
            w, v = np.linalg.eigh(self.effects[i])
            for lam, vec in zip(w, v.T):
                if lam <= _EIG_CUTOFF:
                    continue
                k = np.zeros((n, d), dtype=complex)
                k[i, :] = np.sqrt(lam) * vec.conj()
                c_ops.append(k)
        d_ops = []
        for i in range(n):
            w, v = np.linalg.eigh(self.preparations[i])
            for lam, vec in zip(w, v.T):
                if lam <= _EIG_CUTOFF:
                    continue
                k = np.zeros((d, n), dtype=complex)
                k[:, i] = np.sqrt(lam) * vec
                d_ops.append(k)
        return CPMap.from_kraus(c_ops), CPMap.from_kraus(d_ops)

    def _check_dim(self, b) -> np.ndarray:
        m = as_matrix(b)
        if m.shape[0] != self.d:
            raise ValueError(f"operator has dimension {m.shape[0]}, scheme expects {self.d}")
        return m

    # -- scheme file format ------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "d": self.d,
            "n": self.n,
            "effects": [matrix_to_json(e) for e in self.effects],
            "preparations": [matrix_to_json(p) for p in self.preparations],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CodingScheme":
        if not isinstance(obj, dict):
            raise ValueError("scheme JSON must be an object")
        if obj.get("version") != 1:
            raise ValueError(f"unsupported scheme file version {obj.get('version')!r}")
        for key in ("d", "n", "effects", "preparations"):
            if key not in obj:
                raise ValueError(f'scheme JSON is missing the "{key}" field')
        effects = [matrix_from_json(e) for e in obj["effects"]]
        preparations = [matrix_from_json(p) for p in obj["preparations"]]
        scheme = cls(effects=np.stack(effects), preparations=np.stack(preparations))
        if scheme.d != obj["d"] or scheme.n != obj["n"]:
            raise ValueError("declared (d, n) disagree with the operator shapes")
        return scheme

    def save(self, path) -> None:
        Path(path).write_text(_jsonio.dumps(self.to_json_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "CodingScheme":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


def load_scheme(path) -> CodingScheme:
    """Read and validate a scheme file."""
    return CodingScheme.load(path)


def _coerce_stack(mats, label: str) -> np.ndarray:
    arr = np.stack([as_matrix(m) for m in np.asarray(mats, dtype=complex)])
    if arr.ndim != 3 or arr.shape[0] < 1:
        raise ValueError(f"{label} must be a non-empty stack of square matrices")
    return np.stack([hermitize(m) for m in arr])

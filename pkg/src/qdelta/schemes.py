"""Canonical coding schemes used as fixtures and bound saturators.

Constructions
-------------
sic_qubit
    Four effects ``|psi_i><psi_i| / 2`` on the tetrahedral Bloch
    directions ``(1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)`` (each divided
    by sqrt(3)); preparations are the same projectors at full weight.
    The exact rational Bloch coordinates keep the construction
    reproducible across implementations.
trine_qubit
    Three effects ``(2/3)|psi_i><psi_i|`` on equatorial Bloch directions
    at 0, 120 and 240 degrees; preparations are the projectors.
projective
    The ``d`` computational-basis projectors used both as effects and as
    preparations (measure a basis, re-prepare the observed basis state).
mub
    For prime ``d`` in {2, 3}: all ``d(d+1)`` rank-1 projectors of the
    ``d+1`` mutually unbiased bases, scaled by ``1/(d+1)`` as effects and
    used unscaled as preparations.  For ``d = 2`` the bases are the three
    Pauli eigenbases.  For ``d = 3`` the bases are the computational
    basis plus the three phase bases with components
    ``omega^(a j^2 + k j) / sqrt(3)`` (``omega = exp(2 pi i / 3)``,
    basis index ``a``, vector index ``k``, component ``j``).
single_outcome
    One effect ``I`` with preparation ``I/d``; the constant channel.
random
    A seeded Gram-normalized POVM (``E_i = S^{-1/2} A_i† A_i S^{-1/2}``
    for Gaussian ``A_i``, ``S = sum A_i† A_i``) with seeded random
    full-rank preparations.  Always a valid scheme, for any draw.
"""

from __future__ import annotations

import numpy as np

from .channels import _inv_sqrt_psd
from .coding import CodingScheme
from .operators import PAULIS, bloch_to_state, hermitize, random_density

__all__ = ["SCHEME_NAMES", "build_scheme", "qubit_library", "library_for_dimension"]

SCHEME_NAMES = ("sic_qubit", "trine_qubit", "projective", "mub", "single_outcome", "random")

_TETRAHEDRON = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / np.sqrt(3.0)


def build_scheme(name: str, *, d: int | None = None, n: int | None = None, seed: int = 0) -> CodingScheme:
    """Build a named scheme; ``d``, ``n`` and ``seed`` apply where meaningful."""
    if name == "sic_qubit":
        _require_qubit(name, d)
        projs = np.stack([bloch_to_state(v) for v in _TETRAHEDRON])
        return CodingScheme(effects=projs / 2.0, preparations=projs)
    if name == "trine_qubit":
        _require_qubit(name, d)
        angles = 2.0 * np.pi * np.arange(3) / 3.0
        dirs = np.stack([np.cos(angles), np.sin(angles), np.zeros(3)], axis=1)
        projs = np.stack([bloch_to_state(v) for v in dirs])
        return CodingScheme(effects=projs * (2.0 / 3.0), preparations=projs)
    if name == "projective":
        dim = 2 if d is None else d
        eye = np.eye(dim, dtype=complex)
        projs = np.stack([np.outer(eye[:, i], eye[:, i].conj()) for i in range(dim)])
        return CodingScheme(effects=projs, preparations=projs)
    if name == "mub":
        dim = 2 if d is None else d
        vectors = _mub_vectors(dim)
        projs = np.stack([np.outer(v, v.conj()) for v in vectors])
        return CodingScheme(effects=projs / (dim + 1.0), preparations=projs)
    if name == "single_outcome":
        dim = 2 if d is None else d
        eye = np.eye(dim, dtype=complex)
        return CodingScheme(effects=eye[None, :, :], preparations=eye[None, :, :] / dim)
    if name == "random":
        dim = 2 if d is None else d
        outcomes = 4 if n is None else n
        return _random_scheme(dim, outcomes, seed)
    raise ValueError(f"unknown scheme name {name!r}; known: {', '.join(SCHEME_NAMES)}")


def qubit_library(random_seeds: tuple[int, ...] = ()) -> dict[str, CodingScheme]:
    """All named d = 2 schemes, optionally plus seeded random ones."""
    out = {
        "sic_qubit": build_scheme("sic_qubit"),
        "trine_qubit": build_scheme("trine_qubit"),
        "projective": build_scheme("projective", d=2),
        "mub": build_scheme("mub", d=2),
        "single_outcome": build_scheme("single_outcome", d=2),
    }
    for seed in random_seeds:
        out[f"random_{seed}"] = build_scheme("random", d=2, n=4, seed=seed)
    return out


def library_for_dimension(d: int) -> dict[str, CodingScheme]:
    if d == 2:
        return qubit_library()
    out = {
        "projective": build_scheme("projective", d=d),
        "single_outcome": build_scheme("single_outcome", d=d),
        "random": build_scheme("random", d=d, n=d * d, seed=0),
    }
    if d == 3:
        out["mub"] = build_scheme("mub", d=3)
    return out


def _require_qubit(name: str, d: int | None) -> None:
    if d not in (None, 2):
        raise ValueError(f"scheme {name!r} is only defined for d = 2, got d = {d}")


def _mub_vectors(d: int) -> list[np.ndarray]:
    if d == 2:
        vectors = []
        for sigma in PAULIS:
            _, v = np.linalg.eigh(sigma)
            vectors.extend([v[:, 0], v[:, 1]])
        return vectors
    if d == 3:
        omega = np.exp(2j * np.pi / 3.0)
        vectors = [np.eye(3, dtype=complex)[:, k] for k in range(3)]
        j = np.arange(3)
        for a in range(3):
            for k in range(3):
                vectors.append(omega ** (a * j * j + k * j) / np.sqrt(3.0))
        return vectors
    raise ValueError(f"mub scheme supports d in {{2, 3}}, got d = {d}")


def _random_scheme(d: int, n: int, seed: int) -> CodingScheme:
    if n < 1:
        raise ValueError(f"outcome count must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    mats = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    grams = np.stack([a.conj().T @ a for a in mats])
    w = _inv_sqrt_psd(grams.sum(axis=0))
    effects = np.stack([hermitize(w @ g @ w) for g in grams])
    prep_seeds = rng.integers(0, 2**31 - 1, size=n)
    preparations = np.stack([random_density(d, int(s)) for s in prep_seeds])
    return CodingScheme(effects=effects, preparations=preparations)

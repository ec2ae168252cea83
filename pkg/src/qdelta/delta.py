"""Worst-case deviation between inputs and their measure-and-prepare images.

Two equivalent formulations are estimated:

* effect form: ``sup_P || P - CD(P) ||`` over projections ``P`` of rank
  1..d-1 (the supremum over all ``0 <= B <= I`` is attained there, since
  the objective is a norm of a linear image over a convex set whose
  extreme points are the projections);
* state form: ``sup_rho D(rho, MP(rho))`` over pure states, with ``D``
  the trace distance (pure states suffice by the same extremality
  argument).

Both searches are lower-converging: every reported value is certified by
a stored witness at which re-evaluation reproduces the value.  For
qubits the candidates live on the Bloch sphere and are scanned on a
deterministic Fibonacci-spiral grid followed by derivative-free pattern
refinement; for d >= 3 the search multistarts over seeded random
orthonormal frames of every admissible rank and refines by perturb-and-
reorthonormalize steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coding import CodingScheme
from .operators import (
    hermitize,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    validate_projection,
)

__all__ = [
    "SearchConfig",
    "DeltaReport",
    "delta_effect_form",
    "delta_state_form",
    "delta_forms_agree",
    "spectrum_containment",
]

_REFINE_STARTS = 8  # number of grid points that seed local refinement (d = 2)


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the inner maximization."""

    grid_points: int = 20000
    restarts: int = 64
    refine_iters: int = 200
    seed: int = 7
    tol: float = 1e-6

    def __post_init__(self):
        if self.grid_points < 1:
            raise ValueError("grid_points must be at least 1")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class DeltaReport:
    """A certified lower estimate of the worst-case deviation."""

    value: float
    witness_kind: str  # "effect" or "state"
    witness: np.ndarray
    method: str
    evaluations: int
    tolerance: float

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "witness_kind": self.witness_kind,
            "witness": matrix_to_json(self.witness),
            "method": self.method,
            "evaluations": self.evaluations,
            "tolerance": self.tolerance,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "DeltaReport":
        return cls(
            value=float(obj["value"]),
            witness_kind=str(obj["witness_kind"]),
            witness=matrix_from_json(obj["witness"]),
            method=str(obj["method"]),
            evaluations=int(obj["evaluations"]),
            tolerance=float(obj["tolerance"]),
        )


# -- batched objectives ------------------------------------------------------


def _qubit_eigs(diff: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint and radius of the eigenvalue pair of 2x2 Hermitian stacks."""
    mid = (diff[:, 0, 0].real + diff[:, 1, 1].real) / 2.0
    gap = (diff[:, 0, 0].real - diff[:, 1, 1].real) / 2.0
    rad = np.sqrt(gap * gap + np.abs(diff[:, 0, 1]) ** 2)
    return mid, rad


def effect_deviation(scheme: CodingScheme, operators: np.ndarray) -> np.ndarray:
    """``|| B - CD(B) ||`` for a ``(N, d, d)`` stack of Hermitian operators."""
    t = np.einsum("iab,kba->ki", scheme.preparations, operators)
    cd = np.einsum("ki,iab->kab", t, scheme.effects)
    diff = operators - cd
    diff = (diff + np.conj(np.swapaxes(diff, -1, -2))) / 2
    if scheme.d == 2:
        mid, rad = _qubit_eigs(diff)
        return np.abs(mid) + rad
    return np.abs(np.linalg.eigvalsh(diff)).max(axis=-1)


def state_deviation(scheme: CodingScheme, states: np.ndarray) -> np.ndarray:
    """Trace distance between each state and its measure-and-prepare image."""
    probs = np.einsum("iab,kba->ki", scheme.effects, states)
    out = np.einsum("ki,iab->kab", probs, scheme.preparations)
    diff = states - out
    diff = (diff + np.conj(np.swapaxes(diff, -1, -2))) / 2
    if scheme.d == 2:
        mid, rad = _qubit_eigs(diff)
        return np.maximum(np.abs(mid), rad)
    return 0.5 * np.abs(np.linalg.eigvalsh(diff)).sum(axis=-1)


# -- candidate parametrizations ----------------------------------------------


def _sphere_grid(count: int) -> np.ndarray:
    """Deterministic quasi-uniform Fibonacci-spiral grid on the unit sphere."""
    i = np.arange(count)
    z = 1.0 - (2.0 * i + 1.0) / count
    phi = i * (np.pi * (3.0 - np.sqrt(5.0)))
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _qubit_states(directions: np.ndarray) -> np.ndarray:
    """(N, 3) unit Bloch vectors -> (N, 2, 2) rank-1 projections/pure states."""
    ns = np.atleast_2d(directions)
    out = np.empty((ns.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = (1.0 + ns[:, 2]) / 2.0
    out[:, 1, 1] = (1.0 - ns[:, 2]) / 2.0
    out[:, 0, 1] = (ns[:, 0] - 1j * ns[:, 1]) / 2.0
    out[:, 1, 0] = (ns[:, 0] + 1j * ns[:, 1]) / 2.0
    return out


def _tangent_pairs(ns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal tangent pairs for a batch of unit vectors."""
    axes = np.zeros_like(ns)
    axes[np.arange(ns.shape[0]), np.argmin(np.abs(ns), axis=1)] = 1.0
    t1 = np.cross(ns, axes)
    t1 /= np.linalg.norm(t1, axis=1, keepdims=True)
    t2 = np.cross(ns, t1)
    return t1, t2


def _refine_sphere(values_fn, starts: np.ndarray, values0: np.ndarray, iters: int, tol: float):
    """Pattern search on the sphere: step along tangent pairs, halve on failure.

    All starts advance in lockstep; each row's trajectory depends only on
    its own state, so the result matches refining the starts one by one.
    """
    m = starts.shape[0]
    ns = starts.copy()
    best = np.asarray(values0, dtype=float).copy()
    steps = np.full(m, 0.1)
    evals = 0
    for _ in range(iters):
        if np.all(steps < tol):
            break
        t1, t2 = _tangent_pairs(ns)
        s = steps[:, None]
        cands = np.stack([ns + s * t1, ns - s * t1, ns + s * t2, ns - s * t2], axis=1)
        cands /= np.linalg.norm(cands, axis=2, keepdims=True)
        vals = values_fn(cands.reshape(-1, 3)).reshape(m, 4)
        evals += 4 * m
        k = np.argmax(vals, axis=1)
        won = vals[np.arange(m), k] > best
        ns[won] = cands[np.arange(m), k][won]
        best[won] = vals[np.arange(m), k][won]
        steps[~won] /= 2.0
    return ns, best, evals


def _search_bloch(values_fn, cfg: SearchConfig):
    grid = _sphere_grid(cfg.grid_points)
    vals = values_fn(grid)
    evals = cfg.grid_points
    order = np.argsort(-vals, kind="stable")[: min(_REFINE_STARTS, cfg.grid_points)]
    ns, refined, e = _refine_sphere(values_fn, grid[order], vals[order], cfg.refine_iters, cfg.tol)
    evals += e
    # ties broken by first-found: strict ordering on (value, candidate index)
    winner = int(np.argmax(refined))
    best_n, best_v = ns[winner], float(refined[winner])
    if float(vals[order[0]]) >= best_v:
        best_n, best_v = grid[order[0]], float(vals[order[0]])
    return best_n, best_v, evals


def _random_frame(rng: np.random.Generator, d: int, rank: int) -> np.ndarray:
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    q, _ = np.linalg.qr(g)
    return q


def _refine_frame(values_fn, q0: np.ndarray, value0: float, iters: int, tol: float, rng):
    """Hill climb over orthonormal frames; perturb, re-orthonormalize, shrink."""
    d, rank = q0.shape
    q, best = q0, float(value0)
    step = 0.3
    evals = 0
    for _ in range(iters):
        if step < tol:
            break
        perturbs = rng.standard_normal((4, d, rank)) + 1j * rng.standard_normal((4, d, rank))
        frames = [np.linalg.qr(q + step * p)[0] for p in perturbs]
        mats = np.stack([f @ f.conj().T for f in frames])
        vals = values_fn(mats)
        evals += 4
        k = int(np.argmax(vals))
        if float(vals[k]) > best:
            q, best = frames[k], float(vals[k])
        else:
            step *= 0.6
    return q, best, evals


def _search_frames(values_fn, d: int, ranks, cfg: SearchConfig):
    rng = np.random.default_rng(cfg.seed)
    best_p = None
    best_v = -1.0
    evals = 0
    for rank in ranks:
        for _ in range(cfg.restarts):
            q = _random_frame(rng, d, rank)
            p0 = q @ q.conj().T
            v0 = float(values_fn(p0[None])[0])
            evals += 1
            q, v, e = _refine_frame(values_fn, q, v0, cfg.refine_iters, cfg.tol, rng)
            evals += e
            if v > best_v:
                best_v = v
                best_p = hermitize(q @ q.conj().T)
    return best_p, best_v, evals


# -- public operations ---------------------------------------------------------


def delta_effect_form(scheme: CodingScheme, cfg: SearchConfig | None = None) -> DeltaReport:
    """Estimate ``sup_P || P - CD(P) ||`` over projections of rank 1..d-1."""
    cfg = cfg or SearchConfig()
    d = scheme.d
    if d == 2:
        fn = lambda ns: effect_deviation(scheme, _qubit_states(ns))
        n, value, evals = _search_bloch(fn, cfg)
        witness = _qubit_states(n[None])[0]
        method = f"bloch-grid-{cfg.grid_points}+refine"
    else:
        fn = lambda mats: effect_deviation(scheme, mats)
        witness, value, evals = _search_frames(fn, d, range(1, d), cfg)
        method = f"rank-multistart-{cfg.restarts}+refine"
    return DeltaReport(float(value), "effect", witness, method, evals, cfg.tol)


def delta_state_form(scheme: CodingScheme, cfg: SearchConfig | None = None) -> DeltaReport:
    """Estimate ``sup_rho D(rho, MP(rho))`` over pure states."""
    cfg = cfg or SearchConfig()
    d = scheme.d
    if d == 2:
        fn = lambda ns: state_deviation(scheme, _qubit_states(ns))
        n, value, evals = _search_bloch(fn, cfg)
        witness = _qubit_states(n[None])[0]
        method = f"bloch-grid-{cfg.grid_points}+refine"
    else:
        fn = lambda mats: state_deviation(scheme, mats)
        witness, value, evals = _search_frames(fn, d, (1,), cfg)
        method = f"pure-multistart-{cfg.restarts}+refine"
    return DeltaReport(float(value), "state", witness, method, evals, cfg.tol)


def delta_forms_agree(scheme: CodingScheme, cfg: SearchConfig | None = None) -> float:
    """Absolute gap between the effect-form and state-form estimates.

    For d = 2 at the default configuration the gap stays below
    ``max(2 * cfg.tol, 1e-3)``.
    """
    cfg = cfg or SearchConfig()
    return abs(delta_effect_form(scheme, cfg).value - delta_state_form(scheme, cfg).value)


def spectrum_containment(scheme: CodingScheme, x) -> bool:
    """Check that ``spec(CD(X))`` lies in ``[0, dx] U [1-dx, 1]``.

    ``dx`` is ``|| X - CD(X) ||`` computed exactly for the given
    projection ``X``; containment then must hold (each eigenvalue of
    ``CD(X)`` sits within ``dx`` of the {0, 1} spectrum of ``X``, and
    ``0 <= CD(X) <= I``), so a ``False`` return flags a genuine bug.
    """
    p = validate_projection(x)
    if p.shape[0] != scheme.d:
        raise ValueError(f"projection has dimension {p.shape[0]}, scheme expects {scheme.d}")
    cd = hermitize(scheme.cd_apply(p))
    dx = op_norm(p - cd)
    w = np.linalg.eigvalsh(cd)
    slack = 1e-10
    low = (w >= -slack) & (w <= dx + slack)
    high = (w >= 1.0 - dx - slack) & (w <= 1.0 + slack)
    return bool(np.all(low | high))

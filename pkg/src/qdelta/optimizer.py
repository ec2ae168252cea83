"""Outer minimization over coding schemes of the worst-case deviation.

Schemes are parametrized by unconstrained real vectors.  Each effect
comes from a factor matrix through the Gram construction
``E_i = S^{-1/2} G_i S^{-1/2}`` with ``G_i = L_i L_i†`` and
``S = sum_i G_i`` (a valid POVM for any draw), and each preparation from
``sigma_i = L_i L_i† / tr(L_i L_i†)``.  Two factor shapes are used:

* full rank: lower-triangular ``d x d`` factors (``2 n d^2`` reals), the
  starting parametrization for every restart;
* rank one: single column factors (``4 n d`` reals), used to polish the
  best restarts.  Low-deviation schemes push their preparations toward
  pure states and their effects toward scaled projectors, which sit on
  the rank boundary where the quadratic full-rank map loses its local
  slope; re-expressing the incumbent in rank-one coordinates moves that
  optimum into the interior and lets the polish finish the descent.

Each restart runs staged derivative-free descent (finite-difference
L-BFGS-B sweeps at decreasing difference steps, then Nelder-Mead
simplex polish).  Restarts are independent and may run on threads; they
are merged deterministically by (value, restart index).

No honest run reports a value below the two analytic floors, the
Cauchy-Schwarz floor ``(3 - sqrt(5))/4`` and the cloning floor
``(d-1)/(d+1)``, beyond the inner maximizer's undershoot.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize as _sciopt

from .channels import _inv_sqrt_psd
from .coding import CodingScheme
from .delta import SearchConfig, delta_effect_form
from .operators import hermitize

__all__ = [
    "DEFAULT_INNER",
    "OptimizerConfig",
    "OptimizationResult",
    "scheme_from_params",
    "scheme_from_vector_params",
    "optimize",
]

_PENALTY = 1.0  # objective value charged to degenerate parameter points
_PHASE1_EPS = (1e-4, 1e-5)
_PHASE2_EPS = (1e-5, 1e-6)

#: coarse inner search used while the outer loop explores
DEFAULT_INNER = SearchConfig(grid_points=1536, restarts=12, refine_iters=80, seed=11, tol=1e-5)


@dataclass(frozen=True)
class OptimizerConfig:
    d: int = 2
    n: int = 4
    restarts: int = 16
    outer_iters: int = 256
    inner: SearchConfig = field(default=DEFAULT_INNER)
    seed: int = 0
    threads: int = 1
    polish_top: int = 3

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")

    @property
    def param_count(self) -> int:
        return 2 * self.n * self.d * self.d

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "restarts": self.restarts,
            "outer_iters": self.outer_iters,
            "inner": {
                "grid_points": self.inner.grid_points,
                "restarts": self.inner.restarts,
                "refine_iters": self.inner.refine_iters,
                "seed": self.inner.seed,
                "tol": self.inner.tol,
            },
            "seed": self.seed,
            "threads": self.threads,
            "polish_top": self.polish_top,
        }


@dataclass(frozen=True)
class OptimizationResult:
    best_scheme: CodingScheme
    delta_hat: float
    history: tuple[tuple[int, float], ...]
    config: OptimizerConfig

    def to_json_dict(self) -> dict:
        return {
            "delta_hat": self.delta_hat,
            "history": [[int(i), float(v)] for i, v in self.history],
            "config": self.config.to_json_dict(),
            "best_scheme": self.best_scheme.to_json_dict(),
        }


# -- parameter maps ------------------------------------------------------------


def _lower_triangular(params: np.ndarray, d: int) -> np.ndarray:
    """Complex lower-triangular factor from ``d*d`` reals (diag first)."""
    m = np.zeros((d, d), dtype=complex)
    m[np.diag_indices(d)] = params[:d]
    rows, cols = np.tril_indices(d, -1)
    off = params[d:].reshape(-1, 2)
    m[rows, cols] = off[:, 0] + 1j * off[:, 1]
    return m


def _gram_scheme(effect_grams, prep_grams) -> CodingScheme | None:
    grams = np.stack(effect_grams)
    s = grams.sum(axis=0)
    eigs = np.linalg.eigvalsh(hermitize(s))
    if float(eigs[0]) < 1e-10 * max(float(eigs[-1]), 1.0):
        return None
    w = _inv_sqrt_psd(s)
    effects = np.stack([hermitize(w @ g @ w) for g in grams])
    preparations = []
    for g in prep_grams:
        tr = float(np.trace(g).real)
        if tr < 1e-10:
            return None
        preparations.append(hermitize(g / tr))
    return CodingScheme(effects=effects, preparations=np.stack(preparations))


def scheme_from_params(x, d: int, n: int) -> CodingScheme | None:
    """Full-rank map: ``2*n*d*d`` reals to a scheme; None when degenerate."""
    x = np.asarray(x, dtype=float)
    per = d * d
    if x.shape != (2 * n * per,):
        raise ValueError(f"expected {2 * n * per} parameters, got shape {x.shape}")
    factors = [_lower_triangular(x[i * per : (i + 1) * per], d) for i in range(2 * n)]
    effect_grams = [f @ f.conj().T for f in factors[:n]]
    prep_grams = [f @ f.conj().T for f in factors[n:]]
    return _gram_scheme(effect_grams, prep_grams)


def scheme_from_vector_params(x, d: int, n: int) -> CodingScheme | None:
    """Rank-one map: ``4*n*d`` reals (one complex vector per component)."""
    x = np.asarray(x, dtype=float)
    per = 2 * d
    if x.shape != (2 * n * per,):
        raise ValueError(f"expected {2 * n * per} parameters, got shape {x.shape}")
    vecs = [x[i * per : i * per + d] + 1j * x[i * per + d : (i + 1) * per] for i in range(2 * n)]
    effect_grams = [np.outer(v, v.conj()) for v in vecs[:n]]
    prep_grams = [np.outer(v, v.conj()) for v in vecs[n:]]
    return _gram_scheme(effect_grams, prep_grams)


def _snap_to_vector_params(scheme: CodingScheme) -> np.ndarray:
    """Dominant rank-one factors of a scheme, as vector parameters."""
    parts = []
    for e in scheme.effects:
        w, v = np.linalg.eigh(e)
        vec = np.sqrt(max(float(w[-1]), 0.0)) * v[:, -1]
        parts.append(np.concatenate([vec.real, vec.imag]))
    for p in scheme.preparations:
        _, v = np.linalg.eigh(p)
        vec = v[:, -1]
        parts.append(np.concatenate([vec.real, vec.imag]))
    return np.concatenate(parts)


# -- staged descent ------------------------------------------------------------


class _Tracker:
    """Wrap an objective; record the running best and the improvement trace."""

    def __init__(self, fn, x0):
        self._fn = fn
        self.count = 0
        self.best = np.inf
        self.best_x = np.asarray(x0, dtype=float).copy()
        self.trace: list[tuple[int, float]] = []

    def __call__(self, x):
        value = self._fn(x)
        self.count += 1
        if value < self.best:
            self.best = value
            self.best_x = np.array(x, dtype=float, copy=True)
            self.trace.append((self.count, float(value)))
        return value


def _objective(x, mapper, d, n, inner) -> float:
    scheme = mapper(x, d, n)
    if scheme is None:
        return _PENALTY
    return delta_effect_form(scheme, inner).value


def _staged_descent(tracker: _Tracker, eps_stages, nm_iters: int) -> None:
    maxfun = max(150, 2 * nm_iters)
    for eps in eps_stages:
        _sciopt.minimize(
            tracker,
            tracker.best_x,
            method="L-BFGS-B",
            options={"maxfun": maxfun, "eps": eps, "ftol": 1e-14, "gtol": 1e-12},
        )
    for _ in range(2):
        _sciopt.minimize(
            tracker,
            tracker.best_x,
            method="Nelder-Mead",
            options={"maxiter": nm_iters, "adaptive": True, "xatol": 1e-11, "fatol": 1e-13},
        )


def _phase1_restart(cfg: OptimizerConfig, index: int):
    rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(index,)))
    x0 = rng.standard_normal(cfg.param_count)
    tracker = _Tracker(lambda x: _objective(x, scheme_from_params, cfg.d, cfg.n, cfg.inner), x0)
    tracker(x0)
    _staged_descent(tracker, _PHASE1_EPS, cfg.outer_iters // 2)
    return tracker


def _phase2_polish(cfg: OptimizerConfig, scheme: CodingScheme):
    x0 = _snap_to_vector_params(scheme)
    fn = lambda x: _objective(x, scheme_from_vector_params, cfg.d, cfg.n, cfg.inner)
    tracker = _Tracker(fn, x0)
    if tracker(x0) >= _PENALTY:
        return tracker  # snap infeasible (e.g. n < d); keep the phase-1 answer
    _staged_descent(tracker, _PHASE2_EPS, cfg.outer_iters)
    return tracker


def optimize(cfg: OptimizerConfig | None = None) -> OptimizationResult:
    """Minimize the deviation over schemes; returns the best scheme found.

    Deterministic for a fixed config: restart starting points derive from
    per-index seed sequences, and results merge in restart order no
    matter how the threads were scheduled.
    """
    cfg = cfg or OptimizerConfig()
    indices = range(cfg.restarts)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            phase1 = list(pool.map(lambda i: _phase1_restart(cfg, i), indices))
    else:
        phase1 = [_phase1_restart(cfg, i) for i in indices]

    history: list[tuple[int, float]] = []
    offset = 0
    running = np.inf
    for tracker in phase1:
        for local_count, value in tracker.trace:
            if value < running:
                running = value
                history.append((offset + local_count, value))
        offset += tracker.count

    order = sorted(indices, key=lambda i: (phase1[i].best, i))
    best_value, best_x, best_mapper = np.inf, None, scheme_from_params
    for i in order:
        if phase1[i].best < best_value:
            best_value, best_x = phase1[i].best, phase1[i].best_x
    for i in order[: max(cfg.polish_top, 0)]:
        seed_scheme = scheme_from_params(phase1[i].best_x, cfg.d, cfg.n)
        if seed_scheme is None:
            continue
        polished = _phase2_polish(cfg, seed_scheme)
        for local_count, value in polished.trace:
            if value < running:
                running = value
                history.append((offset + local_count, value))
        offset += polished.count
        if polished.best < best_value:
            best_value, best_x, best_mapper = polished.best, polished.best_x, scheme_from_vector_params

    best_scheme = best_mapper(best_x, cfg.d, cfg.n)
    if best_scheme is None:
        raise RuntimeError("optimizer converged to a degenerate parameter point")
    delta_hat = float(delta_effect_form(best_scheme, cfg.inner).value)
    if not history:
        history.append((offset, delta_hat))
    return OptimizationResult(
        best_scheme=best_scheme,
        delta_hat=delta_hat,
        history=tuple(history),
        config=cfg,
    )

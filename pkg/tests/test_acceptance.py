"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; each test also enforces its runtime budget.
"""

import time

import numpy as np
import pytest

from qdelta.cauchy_schwarz import (
    CS_DELTA_BOUND,
    InducedForm,
    bound_chain,
    cauchy_schwarz_check,
    commutator_decomposition_residual,
    half_commutator_pair,
)
from qdelta.channels import commutator, random_unital_cpmap
from qdelta.cloning import ClonerSpec, cloning_bound, cloning_limit
from qdelta.delta import (
    SearchConfig,
    delta_effect_form,
    delta_state_form,
    spectrum_containment,
)
from qdelta.operators import op_norm, random_projection
from qdelta.optimizer import OptimizerConfig, optimize
from qdelta.schemes import build_scheme, qubit_library

from conftest import random_complex


def _report(num: int, name: str, ok: bool, detail: str, elapsed: float, budget: float):
    line = f"[criterion {num}] {name}: {'PASS' if ok and elapsed < budget else 'FAIL'} ({detail}; {elapsed:.1f}s / budget {budget:.0f}s)"
    print(line)
    assert ok, f"criterion {num} ({name}): {detail}"
    assert elapsed < budget, f"criterion {num} ({name}) exceeded budget: {elapsed:.1f}s"


def test_criterion_1_cauchy_schwarz_suite():
    start = time.time()
    rng = np.random.default_rng(2024)
    counts = {2: 334, 3: 333, 4: 333}
    failures = 0
    worst = -np.inf
    for d, trials in counts.items():
        for _ in range(trials):
            t = random_unital_cpmap(
                d, kraus_count=int(rng.integers(1, 4)), seed=int(rng.integers(2**31))
            )
            form = InducedForm.of_cpmap(t)
            a = random_complex(rng, d, d)
            b = random_complex(rng, d, d)
            check = cauchy_schwarz_check(form, a, b, slack=1e-9)
            worst = max(worst, check.residual)
            if not check.passed:
                failures += 1
    _report(
        1,
        "Cauchy-Schwarz suite",
        failures == 0,
        f"1000 triples over d=2,3,4; failures={failures}, max residual={worst:.2e}",
        time.time() - start,
        30.0,
    )


def test_criterion_2_decomposition_identity():
    start = time.time()
    worst = 0.0
    for seed in range(100):
        scheme = build_scheme("random", d=2, n=3, seed=seed)
        x = random_projection(2, 1, seed=1000 + seed)
        y = random_projection(2, 1, seed=2000 + seed)
        worst = max(worst, commutator_decomposition_residual(scheme, x, y))
    xs, ys = half_commutator_pair(2)
    comm_norm = op_norm(commutator(xs, ys))
    ok = worst <= 1e-12 and abs(comm_norm - 0.5) <= 1e-12
    _report(
        2,
        "decomposition identity",
        ok,
        f"max residual={worst:.2e}, commutator norm={comm_norm:.15f}",
        time.time() - start,
        5.0,
    )


def test_criterion_3_deviation_floor_and_chain():
    start = time.time()
    cfg = SearchConfig(grid_points=8000, refine_iters=150, seed=5, tol=1e-6)
    floor = CS_DELTA_BOUND - 1e-6
    details = []
    ok = True
    for name, scheme in qubit_library(random_seeds=(0, 1)).items():
        chain = bound_chain(scheme, cfg, tol=1e-6)
        rhs = chain.delta_hat + 2 * chain.delta_hat * (1 - chain.delta_hat) + 1e-6
        good = chain.delta_hat >= floor and chain.commutator_norm <= rhs
        ok = ok and good
        details.append(f"{name}={chain.delta_hat:.4f}")
    _report(
        3,
        "deviation floor (3-sqrt5)/4 and bound chain",
        ok,
        ", ".join(details),
        time.time() - start,
        60.0,
    )


def test_criterion_4_tightness_at_d2():
    start = time.time()
    scheme = build_scheme("sic_qubit")
    cfg = SearchConfig(grid_points=8000, refine_iters=150, seed=5, tol=1e-6)
    eff = delta_effect_form(scheme, cfg).value
    sta = delta_state_form(scheme, cfg).value
    ok = abs(eff - 1 / 3) <= 1e-3 and abs(sta - 1 / 3) <= 1e-3
    _report(
        4,
        "tightness at d=2 (sic scheme)",
        ok,
        f"effect={eff:.6f}, state={sta:.6f}, target=1/3",
        time.time() - start,
        10.0,
    )


def test_criterion_5_d3_bound():
    start = time.time()
    scheme = build_scheme("mub", d=3)
    cfg = SearchConfig(grid_points=1, restarts=48, refine_iters=150, seed=5, tol=1e-6)
    value = delta_effect_form(scheme, cfg).value
    target = cloning_limit(3)
    ok = abs(value - target) <= 1e-2
    _report(
        5,
        "d=3 bound saturation (mub scheme)",
        ok,
        f"delta={value:.6f}, target=(d-1)/(d+1)={target}",
        time.time() - start,
        120.0,
    )


def test_criterion_6_cloner_identities():
    start = time.time()
    rng = np.random.default_rng(7)
    worst = 0.0
    for name, scheme in qubit_library().items():
        for copies in (1, 2, 3):
            cloner = ClonerSpec(scheme=scheme, copies=copies)
            b = random_complex(rng, 2, 2)
            b = (b + b.conj().T) / 2
            for slot in range(copies):
                worst = max(worst, cloner.marginal_residual(b, slot))
    bound_ok = (
        cloning_bound(2, 2) == pytest.approx(1 / 6, abs=1e-15)
        and cloning_limit(2) == pytest.approx(1 / 3, abs=1e-15)
        and cloning_bound(2, 10**9) == pytest.approx(1 / 3, abs=1e-8)
    )
    ok = worst <= 1e-12 and bound_ok
    _report(
        6,
        "cloner identities",
        ok,
        f"max marginal residual={worst:.2e}, bound(2,2)={cloning_bound(2, 2):.6f}",
        time.time() - start,
        5.0,
    )


def test_criterion_7_dual_form_agreement():
    start = time.time()
    cfg = SearchConfig(grid_points=8000, refine_iters=150, seed=5, tol=1e-6)
    worst = 0.0
    for seed in range(20):
        scheme = build_scheme("random", d=2, n=4, seed=seed)
        eff = delta_effect_form(scheme, cfg).value
        sta = delta_state_form(scheme, cfg).value
        worst = max(worst, abs(eff - sta))
    _report(
        7,
        "dual-form agreement",
        worst <= 2e-3,
        f"max |effect - state| over 20 random schemes = {worst:.2e}",
        time.time() - start,
        120.0,
    )


def test_criterion_8_optimizer_sanity():
    start = time.time()
    cfg = OptimizerConfig(d=2, n=4, restarts=16, seed=0, threads=1)
    result = optimize(cfg)
    lo, hi = 1 / 3 - 5e-3, 0.34
    in_window = lo <= result.delta_hat <= hi
    above_floor = result.delta_hat >= CS_DELTA_BOUND - 1e-3
    history_ok = all(b[1] < a[1] for a, b in zip(result.history, result.history[1:]))
    ok = in_window and above_floor and history_ok
    _report(
        8,
        "optimizer sanity",
        ok,
        f"delta_hat={result.delta_hat:.6f} in [{lo:.6f}, {hi}]",
        time.time() - start,
        600.0,
    )


def test_criterion_9_spectrum_containment():
    start = time.time()
    ok = True
    for seed in range(100):
        scheme = build_scheme("random", d=2, n=3, seed=seed)
        x = random_projection(2, 1, seed=5000 + seed)
        ok = ok and spectrum_containment(scheme, x)
    _report(
        9,
        "spectrum containment",
        ok,
        "100 random (scheme, projection) pairs",
        time.time() - start,
        10.0,
    )

import numpy as np
import pytest

from qdelta.cauchy_schwarz import CS_DELTA_BOUND
from qdelta.cloning import cloning_limit
from qdelta.delta import SearchConfig, delta_effect_form
from qdelta.optimizer import (
    OptimizerConfig,
    optimize,
    scheme_from_params,
    scheme_from_vector_params,
)

QUICK_INNER = SearchConfig(grid_points=700, restarts=8, refine_iters=60, seed=11, tol=1e-5)
QUICK = OptimizerConfig(
    d=2, n=4, restarts=2, outer_iters=100, inner=QUICK_INNER, seed=3, polish_top=1
)


@pytest.fixture(scope="module")
def quick_result():
    return optimize(QUICK)


class TestParametrization:
    def test_full_rank_map_always_valid_or_none(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            s = scheme_from_params(rng.standard_normal(2 * 3 * 9), d=3, n=3)
            if s is not None:
                assert s.d == 3 and s.n == 3

    def test_vector_map_gives_rank_one_components(self):
        rng = np.random.default_rng(1)
        s = scheme_from_vector_params(rng.standard_normal(4 * 4 * 2), d=2, n=4)
        assert s is not None
        for p in s.preparations:
            w = np.linalg.eigvalsh(p)
            assert w[-1] == pytest.approx(1.0, abs=1e-10)  # pure state

    def test_zero_params_degenerate(self):
        assert scheme_from_params(np.zeros(2 * 4 * 4), d=2, n=4) is None
        assert scheme_from_vector_params(np.zeros(4 * 4 * 2), d=2, n=4) is None

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            scheme_from_params(np.zeros(7), d=2, n=4)
        with pytest.raises(ValueError):
            scheme_from_vector_params(np.zeros(7), d=2, n=4)


class TestOptimize:
    def test_single_outcome_forced(self):
        cfg = OptimizerConfig(
            d=2, n=1, restarts=2, outer_iters=100, inner=QUICK_INNER, seed=5, polish_top=1
        )
        res = optimize(cfg)
        # one-outcome POVMs are forced to E = I; the best decoding is I/2
        assert res.delta_hat == pytest.approx(0.5, abs=1e-2)

    def test_result_reproducible_and_certified(self, quick_result):
        re_eval = delta_effect_form(quick_result.best_scheme, QUICK.inner).value
        assert abs(re_eval - quick_result.delta_hat) <= 2 * QUICK.inner.tol

    def test_deterministic_across_runs(self, quick_result):
        again = optimize(QUICK)
        assert again.delta_hat == quick_result.delta_hat
        assert again.history == quick_result.history

    def test_threaded_matches_serial(self, quick_result):
        threaded = optimize(
            OptimizerConfig(
                d=2,
                n=4,
                restarts=2,
                outer_iters=100,
                inner=QUICK_INNER,
                seed=3,
                polish_top=1,
                threads=2,
            )
        )
        assert threaded.delta_hat == quick_result.delta_hat
        assert threaded.history == quick_result.history

    def test_history_monotone(self, quick_result):
        values = [v for _, v in quick_result.history]
        assert all(b < a for a, b in zip(values, values[1:]))
        counts = [i for i, _ in quick_result.history]
        assert all(b > a for a, b in zip(counts, counts[1:]))

    def test_never_below_analytic_floors(self, quick_result):
        assert quick_result.delta_hat >= CS_DELTA_BOUND - 1e-3
        assert quick_result.delta_hat >= cloning_limit(2) - 5e-3

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OptimizerConfig(d=1)
        with pytest.raises(ValueError):
            OptimizerConfig(n=0)
        with pytest.raises(ValueError):
            OptimizerConfig(restarts=0)

    def test_result_serializes(self, quick_result):
        payload = quick_result.to_json_dict()
        assert payload["delta_hat"] == quick_result.delta_hat
        assert payload["config"]["restarts"] == 2
        assert payload["best_scheme"]["version"] == 1

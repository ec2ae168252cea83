import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qdelta.operators import (
    antihermitian_split,
    as_matrix,
    bloch_to_state,
    hermitize,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    random_density,
    random_projection,
    state_to_bloch,
    trace_distance,
    validate_density,
    validate_projection,
)

from conftest import random_complex, random_hermitian, random_unitary


class TestOpNorm:
    def test_identity(self):
        for d in (1, 2, 5):
            assert op_norm(np.eye(d)) == pytest.approx(1.0, abs=1e-12)

    def test_half_commutator_pair_value(self):
        # projections on e0 and on (e0+e1)/sqrt(2): commutator norm is 1/2
        e0 = np.array([1.0, 0.0], complex)
        v = np.array([1.0, 1.0], complex) / np.sqrt(2)
        x = np.outer(e0, e0.conj())
        y = np.outer(v, v.conj())
        assert op_norm(x @ y - y @ x) == pytest.approx(0.5, abs=1e-12)

    def test_matches_dense_eigensolver_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            h = random_hermitian(4, rng)
            oracle = np.abs(np.linalg.eigvalsh(h)).max()
            assert op_norm(h) == pytest.approx(oracle, abs=1e-10)

    def test_matches_svd_oracle_general(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            m = random_complex(rng, 5, 5)
            assert op_norm(m) == pytest.approx(np.linalg.norm(m, 2), abs=1e-10)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            m = random_complex(rng, 4, 4)
            u = random_unitary(4, rng)
            v = random_unitary(4, rng)
            assert op_norm(u @ m @ v) == pytest.approx(op_norm(m), abs=1e-10)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            op_norm(np.ones((2, 3)))


class TestTraceDistance:
    def test_identical_states(self):
        rho = random_density(3, seed=0)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        zero = np.diag([1.0, 0.0]).astype(complex)
        one = np.diag([0.0, 1.0]).astype(complex)
        assert trace_distance(zero, one) == pytest.approx(1.0, abs=1e-12)

    def test_qubit_bloch_formula(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            r1 = rng.standard_normal(3)
            r1 *= rng.uniform(0, 1) / np.linalg.norm(r1)
            r2 = rng.standard_normal(3)
            r2 *= rng.uniform(0, 1) / np.linalg.norm(r2)
            expected = 0.5 * np.linalg.norm(r1 - r2)
            got = trace_distance(bloch_to_state(r1), bloch_to_state(r2))
            assert got == pytest.approx(expected, abs=1e-10)
            # independent check through the nuclear norm
            nuc = 0.5 * np.linalg.norm(bloch_to_state(r1) - bloch_to_state(r2), "nuc")
            assert got == pytest.approx(nuc, abs=1e-10)

    def test_symmetry_and_triangle(self):
        rng = np.random.default_rng(9)
        for trial in range(20):
            a, b, c = (random_density(3, seed=100 * trial + k) for k in range(3))
            assert trace_distance(a, b) == pytest.approx(trace_distance(b, a), abs=1e-10)
            assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            trace_distance(random_density(2, 0), random_density(3, 0))


class TestAntihermitianSplit:
    def test_zero(self):
        plus, minus = antihermitian_split(np.zeros((3, 3)))
        assert np.allclose(plus, 0) and np.allclose(minus, 0)

    def test_half_commutator_parts(self):
        e0 = np.array([1.0, 0.0], complex)
        v = np.array([1.0, 1.0], complex) / np.sqrt(2)
        x = np.outer(e0, e0.conj())
        y = np.outer(v, v.conj())
        comm = x @ y - y @ x
        plus, minus = antihermitian_split(comm)
        # oracle: eigendecomposition of -i [X, Y] has eigenvalues ±1/2
        eigs = np.linalg.eigvalsh(-1j * comm)
        assert np.allclose(sorted(eigs), [-0.5, 0.5], atol=1e-12)
        for part in (plus, minus):
            w = np.linalg.eigvalsh(part)
            assert w[0] >= -1e-12
            assert op_norm(part) == pytest.approx(0.5, abs=1e-12)
            assert int(round(np.trace(part).real * 2)) == 1  # rank 1 at weight 1/2

    @given(
        re=arrays(np.float64, (4, 4), elements=st.floats(-1, 1, allow_nan=False)),
        im=arrays(np.float64, (4, 4), elements=st.floats(-1, 1, allow_nan=False)),
    )
    @settings(max_examples=60, deadline=None)
    def test_reconstruction_property(self, re, im):
        m = re + 1j * im
        a = m - m.conj().T  # antihermitian by construction
        plus, minus = antihermitian_split(a)
        assert np.abs(1j * (plus - minus) - a).max() <= 1e-12
        bound = op_norm(a) + 1e-10
        for part in (plus, minus):
            w = np.linalg.eigvalsh(part)
            assert w[0] >= -1e-10
            assert w[-1] <= bound

    def test_rejects_non_antihermitian(self):
        with pytest.raises(ValueError):
            antihermitian_split(np.eye(2))


class TestBloch:
    def test_center_is_maximally_mixed(self):
        assert np.allclose(bloch_to_state([0, 0, 0]), np.eye(2) / 2)

    def test_north_pole(self):
        assert np.allclose(bloch_to_state([0, 0, 1]), np.diag([1.0, 0.0]))

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            r = rng.standard_normal(3)
            r *= rng.uniform(0, 1) ** (1 / 3) / np.linalg.norm(r)
            assert np.allclose(state_to_bloch(bloch_to_state(r)), r, atol=1e-12)

    def test_surface_states_are_pure(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            r = rng.standard_normal(3)
            r /= np.linalg.norm(r)
            rho = bloch_to_state(r)
            assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-12)

    def test_outside_ball_rejected(self):
        with pytest.raises(ValueError):
            bloch_to_state([1.1, 0, 0])


class TestRandomInputs:
    def test_rank_edges(self):
        assert np.allclose(random_projection(3, 0, seed=1), 0)
        assert np.allclose(random_projection(3, 3, seed=1), np.eye(3))

    def test_determinism(self):
        a = random_projection(4, 2, seed=123)
        b = random_projection(4, 2, seed=123)
        assert np.array_equal(a, b)
        assert np.array_equal(random_density(4, seed=5), random_density(4, seed=5))

    def test_projection_is_valid(self):
        for rank in range(5):
            p = random_projection(4, rank, seed=rank)
            validate_projection(p)
            assert int(round(np.trace(p).real)) == rank

    def test_density_is_valid(self):
        for seed in range(5):
            validate_density(random_density(3, seed=seed))

    def test_rank_out_of_range(self):
        with pytest.raises(ValueError):
            random_projection(3, 4, seed=0)


class TestValidatorsAndJson:
    def test_hermitize_absorbs_roundoff(self):
        rng = np.random.default_rng(2)
        m = random_complex(rng, 3, 3)
        h = hermitize(m)
        assert np.abs(h - h.conj().T).max() <= 1e-12

    def test_density_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            validate_density(np.eye(2))

    def test_density_rejects_negative(self):
        with pytest.raises(ValueError):
            validate_density(np.diag([1.5, -0.5]))

    def test_projection_rejects_non_idempotent(self):
        with pytest.raises(ValueError):
            validate_projection(np.diag([0.5, 0.5]))

    def test_matrix_json_round_trip(self):
        rng = np.random.default_rng(8)
        m = random_complex(rng, 3, 3)
        assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)

    def test_matrix_json_rejects_mismatched_shapes(self):
        with pytest.raises(ValueError):
            matrix_from_json({"re": [[1.0]], "im": [[0.0], [0.0]]})

    def test_as_matrix_rejects_nan(self):
        with pytest.raises(ValueError):
            as_matrix(np.array([[np.nan, 0], [0, 1]]))

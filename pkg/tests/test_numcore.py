import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gramweave.numcore import (
    Adam,
    adam_init,
    adam_step,
    bce,
    cross_entropy,
    ensure_finite,
    finite_diff_grad,
    matmul,
    relu,
    rng,
    round_half_up,
    sigmoid,
    softmax,
    tanh,
)

# Frozen PCG64 vectors: any change to the generator breaks every seeded
# artifact in the project, so pin the stream itself.
PCG64_SEED0_U64 = [5874934615388537135, 2488343231644625808, 377914054924498012]
PCG64_SEED42_U64 = [7138484576005690180, 4047939128787533792, 7919168045412322066]
PCG64_SEED7_NORMALS = [
    0.00012301533574825743,
    0.02987455375084699,
    -0.027413785536221758,
    -0.08905918387572742,
]


class TestRng:
    def test_integer_stream_seed0(self):
        assert [int(x) for x in rng(0).integers(0, 2**63, 3)] == PCG64_SEED0_U64

    def test_integer_stream_seed42(self):
        assert [int(x) for x in rng(42).integers(0, 2**63, 3)] == PCG64_SEED42_U64

    def test_normal_stream_seed7(self):
        np.testing.assert_allclose(rng(7).normal(0.0, 0.1, 4), PCG64_SEED7_NORMALS, rtol=0, atol=0)

    def test_round_half_up(self):
        assert round_half_up(4.8) == 5
        assert round_half_up(5.6) == 6
        assert round_half_up(2.5) == 3
        assert round_half_up(2.0) == 2


class TestMatmul:
    def test_identity(self):
        m = rng(1).normal(0, 1, (3, 3))
        np.testing.assert_array_equal(matmul(np.eye(3), m), m)

    def test_hand_product(self):
        out = matmul(np.array([[1.0, 2.0], [3.0, 4.0]]), np.array([[1.0], [1.0]]))
        assert out.tolist() == [[3.0], [7.0]]

    def test_shape_mismatch_names_both_shapes(self):
        with pytest.raises(ValueError, match=r"\(2, 3\) x \(2, 3\)"):
            matmul(np.zeros((2, 3)), np.zeros((2, 3)))

    @given(st.integers(0, 10_000))
    @settings(max_examples=30)
    def test_associative_within_tolerance(self, seed):
        gen = rng(seed)
        a, b, c = (gen.uniform(-1, 1, (3, 3)).astype(np.float32) for _ in range(3))
        left = matmul(matmul(a, b), c)
        right = matmul(a, matmul(b, c))
        assert np.max(np.abs(left - right)) < 1e-4


class TestActivations:
    def test_sigmoid_and_tanh_at_zero(self):
        assert sigmoid(0.0) == 0.5
        assert tanh(0.0) == 0.0

    def test_relu(self):
        np.testing.assert_array_equal(relu(np.array([-1.0, 0.0, 2.0])), [0.0, 0.0, 2.0])

    def test_softmax_uniform(self):
        np.testing.assert_allclose(softmax(np.zeros(4)), [0.25] * 4)

    def test_softmax_extreme_no_overflow(self):
        out = softmax(np.array([1000.0, 0.0]))
        assert out[0] == pytest.approx(1.0)
        assert out[1] == pytest.approx(0.0, abs=1e-12)

    def test_sigmoid_extreme_no_overflow(self):
        out = sigmoid(np.array([500.0, -500.0], dtype=np.float32))
        assert out[0] == pytest.approx(1.0)
        assert out[1] == pytest.approx(0.0, abs=1e-12)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            sigmoid(np.array([np.nan]))
        with pytest.raises(ValueError, match="non-finite"):
            softmax(np.array([np.inf, 0.0]))

    @given(st.integers(0, 10_000))
    @settings(max_examples=50)
    def test_softmax_is_distribution(self, seed):
        v = rng(seed).normal(0, 5, 8)
        out = softmax(v)
        assert abs(out.sum() - 1.0) < 1e-6
        assert np.all(out > 0) and np.all(out < 1)


class TestLosses:
    def test_uniform_cross_entropy(self):
        assert cross_entropy([0.25, 0.25, 0.25, 0.25], 2) == pytest.approx(math.log(4), rel=1e-9)

    def test_perfect_prediction(self):
        assert cross_entropy([0.0, 1.0, 0.0], 1) == pytest.approx(0.0, abs=1e-6)

    def test_target_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            cross_entropy([0.5, 0.5], 2)

    def test_not_a_distribution(self):
        with pytest.raises(ValueError, match="sum"):
            cross_entropy([0.5, 0.2], 0)

    def test_bce_half(self):
        assert bce(0.5, 1) == pytest.approx(math.log(2), rel=1e-9)

    def test_bce_clamps(self):
        assert math.isfinite(bce(0.0, 1))
        assert math.isfinite(bce(1.0, 0))


class TestFiniteDiff:
    def test_quadratic(self):
        grad = finite_diff_grad(lambda x: float((x**2).sum()), np.array([[3.0]]), 1e-3)
        assert grad[0, 0] == pytest.approx(6.0, abs=1e-5)

    def test_constant_is_zero(self):
        grad = finite_diff_grad(lambda x: 1.25, np.ones((2, 3)), 1e-3)
        np.testing.assert_array_equal(grad, np.zeros((2, 3)))

    def test_h_must_be_positive(self):
        with pytest.raises(ValueError):
            finite_diff_grad(lambda x: 0.0, np.ones((1, 1)), 0.0)


class TestAdam:
    def test_first_step_is_signed_lr(self):
        gen = rng(9)
        param = gen.normal(0, 1, (4, 4)).astype(np.float32)
        grad = gen.normal(0, 1, (4, 4)).astype(np.float32)
        grad[np.abs(grad) < 1e-3] = 1e-3  # keep epsilon negligible
        state = adam_init(param)
        lr = 0.01
        new_param, state = adam_step(param, grad, state, lr)
        delta = new_param - param
        assert np.all(np.sign(delta) == -np.sign(grad))
        assert np.all(np.abs(delta) >= 0.999 * lr)
        assert np.all(np.abs(delta) <= lr * (1 + 1e-5))  # float32 ulp headroom
        assert state.t == 1

    def test_zero_grad_no_move(self):
        param = np.ones((2, 2), dtype=np.float32)
        new_param, _ = adam_step(param, np.zeros((2, 2), dtype=np.float32), adam_init(param), 0.1)
        np.testing.assert_array_equal(new_param, param)

    def test_deterministic(self):
        def run():
            gen = rng(5)
            param = gen.normal(0, 1, (3, 3)).astype(np.float32)
            state = adam_init(param)
            for _ in range(10):
                grad = gen.normal(0, 1, (3, 3)).astype(np.float32)
                param, state = adam_step(param, grad, state, 0.01)
            return param

        np.testing.assert_array_equal(run(), run())

    def test_shape_mismatch(self):
        param = np.zeros((2, 2))
        with pytest.raises(ValueError, match="shape"):
            adam_step(param, np.zeros((3, 2)), adam_init(param), 0.1)

    def test_dict_optimizer_matches_step(self):
        param = rng(2).normal(0, 1, (2, 2)).astype(np.float32)
        grad = rng(3).normal(0, 1, (2, 2)).astype(np.float32)
        opt = Adam({"p": param.copy()}, lr=0.05)
        opt.step({"p": grad})
        expected, _ = adam_step(param, grad, adam_init(param), 0.05)
        np.testing.assert_array_equal(opt.params["p"], expected)


def test_ensure_finite():
    ensure_finite("ok", np.ones(3))
    with pytest.raises(ValueError, match="bad"):
        ensure_finite("bad", np.array([1.0, np.inf]))

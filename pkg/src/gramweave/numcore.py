"""Dense numeric substrate: float32 matrices, activations, losses, a
finite-difference gradient oracle, and the Adam optimizer.

Matrices are plain C-contiguous (row-major) numpy arrays, float32 by
default.  Everything is deterministic: all randomness flows through
:func:`rng`, which wraps numpy's PCG64 generator (a named, portable
algorithm; frozen test vectors live in tests/test_numcore.py).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DTYPE = np.float32


def rng(seed: int) -> np.random.Generator:
    """The project-wide entropy source: PCG64 seeded with `seed`."""
    return np.random.Generator(np.random.PCG64(seed))


def round_half_up(x: float) -> int:
    """Portable round-half-up, used for all train/test split counts."""
    return int(math.floor(x + 0.5))


def ensure_finite(name: str, arr) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")


def matmul(a, b):
    """Matrix product with explicit shape checking.

    Summation per output cell is delegated to numpy's GEMM, which is
    deterministic for fixed inputs on a fixed machine.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError(f"matmul expects 2-d operands, got {a.ndim}-d and {b.ndim}-d")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul shape mismatch: {a.shape} x {b.shape}")
    return a @ b


def _as_float(x):
    arr = np.asarray(x)
    if arr.dtype.kind != "f":
        arr = arr.astype(np.float64)
    return arr


def sigmoid(x):
    """1 / (1 + e^-x), branch-stable so neither branch exponentiates a
    positive number (no overflow for any finite input)."""
    arr = _as_float(x)
    ensure_finite("sigmoid input", arr)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    e = np.exp(arr[~pos])
    out[~pos] = e / (1.0 + e)
    return out[0] if scalar else out


def tanh(x):
    arr = _as_float(x)
    ensure_finite("tanh input", arr)
    return np.tanh(arr)


def relu(x):
    arr = _as_float(x)
    ensure_finite("relu input", arr)
    return np.maximum(arr, 0)


def softmax(v):
    """Max-shifted softmax over the last axis."""
    arr = _as_float(v)
    ensure_finite("softmax input", arr)
    shifted = arr - arr.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


_CLAMP_LO = 1e-7
_CLAMP_HI = 1.0 - 1e-7


def cross_entropy(probs, target_id: int) -> float:
    """-ln probs[target_id] for a probability vector (sums to 1 +- 1e-5)."""
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("cross_entropy expects a 1-d probability vector")
    if abs(float(p.sum()) - 1.0) > 1e-5:
        raise ValueError(f"probabilities sum to {p.sum():.8f}, expected 1")
    if not 0 <= target_id < p.shape[0]:
        raise ValueError(f"target {target_id} out of range for {p.shape[0]} classes")
    return float(-np.log(np.clip(p[target_id], _CLAMP_LO, _CLAMP_HI)))


def bce(prob: float, label: float) -> float:
    """Binary cross-entropy -[y ln p + (1-y) ln(1-p)], p clamped away from {0,1}."""
    p = min(max(float(prob), _CLAMP_LO), _CLAMP_HI)
    y = float(label)
    return float(-(y * math.log(p) + (1.0 - y) * math.log(1.0 - p)))


def finite_diff_grad(f, x, h: float = 1e-5):
    """Central-difference gradient of a scalar function of a matrix.

    This is the oracle the hand-derived backprops are checked against.
    Pass a float64 `x` (and an `f` that keeps that dtype) when tight
    tolerances are needed; the difference itself accumulates in float64.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    x = np.asarray(x)
    grad = np.zeros(x.shape, dtype=np.float64)
    for idx in np.ndindex(*x.shape):
        xp = x.copy()
        xm = x.copy()
        xp[idx] += h
        xm[idx] -= h
        grad[idx] = (float(f(xp)) - float(f(xm))) / (2.0 * h)
    return grad


@dataclass
class AdamState:
    """Per-parameter Adam moment accumulators."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


def adam_init(param, beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8) -> AdamState:
    param = np.asarray(param)
    return AdamState(
        m=np.zeros_like(param),
        v=np.zeros_like(param),
        beta1=beta1,
        beta2=beta2,
        epsilon=epsilon,
    )


def adam_step(param, grad, state: AdamState, lr: float):
    """One bias-corrected Adam update; returns (new_param, state).

    The state is advanced in place (t, m, v); the parameter is returned
    as a fresh array.
    """
    param = np.asarray(param)
    grad = np.asarray(grad)
    if param.shape != grad.shape:
        raise ValueError(f"adam_step shape mismatch: param {param.shape}, grad {grad.shape}")
    if state.m.shape != param.shape:
        raise ValueError(f"adam_step state shape {state.m.shape} does not match param {param.shape}")
    state.t += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * (grad * grad)
    m_hat = state.m / (1.0 - state.beta1 ** state.t)
    v_hat = state.v / (1.0 - state.beta2 ** state.t)
    return param - lr * m_hat / (np.sqrt(v_hat) + state.epsilon), state


class Adam:
    """Adam over a dict of named parameters (one AdamState per name)."""

    def __init__(self, params: dict, lr: float, beta1: float = 0.9,
                 beta2: float = 0.999, epsilon: float = 1e-8):
        self.params = params
        self.lr = lr
        self.states = {
            name: adam_init(p, beta1, beta2, epsilon) for name, p in params.items()
        }

    def step(self, grads: dict) -> None:
        for name, g in grads.items():
            self.params[name], _ = adam_step(self.params[name], g, self.states[name], self.lr)

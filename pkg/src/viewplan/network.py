"""Scalar value network: one sigmoid hidden layer, affine output.

Gradients are written out explicitly (no autodiff) in the same array layout as
the eligibility trace, so trace accumulation and parameter updates are plain
elementwise numpy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit


@dataclass(frozen=True)
class NetworkConfig:
    input_dim: int
    hidden: int = 200
    init_scale: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError(f"input_dim must be >= 1, got {self.input_dim}")
        if self.hidden < 1:
            raise ValueError(f"hidden must be >= 1, got {self.hidden}")
        if self.init_scale < 0.0:
            raise ValueError(f"init_scale must be >= 0, got {self.init_scale}")


class ValueNetwork:
    """Parameters: hidden weights (H, I), hidden biases (H), output weights (H),
    output bias (scalar). Mutated only through apply_update."""

    __slots__ = ("config", "hidden_w", "hidden_b", "out_w", "out_b")

    def __init__(self, config: NetworkConfig, hidden_w, hidden_b, out_w, out_b):
        self.config = config
        self.hidden_w = np.asarray(hidden_w, dtype=np.float64)
        self.hidden_b = np.asarray(hidden_b, dtype=np.float64)
        self.out_w = np.asarray(out_w, dtype=np.float64)
        self.out_b = float(out_b)
        h, i = config.hidden, config.input_dim
        if self.hidden_w.shape != (h, i):
            raise ValueError(f"hidden weights must be ({h}, {i}), got {self.hidden_w.shape}")
        if self.hidden_b.shape != (h,):
            raise ValueError(f"hidden biases must be ({h},), got {self.hidden_b.shape}")
        if self.out_w.shape != (h,):
            raise ValueError(f"output weights must be ({h},), got {self.out_w.shape}")


class TraceVector:
    """Parameter-shaped accumulator; doubles as the gradient container."""

    __slots__ = ("hidden_w", "hidden_b", "out_w", "out_b")

    def __init__(self, hidden_w, hidden_b, out_w, out_b):
        self.hidden_w = hidden_w
        self.hidden_b = hidden_b
        self.out_w = out_w
        self.out_b = out_b

    @classmethod
    def zeros(cls, config: NetworkConfig) -> TraceVector:
        return cls(
            np.zeros((config.hidden, config.input_dim)),
            np.zeros(config.hidden),
            np.zeros(config.hidden),
            0.0,
        )

    def reset(self) -> None:
        self.hidden_w[:] = 0.0
        self.hidden_b[:] = 0.0
        self.out_w[:] = 0.0
        self.out_b = 0.0

    def scale(self, factor: float) -> None:
        self.hidden_w *= factor
        self.hidden_b *= factor
        self.out_w *= factor
        self.out_b *= factor

    def accumulate(self, other: TraceVector) -> None:
        self.hidden_w += other.hidden_w
        self.hidden_b += other.hidden_b
        self.out_w += other.out_w
        self.out_b += other.out_b


def init_network(config: NetworkConfig) -> ValueNetwork:
    """All parameters drawn uniformly from [-init_scale, init_scale], seeded."""
    rng = np.random.default_rng(config.seed)
    s = config.init_scale
    return ValueNetwork(
        config,
        rng.uniform(-s, s, size=(config.hidden, config.input_dim)),
        rng.uniform(-s, s, size=config.hidden),
        rng.uniform(-s, s, size=config.hidden),
        rng.uniform(-s, s),
    )


def _check_input(net: ValueNetwork, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.config.input_dim,):
        raise ValueError(f"input must be ({net.config.input_dim},), got {x.shape}")
    return x


def forward(net: ValueNetwork, x) -> float:
    x = _check_input(net, x)
    sig = expit(net.hidden_w @ x + net.hidden_b)
    return float(net.out_b + net.out_w @ sig)


def gradient(net: ValueNetwork, x) -> TraceVector:
    """Derivative of the output with respect to every parameter, at input x.

    Output bias: 1. Output weights: the hidden activations. Hidden bias i:
    out_w[i] * sig_i * (1 - sig_i). Hidden weight (i, j): the same times x[j].
    """
    x = _check_input(net, x)
    sig = expit(net.hidden_w @ x + net.hidden_b)
    back = net.out_w * sig * (1.0 - sig)
    return TraceVector(np.outer(back, x), back, sig.copy(), 1.0)


def apply_update(net: ValueNetwork, trace: TraceVector, delta: float, alpha: float) -> ValueNetwork:
    """In-place parameter step: p += alpha * delta * trace_p. Returns the net."""
    step = alpha * delta
    net.hidden_w += step * trace.hidden_w
    net.hidden_b += step * trace.hidden_b
    net.out_w += step * trace.out_w
    net.out_b += step * trace.out_b
    if not (
        np.isfinite(net.out_b)
        and np.isfinite(net.hidden_w).all()
        and np.isfinite(net.hidden_b).all()
        and np.isfinite(net.out_w).all()
    ):
        raise FloatingPointError(
            f"parameters became non-finite (delta={delta!r}, alpha={alpha!r})"
        )
    return net


def encode_input(state_vec: np.ndarray, action_idx: int | None, n_actions: int) -> np.ndarray:
    """State bit-vector, then a one-hot action block; no action block when
    action_idx is None (state-value models)."""
    state_vec = np.asarray(state_vec, dtype=np.float64)
    if state_vec.ndim != 1:
        raise ValueError(f"state must be a flat vector, got shape {state_vec.shape}")
    if action_idx is None:
        return state_vec.copy()
    if not (0 <= action_idx < n_actions):
        raise ValueError(f"action index {action_idx} out of range for {n_actions} actions")
    out = np.zeros(len(state_vec) + n_actions)
    out[: len(state_vec)] = state_vec
    out[len(state_vec) + action_idx] = 1.0
    return out

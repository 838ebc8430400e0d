"""Dense feed-forward classifier with explicit forward and backward passes.

Parameters live in a single flat float64 vector ("theta"), ordered layer by
layer: weight matrix (n_in x n_out, row-major) then bias (n_out). All
functions here are pure; dropout randomness comes from an explicit seed so
repeated calls are bit-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

# Flat parameter / gradient vectors are plain float64 ndarrays.
ParamVector = np.ndarray
GradVector = np.ndarray

MODES = ("train", "eval")


@dataclass(frozen=True)
class ModelSpec:
    """Architecture descriptor: layer sizes, activation, dropout rate."""

    layer_sizes: tuple[int, ...]
    activation: str = "relu"
    dropout_rate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(int(n) for n in self.layer_sizes))
        if len(self.layer_sizes) < 2:
            raise InputError("layer_sizes needs at least an input and an output size")
        if any(n < 1 for n in self.layer_sizes):
            raise InputError("every layer size must be >= 1")
        if self.activation != "relu":
            raise InputError(f"unsupported activation {self.activation!r}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise InputError("dropout_rate must lie in [0, 1)")

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def class_count(self) -> int:
        return self.layer_sizes[-1]


@dataclass
class Batch:
    """A mini-batch: inputs (n x d) and integer class labels (n)."""

    inputs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.inputs.ndim != 2:
            raise InputError("batch inputs must be a 2-d matrix")
        if self.labels.ndim != 1 or self.labels.shape[0] != self.inputs.shape[0]:
            raise InputError("batch labels length must equal the number of input rows")
        if not np.all(np.isfinite(self.inputs)):
            raise InputError("batch inputs must be finite")

    def __len__(self) -> int:
        return self.inputs.shape[0]


def param_count(spec: ModelSpec) -> int:
    sizes = spec.layer_sizes
    return sum(n_in * n_out + n_out for n_in, n_out in zip(sizes, sizes[1:]))


def layer_views(spec: ModelSpec, params: ParamVector) -> list[tuple[np.ndarray, np.ndarray]]:
    """Split a flat vector into (W, b) views per layer, without copying."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (param_count(spec),):
        raise InputError(
            f"parameter vector has length {params.size}, spec needs {param_count(spec)}"
        )
    views = []
    offset = 0
    sizes = spec.layer_sizes
    for n_in, n_out in zip(sizes, sizes[1:]):
        w = params[offset : offset + n_in * n_out].reshape(n_in, n_out)
        offset += n_in * n_out
        b = params[offset : offset + n_out]
        offset += n_out
        views.append((w, b))
    return views


def init_params(spec: ModelSpec, seed: int) -> ParamVector:
    """Seeded He-style uniform init: weights in +-sqrt(6/n_in), biases zero."""
    rng = np.random.default_rng(seed)
    values = np.zeros(param_count(spec), dtype=np.float64)
    offset = 0
    sizes = spec.layer_sizes
    for n_in, n_out in zip(sizes, sizes[1:]):
        bound = math.sqrt(6.0 / n_in)
        values[offset : offset + n_in * n_out] = rng.uniform(-bound, bound, n_in * n_out)
        offset += n_in * n_out + n_out  # biases stay zero
    return values


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")


def _forward_cached(spec, params, inputs, mode, dropout_seed):
    """Forward pass keeping pre-activations, activations and dropout masks."""
    if inputs.shape[1] != spec.input_dim:
        raise InputError(
            f"inputs have {inputs.shape[1]} features, spec expects {spec.input_dim}"
        )
    layers = layer_views(spec, params)
    drop = spec.dropout_rate if mode == "train" else 0.0
    rng = np.random.default_rng(dropout_seed) if drop > 0.0 else None
    keep = 1.0 - drop

    activations = [inputs]
    pre_acts = []
    masks = []
    a = inputs
    for i, (w, b) in enumerate(layers):
        z = a @ w + b
        pre_acts.append(z)
        if i == len(layers) - 1:
            return z, pre_acts, activations, masks, keep
        a = np.maximum(z, 0.0)
        if drop > 0.0:
            mask = rng.random(a.shape) < keep
            a = a * mask / keep
        else:
            mask = None
        masks.append(mask)
        activations.append(a)
    raise AssertionError("unreachable")


def forward(
    spec: ModelSpec,
    params: ParamVector,
    batch: Batch,
    mode: str = "eval",
    dropout_seed: int = 0,
) -> np.ndarray:
    """Logits matrix (batch_size x K). Eval mode is deterministic and dropout-free."""
    _check_mode(mode)
    logits, *_ = _forward_cached(spec, params, batch.inputs, mode, dropout_seed)
    return logits


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max-subtraction for stability."""
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def loss_and_grad(
    spec: ModelSpec,
    params: ParamVector,
    batch: Batch,
    mode: str = "train",
    dropout_seed: int = 0,
) -> tuple[float, GradVector]:
    """Mean softmax cross-entropy and its exact gradient w.r.t. the flat params.

    The backward pass reuses the dropout masks drawn in the forward pass, so
    (mode, dropout_seed) fully determine the result.
    """
    _check_mode(mode)
    logits, pre_acts, activations, masks, keep = _forward_cached(
        spec, params, batch.inputs, mode, dropout_seed
    )
    n = len(batch)
    rows = np.arange(n)
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    expsum = exp.sum(axis=1, keepdims=True)
    loss = float(np.mean(np.log(expsum[:, 0]) - shifted[rows, batch.labels]))

    delta = exp / expsum
    delta[rows, batch.labels] -= 1.0
    delta /= n

    layers = layer_views(spec, params)
    grad = np.zeros_like(np.asarray(params, dtype=np.float64))
    grad_views = layer_views(spec, grad)
    for i in range(len(layers) - 1, -1, -1):
        w, _ = layers[i]
        gw, gb = grad_views[i]
        gw[...] = activations[i].T @ delta
        gb[...] = delta.sum(axis=0)
        if i > 0:
            da = delta @ w.T
            if masks[i - 1] is not None:
                da = da * masks[i - 1] / keep
            delta = da * (pre_acts[i - 1] > 0.0)
    return loss, grad


def evaluate_error(spec: ModelSpec, params: ParamVector, dataset) -> float:
    """Fraction of examples whose argmax softmax class differs from the label.

    Ties break toward the lowest class index. `dataset` is anything with
    `inputs` and `labels` attributes (Dataset or Batch).
    """
    inputs = np.asarray(dataset.inputs, dtype=np.float64)
    labels = np.asarray(dataset.labels, dtype=np.int64)
    if inputs.shape[0] == 0:
        raise InputError("evaluate_error needs a nonempty dataset")
    logits, *_ = _forward_cached(spec, params, inputs, "eval", 0)
    predicted = np.argmax(softmax(logits), axis=1)
    return float(np.mean(predicted != labels))

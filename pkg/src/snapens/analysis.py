"""Diversity diagnostics: parameter-space interpolation, softmax correlation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, UndefinedCorrelationError
from .ensemble import PredictionMatrix
from .nn import ModelSpec, ParamVector, evaluate_error

DEFAULT_LAMBDA_POINTS = 51


@dataclass
class InterpolationCurve:
    """Test error along the line lam*theta1 + (1-lam)*theta2.

    lam=1 is entirely theta1, lam=0 entirely theta2.
    """

    lambdas: np.ndarray
    errors: np.ndarray
    endpoints: tuple[str, str]  # (theta1 id, theta2 id)


def default_lambda_grid(points: int = DEFAULT_LAMBDA_POINTS) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


def interpolate(
    spec: ModelSpec,
    theta1: ParamVector,
    theta2: ParamVector,
    dataset,
    lambda_grid: np.ndarray | None = None,
    endpoints: tuple[str, str] = ("theta1", "theta2"),
) -> InterpolationCurve:
    """Evaluate test error at every convex combination on the lambda grid."""
    theta1 = np.asarray(theta1, dtype=np.float64)
    theta2 = np.asarray(theta2, dtype=np.float64)
    if theta1.shape != theta2.shape:
        raise InputError("theta1 and theta2 must have the same length")
    grid = default_lambda_grid() if lambda_grid is None else np.asarray(lambda_grid, np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise InputError("lambda_grid must be a nonempty 1-d sequence")
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise InputError("lambda_grid values must lie in [0, 1]")
    if np.any(np.diff(grid) <= 0.0):
        raise InputError("lambda_grid must be strictly increasing")

    errors = np.empty_like(grid)
    for i, lam in enumerate(grid):
        if lam == 0.0:
            mixed = theta2
        elif lam == 1.0:
            mixed = theta1
        else:
            mixed = lam * theta1 + (1.0 - lam) * theta2
        errors[i] = evaluate_error(spec, mixed, dataset)
    return InterpolationCurve(grid, errors, endpoints)


@dataclass
class CorrelationMatrix:
    """Symmetric Pearson matrix between snapshot prediction vectors."""

    values: np.ndarray  # (M, M), unit diagonal
    sources: tuple[str, ...]


def softmax_correlation(predictions: Sequence[PredictionMatrix]) -> CorrelationMatrix:
    """Pearson correlation between prediction matrices flattened over (example, class)."""
    if len(predictions) < 2:
        raise InputError("softmax_correlation needs at least two prediction matrices")
    shape = predictions[0].probabilities.shape
    if any(p.probabilities.shape != shape for p in predictions):
        raise InputError("prediction matrices must all have the same shape")

    centered = []
    norms = []
    for p in predictions:
        flat = p.probabilities.ravel().astype(np.float64)
        dev = flat - flat.mean()
        ss = float(dev @ dev)
        if ss == 0.0:
            raise UndefinedCorrelationError(
                f"zero-variance softmax outputs for snapshot {p.source!r}"
            )
        centered.append(dev)
        norms.append(math.sqrt(ss))

    count = len(predictions)
    values = np.eye(count)
    for i in range(count):
        for j in range(i + 1, count):
            r = float(centered[i] @ centered[j]) / (norms[i] * norms[j])
            values[i, j] = r
            values[j, i] = r
    return CorrelationMatrix(values, tuple(p.source for p in predictions))


def mean_offdiagonal(matrix: CorrelationMatrix) -> float:
    """Mean of the strictly off-diagonal correlation entries."""
    values = matrix.values
    count = values.shape[0]
    mask = ~np.eye(count, dtype=bool)
    return float(values[mask].mean())

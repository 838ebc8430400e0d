"""Desk-scale dataset supply: synthetic generators, CSV/IDX ingestion, splits.

Generators are pure functions of (parameters, seed). CSV is the interchange
format for all analysis outputs: header row `f0,...,f{d-1},label`, features
written as shortest round-trippable decimals, labels as integers.
"""
from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, InputError

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


@dataclass
class Dataset:
    inputs: np.ndarray
    labels: np.ndarray
    class_count: int

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.inputs.ndim != 2 or self.inputs.shape[0] < 1:
            raise InputError("dataset needs a nonempty 2-d input matrix")
        if self.labels.shape != (self.inputs.shape[0],):
            raise InputError("labels length must match the number of input rows")
        if not np.all(np.isfinite(self.inputs)):
            raise InputError("dataset inputs must be finite")
        if self.class_count < 1:
            raise InputError("class_count must be >= 1")
        if self.labels.min() < 0 or self.labels.max() >= self.class_count:
            raise InputError("labels must lie in [0, class_count)")

    def __len__(self) -> int:
        return self.inputs.shape[0]


def gen_two_moons(n: int, noise_sigma: float, seed: int) -> Dataset:
    """Two interleaved unit semicircles, n/2 points each, plus Gaussian noise.

    Class 0 sits on the upper unit semicircle (cos phi, sin phi); class 1 on
    (1 - cos phi, 0.5 - sin phi), phi uniform in [0, pi].
    """
    if n < 2 or n % 2 != 0:
        raise InputError("two_moons needs an even n >= 2")
    if noise_sigma < 0:
        raise InputError("noise_sigma must be >= 0")
    half = n // 2
    rng = np.random.default_rng(seed)
    phi_upper = rng.uniform(0.0, math.pi, half)
    phi_lower = rng.uniform(0.0, math.pi, half)
    upper = np.column_stack([np.cos(phi_upper), np.sin(phi_upper)])
    lower = np.column_stack([1.0 - np.cos(phi_lower), 0.5 - np.sin(phi_lower)])
    inputs = np.vstack([upper, lower]) + noise_sigma * rng.standard_normal((n, 2))
    labels = np.concatenate([np.zeros(half, np.int64), np.ones(half, np.int64)])
    return Dataset(inputs, labels, 2)


def gen_spirals(n: int, turns: float, noise_sigma: float, seed: int) -> Dataset:
    """Two-arm Archimedean spiral, radius proportional to angle (r = theta/3pi).

    Angles span `turns` revolutions starting at 10% of the sweep, so radii
    stay strictly positive and the noise-free arms never coincide; arm 1 is
    arm 0 reflected through the origin, leaving a radial gap of 1/3 between
    the classes.
    """
    if n < 2 or n % 2 != 0:
        raise InputError("spirals needs an even n >= 2")
    if turns <= 0:
        raise InputError("turns must be > 0")
    if noise_sigma < 0:
        raise InputError("noise_sigma must be >= 0")
    half = n // 2
    rng = np.random.default_rng(seed)
    sweep = 2.0 * math.pi * turns

    def arm(count):
        theta = (0.1 + 0.9 * rng.random(count)) * sweep
        radius = theta / (3.0 * math.pi)
        return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])

    arm0 = arm(half)
    arm1 = -arm(half)
    inputs = np.vstack([arm0, arm1]) + noise_sigma * rng.standard_normal((n, 2))
    labels = np.concatenate([np.zeros(half, np.int64), np.ones(half, np.int64)])
    return Dataset(inputs, labels, 2)


def gen_blobs(n: int, class_count: int, spread: float, seed: int) -> Dataset:
    """K isotropic Gaussian clusters at seeded random centers in [-4, 4]^2."""
    if n < 1:
        raise InputError("blobs needs n >= 1")
    if class_count < 1:
        raise InputError("blobs needs class_count >= 1")
    if spread < 0:
        raise InputError("spread must be >= 0")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-4.0, 4.0, (class_count, 2))
    base, extra = divmod(n, class_count)
    counts = [base + (1 if k < extra else 0) for k in range(class_count)]
    chunks = []
    labels = []
    for k, count in enumerate(counts):
        if count == 0:
            continue
        chunks.append(centers[k] + spread * rng.standard_normal((count, 2)))
        labels.extend([k] * count)
    return Dataset(np.vstack(chunks), np.array(labels, np.int64), class_count)


def save_csv(dataset: Dataset, path) -> None:
    """Write `f0,...,f{d-1},label` rows; floats round-trip exactly via repr."""
    d = dataset.inputs.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j}" for j in range(d)] + ["label"])
        for row, label in zip(dataset.inputs, dataset.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])


def load_csv(path, label_column: str = "label") -> Dataset:
    """Read a numeric CSV with a header; `label_column` holds integer classes."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file, expected a header row") from None
        if label_column not in header:
            raise FormatError(f"{path}: missing column {label_column!r}")
        label_idx = header.index(label_column)
        feature_idx = [j for j in range(len(header)) if j != label_idx]
        inputs = []
        labels = []
        for i, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise FormatError(f"{path}: row {i} has {len(row)} cells, expected {len(header)}")
            try:
                labels.append(int(row[label_idx]))
            except ValueError:
                raise FormatError(
                    f"{path}: row {i}, column {label_column!r}: not an integer label"
                ) from None
            try:
                inputs.append([float(row[j]) for j in feature_idx])
            except ValueError:
                bad = next(j for j in feature_idx if not _is_float(row[j]))
                raise FormatError(
                    f"{path}: row {i}, column {header[bad]!r}: not numeric"
                ) from None
    if not labels:
        raise FormatError(f"{path}: no data rows")
    labels = np.array(labels, np.int64)
    return Dataset(np.array(inputs, np.float64), labels, int(labels.max()) + 1)


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_idx(images_path, labels_path) -> Dataset:
    """Read an IDX image/label pair; pixels scale to [0, 1] as value / 255."""
    with open(images_path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 16:
        raise FormatError(f"{images_path}: truncated IDX image header")
    magic, count, rows, cols = struct.unpack(">IIII", blob[:16])
    if magic != IDX_IMAGES_MAGIC:
        raise FormatError(f"{images_path}: bad images magic 0x{magic:08x}")
    payload = blob[16:]
    if len(payload) != count * rows * cols:
        raise FormatError(f"{images_path}: images payload length mismatch")
    pixels = np.frombuffer(payload, np.uint8).astype(np.float64) / 255.0
    inputs = pixels.reshape(count, rows * cols)

    with open(labels_path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 8:
        raise FormatError(f"{labels_path}: truncated IDX label header")
    magic, label_count = struct.unpack(">II", blob[:8])
    if magic != IDX_LABELS_MAGIC:
        raise FormatError(f"{labels_path}: bad labels magic 0x{magic:08x}")
    if len(blob) - 8 != label_count:
        raise FormatError(f"{labels_path}: labels payload length mismatch")
    if label_count != count:
        raise FormatError("image/label count mismatch")
    labels = np.frombuffer(blob[8:], np.uint8).astype(np.int64)
    return Dataset(inputs, labels, int(labels.max()) + 1)


def split(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded permutation split into (train, test); both sides nonempty."""
    if not 0.0 < train_fraction < 1.0:
        raise InputError("train_fraction must lie strictly between 0 and 1")
    n = len(dataset)
    n_train = math.floor(train_fraction * n)
    if n_train < 1 or n_train >= n:
        raise InputError(f"split of {n} examples at {train_fraction} leaves one side empty")
    order = np.random.default_rng(seed).permutation(n)
    train_idx, test_idx = order[:n_train], order[n_train:]
    k = dataset.class_count
    return (
        Dataset(dataset.inputs[train_idx], dataset.labels[train_idx], k),
        Dataset(dataset.inputs[test_idx], dataset.labels[test_idx], k),
    )


@dataclass
class NormStats:
    mean: np.ndarray
    std: np.ndarray


def normalize(train: Dataset, test: Dataset) -> tuple[Dataset, Dataset, NormStats]:
    """Standardize both sides with per-feature mean/std computed on train only.

    Features with zero std on the training side map to all-zero columns.
    """
    mean = train.inputs.mean(axis=0)
    std = train.inputs.std(axis=0)
    safe = np.where(std == 0.0, 1.0, std)

    def apply(ds: Dataset) -> Dataset:
        scaled = (ds.inputs - mean) / safe
        scaled[:, std == 0.0] = 0.0
        return Dataset(scaled, ds.labels, ds.class_count)

    return apply(train), apply(test), NormStats(mean, std)

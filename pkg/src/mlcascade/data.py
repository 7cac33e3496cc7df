"""Datasets: in-memory representation, CSV I/O, standardization, splits, generators."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class CsvFormatError(ValueError):
    """Malformed CSV input (ragged rows, unparsable cells, empty body)."""


class NonBinaryLabelError(CsvFormatError):
    """A label cell did not parse to 0 or 1."""


@dataclass
class Dataset:
    """Feature matrix X (N x D, real) paired with a binary label matrix Y (N x L)."""

    X: np.ndarray
    Y: np.ndarray
    feature_names: list[str] = field(default_factory=list)
    label_names: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.X = np.asarray(self.X, dtype=float)
        raw_Y = np.asarray(self.Y)
        if raw_Y.size and not np.all((raw_Y == 0) | (raw_Y == 1)):
            raise ValueError("label entries must be 0 or 1")
        self.Y = raw_Y.astype(np.int64)
        if self.X.ndim != 2 or self.Y.ndim != 2:
            raise ValueError("X and Y must be 2-D matrices")
        if self.X.shape[0] != self.Y.shape[0]:
            raise ValueError(
                f"X has {self.X.shape[0]} rows but Y has {self.Y.shape[0]}"
            )
        if self.X.shape[0] < 1:
            raise ValueError("a dataset needs at least one row")
        if self.X.shape[1] < 1:
            raise ValueError("a dataset needs at least one feature column")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("features must be finite")
        if not self.feature_names:
            self.feature_names = [f"x{i + 1}" for i in range(self.X.shape[1])]
        if not self.label_names:
            self.label_names = [f"y{j + 1}" for j in range(self.Y.shape[1])]
        if len(self.feature_names) != self.X.shape[1]:
            raise ValueError("feature_names length does not match X columns")
        if len(self.label_names) != self.Y.shape[1]:
            raise ValueError("label_names length does not match Y columns")

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_labels(self) -> int:
        return self.Y.shape[1]

    def label_cardinality(self) -> float:
        """Average number of relevant labels per row."""
        return float(self.Y.sum(axis=1).mean())

    def take(self, idx: np.ndarray) -> "Dataset":
        return Dataset(self.X[idx], self.Y[idx], list(self.feature_names), list(self.label_names))


@dataclass
class StandardizationParams:
    """Per-feature mean and standard deviation fitted on a training split."""

    mean: np.ndarray
    std: np.ndarray

    STD_FLOOR = 1e-9

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=float)
        self.std = np.maximum(np.asarray(self.std, dtype=float), self.STD_FLOOR)


@dataclass(frozen=True)
class SynthNetSpec:
    """Shape of a randomly generated dataset; hidden_units 0 gives the linear variant."""

    D: int
    L: int
    N: int
    hidden_units: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.D < 1 or self.L < 1 or self.N < 1:
            raise ValueError("D, L and N must all be positive")
        if self.hidden_units < 0:
            raise ValueError("hidden_units must be >= 0")


# Input rows cycle through these in order: (x1, x2) with labels (or, and, xor).
_LOGICAL_COMBOS = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])


def gen_logical(n_rows: int) -> Dataset:
    """Noise-free dataset over two binary inputs with OR, AND and XOR as labels.

    Rows cycle through the four input combinations, so the label cardinality
    is exactly 1.5 whenever n_rows is a multiple of 4.
    """
    if n_rows < 4:
        raise ValueError(f"need at least 4 rows to cover all input combinations, got {n_rows}")
    X = _LOGICAL_COMBOS[np.arange(n_rows) % 4]
    a = X[:, 0].astype(np.int64)
    b = X[:, 1].astype(np.int64)
    Y = np.column_stack([a | b, a & b, a ^ b])
    return Dataset(X, Y, ["x1", "x2"], ["or", "and", "xor"])


def gen_synthetic(spec: SynthNetSpec) -> Dataset:
    """Random dataset whose labels come from threshold units over the features.

    Features are i.i.d. standard normal.  With hidden_units > 0 each label
    thresholds a random linear readout of a random ReLU layer; without it the
    readout acts on the features directly, making each label linearly
    separable by construction.  Thresholds sit at the sample median of each
    readout so label prevalences stay near one half.

    Draw order (fixed contract): features, then the hidden-layer weights if
    any, then the readout weights.
    """
    rng = np.random.default_rng(spec.seed)
    X = rng.standard_normal((spec.N, spec.D))
    if spec.hidden_units > 0:
        V = rng.standard_normal((spec.hidden_units, spec.D))
        hidden = np.maximum(X @ V.T, 0.0)
    else:
        hidden = X
    U = rng.standard_normal((spec.L, hidden.shape[1]))
    scores = hidden @ U.T
    tau = np.median(scores, axis=0)
    Y = (scores > tau).astype(np.int64)
    return Dataset(X, Y)


def save_csv(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset as CSV: header row, features first, labels in the trailing columns."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.feature_names + dataset.label_names)
        for xi, yi in zip(dataset.X, dataset.Y):
            writer.writerow([repr(float(v)) for v in xi] + [str(int(v)) for v in yi])


def load_csv(path: str | Path, label_count: int, labels_last: bool = True) -> Dataset:
    """Read a numeric CSV with a header row into a Dataset.

    The trailing label_count columns are the labels (leading columns when
    labels_last is False) and must parse to exactly 0 or 1.
    """
    if label_count < 0:
        raise ValueError("label_count must be >= 0")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file") from None
        rows = list(reader)
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    width = len(header)
    if label_count > width:
        raise CsvFormatError(f"{path}: label_count {label_count} exceeds {width} columns")
    for i, row in enumerate(rows):
        if len(row) != width:
            raise CsvFormatError(
                f"{path}: row {i + 2} has {len(row)} cells, expected {width}"
            )
    if labels_last:
        feat_idx = range(width - label_count)
        lab_idx = range(width - label_count, width)
    else:
        feat_idx = range(label_count, width)
        lab_idx = range(label_count)
    X = np.empty((len(rows), len(feat_idx)))
    Y = np.empty((len(rows), label_count), dtype=np.int64)
    for i, row in enumerate(rows):
        for out_j, j in enumerate(feat_idx):
            try:
                X[i, out_j] = float(row[j])
            except ValueError:
                raise CsvFormatError(
                    f"{path}: row {i + 2}, column {header[j]!r}: "
                    f"cannot parse {row[j]!r} as a number"
                ) from None
        for out_j, j in enumerate(lab_idx):
            try:
                v = float(row[j])
            except ValueError:
                raise NonBinaryLabelError(
                    f"{path}: row {i + 2}, label {header[j]!r}: "
                    f"cannot parse {row[j]!r}"
                ) from None
            if v not in (0.0, 1.0):
                raise NonBinaryLabelError(
                    f"{path}: row {i + 2}, label {header[j]!r}: value {row[j]!r} is not 0 or 1"
                )
            Y[i, out_j] = int(v)
    return Dataset(
        X,
        Y,
        [header[j] for j in feat_idx],
        [header[j] for j in lab_idx],
    )


def fit_standardizer(train: Dataset) -> StandardizationParams:
    """Per-feature mean and std from a training split; fit on training data only."""
    return StandardizationParams(train.X.mean(axis=0), train.X.std(axis=0))


def apply_standardizer(params: StandardizationParams, dataset: Dataset) -> Dataset:
    X = (dataset.X - params.mean) / params.std
    return Dataset(X, dataset.Y, list(dataset.feature_names), list(dataset.label_names))


def shuffle_split(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Shuffle rows and split; train side gets floor(N * train_fraction) rows."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = dataset.n_rows
    # The epsilon guards floor against float artifacts like 20 * 0.6 -> 11.999....
    n_train = int(n * train_fraction + 1e-9)
    if n_train == 0 or n_train == n:
        raise ValueError(
            f"split of {n} rows at fraction {train_fraction} leaves an empty side"
        )
    perm = np.random.default_rng(seed).permutation(n)
    return dataset.take(perm[:n_train]), dataset.take(perm[n_train:])


def shuffle_labels(dataset: Dataset, seed: int) -> tuple[Dataset, np.ndarray]:
    """Permute label columns; returns the permutation for un-shuffling predictions.

    New column j is old column perm[j], so given predictions P in shuffled
    order, P[:, argsort(perm)] restores the original ordering.
    """
    perm = np.random.default_rng(seed).permutation(dataset.n_labels)
    shuffled = Dataset(
        dataset.X,
        dataset.Y[:, perm],
        list(dataset.feature_names),
        [dataset.label_names[j] for j in perm],
    )
    return shuffled, perm

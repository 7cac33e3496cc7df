"""Problem transformations over the logistic base learner.

Binary relevance trains one independent model per label.  A classifier chain
feeds each label's model the true earlier labels at training time and its own
greedy predictions at test time.  Stacking re-learns every label from the
original features plus a first layer's predictions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, ClassVar

import numpy as np

from .data import Dataset
from .logistic import LinearModel, TrainConfig, train_logistic


def _as_matrix(x: np.ndarray, dim: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != dim:
        raise ValueError(f"expected feature dimension {dim}, got shape {x.shape}")
    return x, single


@dataclass
class BRModel:
    """One independent binary model per label, all over the same feature space."""

    models: list[LinearModel]
    input_dim: int

    kind: ClassVar[str] = "br"

    def __post_init__(self) -> None:
        for m in self.models:
            if m.input_dim != self.input_dim:
                raise ValueError("all per-label models must share input_dim")

    @property
    def n_labels(self) -> int:
        return len(self.models)

    def predict(self, x: np.ndarray) -> np.ndarray:
        X, single = _as_matrix(x, self.input_dim)
        out = np.column_stack([m.predict_bit(X) for m in self.models])
        return out[0] if single else out

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        X, single = _as_matrix(x, self.input_dim)
        out = np.column_stack([m.predict_proba(X) for m in self.models])
        return out[0] if single else out


@dataclass
class CCModel:
    """Greedy classifier chain; model at position j consumes input_dim + j features.

    models are stored in chain order; label_order[j] names the original label
    column that position j predicts, and predictions are returned in original
    label indexing.
    """

    models: list[LinearModel]
    label_order: np.ndarray
    input_dim: int

    kind: ClassVar[str] = "cc"

    def __post_init__(self) -> None:
        self.label_order = np.asarray(self.label_order, dtype=np.int64)
        if sorted(self.label_order.tolist()) != list(range(len(self.models))):
            raise ValueError("label_order must be a permutation of the chain positions")
        for j, m in enumerate(self.models):
            if m.input_dim != self.input_dim + j:
                raise ValueError(
                    f"chain position {j} expects {self.input_dim + j} features, "
                    f"model has {m.input_dim}"
                )

    @property
    def n_labels(self) -> int:
        return len(self.models)

    def predict(self, x: np.ndarray, prefix: np.ndarray | None = None) -> np.ndarray:
        """Greedy chain prediction, vectorized over rows.

        When prefix is given, its columns replace the predictions of the
        first prefix.shape[1] chain positions (they are taken as known bits
        instead of being predicted).
        """
        X, single = _as_matrix(x, self.input_dim)
        n = X.shape[0]
        L = self.n_labels
        chain_bits = np.zeros((n, L))
        n_known = 0
        if prefix is not None:
            prefix = np.asarray(prefix, dtype=float)
            if prefix.ndim == 1:
                prefix = prefix[None, :]
            n_known = prefix.shape[1]
            if n_known > L or prefix.shape[0] != n:
                raise ValueError("prefix shape does not match the chain")
            chain_bits[:, :n_known] = prefix
        for j in range(L):
            if j < n_known:
                continue
            feats = np.hstack([X, chain_bits[:, :j]])
            chain_bits[:, j] = self.models[j].predict_bit(feats)
        out = np.zeros((n, L), dtype=np.int64)
        out[:, self.label_order] = chain_bits.astype(np.int64)
        return out[0] if single else out


@dataclass
class StackedModel:
    """A first layer plus a meta binary-relevance layer over [x, first-layer bits]."""

    first_layer: Any
    meta: BRModel
    input_dim: int = field(default=-1)

    kind: ClassVar[str] = "stack"

    def __post_init__(self) -> None:
        if self.input_dim < 0:
            self.input_dim = self.meta.input_dim - self.first_layer.n_labels

    @property
    def n_labels(self) -> int:
        return self.meta.n_labels

    def predict(self, x: np.ndarray) -> np.ndarray:
        X, single = _as_matrix(x, self.input_dim)
        first = self.first_layer.predict(X)
        out = self.meta.predict(np.hstack([X, first.astype(float)]))
        return out[0] if single else out


def train_br(dataset: Dataset, config: TrainConfig | None = None) -> BRModel:
    """Train one logistic model per label column, each on (X, Y[:, j])."""
    models = [
        train_logistic(dataset.X, dataset.Y[:, j], config)
        for j in range(dataset.n_labels)
    ]
    return BRModel(models=models, input_dim=dataset.n_features)


def predict_br(model: BRModel, x: np.ndarray) -> np.ndarray:
    return model.predict(x)


def train_cc(
    dataset: Dataset,
    label_order: np.ndarray | list[int] | None = None,
    config: TrainConfig | None = None,
) -> CCModel:
    """Train a classifier chain in the given label order (default: column order).

    The model at chain position j is fit on [x, y_order[0..j-1]] using the
    true training labels as chain features; predicted bits are only fed
    forward at prediction time.
    """
    L = dataset.n_labels
    if label_order is None:
        label_order = np.arange(L)
    order = np.asarray(label_order, dtype=np.int64)
    if sorted(order.tolist()) != list(range(L)):
        raise ValueError(f"label_order must be a permutation of 0..{L - 1}")
    X = dataset.X
    models = []
    for j in range(L):
        feats = np.hstack([X, dataset.Y[:, order[:j]].astype(float)])
        models.append(train_logistic(feats, dataset.Y[:, order[j]], config))
    return CCModel(models=models, label_order=order, input_dim=dataset.n_features)


def predict_cc(model: CCModel, x: np.ndarray) -> np.ndarray:
    return model.predict(x)


def train_stack(
    dataset: Dataset,
    first_layer_trainer: Callable[[Dataset], Any],
    config: TrainConfig | None = None,
) -> StackedModel:
    """Train a first layer, then a meta BR on [x, its training-set predictions].

    The skip layer is always included: the meta layer sees the original
    features next to the first layer's bits.  No internal folds are used;
    the meta layer is fit on in-sample first-layer predictions.
    """
    first = first_layer_trainer(dataset)
    first_bits = first.predict(dataset.X)
    meta_data = Dataset(
        np.hstack([dataset.X, first_bits.astype(float)]),
        dataset.Y,
        label_names=list(dataset.label_names),
    )
    meta = train_br(meta_data, config)
    return StackedModel(first_layer=first, meta=meta, input_dim=dataset.n_features)


def predict_stack(model: StackedModel, x: np.ndarray) -> np.ndarray:
    return model.predict(x)

"""Synthetic binary label nodes.

Three generators live here: a cascade of threshold linear units whose unit k
reads the features plus the outputs of units 1..k-1, a flat random projection
where every unit reads only the features, and label-subset indicator nodes
that fire when a chosen group of labels takes one specific bit pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WEIGHT_STD = 0.2          # scale of the random unit weights
KEEP_PROB = 0.9           # each weight survives masking with this probability
THRESHOLD_NOISE = 0.1     # threshold jitter as a fraction of the activation std


@dataclass
class TLUCascade:
    """Random threshold units chained so unit k sees the outputs of units before it.

    weights[k] holds the masked weight row for unit k (length D + k) and
    thresholds[k] its activation cutoff; a unit fires when its activation
    strictly exceeds the threshold.
    """

    D: int
    H: int
    weights: list[np.ndarray]
    thresholds: np.ndarray
    seed: int = 0

    def __post_init__(self) -> None:
        self.weights = [np.asarray(w, dtype=float) for w in self.weights]
        self.thresholds = np.asarray(self.thresholds, dtype=float)
        if len(self.weights) != self.H or self.thresholds.shape != (self.H,):
            raise ValueError("need one weight row and one threshold per unit")
        for k, w in enumerate(self.weights):
            if w.shape != (self.D + k,):
                raise ValueError(f"unit {k} weight row must have length {self.D + k}")
        if not np.all(np.isfinite(self.thresholds)):
            raise ValueError("thresholds must be finite")

    def to_dict(self) -> dict:
        return {
            "D": self.D,
            "H": self.H,
            "seed": self.seed,
            "weights": [w.tolist() for w in self.weights],
            "thresholds": self.thresholds.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TLUCascade":
        return cls(
            D=d["D"],
            H=d["H"],
            weights=[np.asarray(w, dtype=float) for w in d["weights"]],
            thresholds=np.asarray(d["thresholds"], dtype=float),
            seed=d.get("seed", 0),
        )


@dataclass
class RandomProjection:
    """Flat random threshold units; every unit reads only the feature vector."""

    D: int
    H: int
    weights: np.ndarray
    thresholds: np.ndarray
    seed: int = 0

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=float)
        self.thresholds = np.asarray(self.thresholds, dtype=float)
        if self.weights.shape != (self.H, self.D) or self.thresholds.shape != (self.H,):
            raise ValueError("weights must be H x D and thresholds length H")

    def to_dict(self) -> dict:
        return {
            "D": self.D,
            "H": self.H,
            "seed": self.seed,
            "weights": self.weights.tolist(),
            "thresholds": self.thresholds.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RandomProjection":
        return cls(
            D=d["D"],
            H=d["H"],
            weights=np.asarray(d["weights"], dtype=float),
            thresholds=np.asarray(d["thresholds"], dtype=float),
            seed=d.get("seed", 0),
        )


@dataclass
class LabelIndicatorSet:
    """Indicator nodes over the label space: node k fires when the labels at
    positions subset[k] encode exactly code[k]."""

    n_labels: int
    subsets: list[tuple[int, ...]]
    codes: list[int]
    seed: int = 0

    def __post_init__(self) -> None:
        if len(self.subsets) != len(self.codes):
            raise ValueError("need one code per subset")
        self.subsets = [tuple(int(i) for i in s) for s in self.subsets]
        self.codes = [int(c) for c in self.codes]
        for s, c in zip(self.subsets, self.codes):
            if not s:
                raise ValueError("subsets must be nonempty")
            if list(s) != sorted(set(s)):
                raise ValueError("subset indices must be strictly increasing")
            if s[0] < 0 or s[-1] >= self.n_labels:
                raise ValueError(f"subset {s} out of range for {self.n_labels} labels")
            if not 0 <= c < 2 ** len(s):
                raise ValueError(f"code {c} out of range for subset of size {len(s)}")

    @property
    def n_nodes(self) -> int:
        return len(self.subsets)

    def to_dict(self) -> dict:
        return {
            "n_labels": self.n_labels,
            "seed": self.seed,
            "entries": [[list(s), c] for s, c in zip(self.subsets, self.codes)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabelIndicatorSet":
        entries = d["entries"]
        return cls(
            n_labels=d["n_labels"],
            subsets=[tuple(e[0]) for e in entries],
            codes=[e[1] for e in entries],
            seed=d.get("seed", 0),
        )


def _check_rows(x: np.ndarray, dim: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != dim:
        raise ValueError(f"expected feature dimension {dim}, got shape {x.shape}")
    return x, single


def init_cascade(train_X: np.ndarray, H: int, seed: int) -> TLUCascade:
    """Build a cascade of H random threshold units against a training matrix.

    Units are finalized one at a time.  Per unit, the draw order from the
    seeded generator is fixed: the weight row (normal, std 0.2), then the
    keep-mask (uniform per entry, kept below 0.9), then one standard normal
    for threshold jitter.  The threshold is the empirical mean of the unit's
    activations over the training rows plus jitter of 0.1 times their
    standard deviation, where the activations already include the finalized
    outputs of earlier units as inputs.
    """
    train_X = np.asarray(train_X, dtype=float)
    if train_X.ndim != 2 or train_X.shape[0] == 0:
        raise ValueError("train_X must be a nonempty 2-D matrix")
    if H < 0:
        raise ValueError("H must be >= 0")
    D = train_X.shape[1]
    rng = np.random.default_rng(seed)
    inputs = train_X
    weights: list[np.ndarray] = []
    thresholds = np.zeros(H)
    for k in range(H):
        row = rng.normal(0.0, WEIGHT_STD, size=D + k)
        row = row * (rng.random(D + k) < KEEP_PROB)
        a = inputs @ row
        t = float(a.mean()) + THRESHOLD_NOISE * float(a.std()) * float(rng.standard_normal())
        z = (a > t).astype(float)
        weights.append(row)
        thresholds[k] = t
        inputs = np.hstack([inputs, z[:, None]])
    return TLUCascade(D=D, H=H, weights=weights, thresholds=thresholds, seed=seed)


def apply_cascade(cascade: TLUCascade, x: np.ndarray) -> np.ndarray:
    """Evaluate the cascade: unit k reads [x, z_1..z_{k-1}] and fires on a > t."""
    X, single = _check_rows(x, cascade.D)
    n = X.shape[0]
    Z = np.zeros((n, cascade.H), dtype=np.int64)
    inputs = X
    for k in range(cascade.H):
        a = inputs @ cascade.weights[k]
        Z[:, k] = a > cascade.thresholds[k]
        inputs = np.hstack([inputs, Z[:, k : k + 1].astype(float)])
    return Z[0] if single else Z


def init_projection(train_X: np.ndarray, H: int, seed: int) -> RandomProjection:
    """Flat counterpart of init_cascade: same per-unit draws, no chaining."""
    train_X = np.asarray(train_X, dtype=float)
    if train_X.ndim != 2 or train_X.shape[0] == 0:
        raise ValueError("train_X must be a nonempty 2-D matrix")
    if H < 0:
        raise ValueError("H must be >= 0")
    D = train_X.shape[1]
    rng = np.random.default_rng(seed)
    weights = np.zeros((H, D))
    thresholds = np.zeros(H)
    for k in range(H):
        row = rng.normal(0.0, WEIGHT_STD, size=D)
        row = row * (rng.random(D) < KEEP_PROB)
        a = train_X @ row
        weights[k] = row
        thresholds[k] = float(a.mean()) + THRESHOLD_NOISE * float(a.std()) * float(
            rng.standard_normal()
        )
    return RandomProjection(D=D, H=H, weights=weights, thresholds=thresholds, seed=seed)


def apply_projection(proj: RandomProjection, x: np.ndarray) -> np.ndarray:
    X, single = _check_rows(x, proj.D)
    Z = (X @ proj.weights.T > proj.thresholds).astype(np.int64)
    return Z[0] if single else Z


def int_encode(bits) -> int:
    """Integer value of a bit sequence, leftmost bit most significant."""
    bits = list(bits)
    if not bits:
        raise ValueError("cannot encode an empty bit sequence")
    value = 0
    for b in bits:
        b = int(b)
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b}")
        value = (value << 1) | b
    return value


def sample_indicators(
    train_Y: np.ndarray, n_nodes: int, subset_size: int, seed: int
) -> LabelIndicatorSet:
    """Draw n_nodes random label-subset indicators against a training label matrix.

    Each node's subset is drawn uniformly without replacement and stored
    sorted; its code is drawn uniformly from the bit-pattern codes actually
    observed on the training labels restricted to that subset, so every node
    has at least one positive training row.
    """
    train_Y = np.asarray(train_Y, dtype=np.int64)
    if train_Y.ndim != 2 or train_Y.shape[0] == 0:
        raise ValueError("train_Y must be a nonempty 2-D matrix")
    L = train_Y.shape[1]
    if not 1 <= subset_size <= L:
        raise ValueError(f"subset_size must be in 1..{L}, got {subset_size}")
    if n_nodes < 0:
        raise ValueError("n_nodes must be >= 0")
    rng = np.random.default_rng(seed)
    powers = 1 << np.arange(subset_size - 1, -1, -1)
    subsets: list[tuple[int, ...]] = []
    codes: list[int] = []
    for _ in range(n_nodes):
        s = np.sort(rng.choice(L, size=subset_size, replace=False))
        observed = np.unique(train_Y[:, s] @ powers)
        c = int(rng.choice(observed))
        subsets.append(tuple(int(i) for i in s))
        codes.append(c)
    return LabelIndicatorSet(n_labels=L, subsets=subsets, codes=codes, seed=seed)


def apply_indicators(indicators: LabelIndicatorSet, y: np.ndarray) -> np.ndarray:
    """Evaluate every indicator node on a label vector (or a matrix of rows)."""
    y = np.asarray(y, dtype=np.int64)
    single = y.ndim == 1
    if single:
        y = y[None, :]
    if y.ndim != 2 or y.shape[1] != indicators.n_labels:
        raise ValueError(f"expected {indicators.n_labels} labels, got shape {y.shape}")
    out = np.zeros((y.shape[0], indicators.n_nodes), dtype=np.int64)
    for k, (s, c) in enumerate(zip(indicators.subsets, indicators.codes)):
        powers = 1 << np.arange(len(s) - 1, -1, -1)
        out[:, k] = (y[:, list(s)] @ powers) == c
    return out[0] if single else out

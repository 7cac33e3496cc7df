"""Binary logistic regression trained by deterministic full-batch gradient descent.

This is the base learner behind every label (real or synthetic) in the
toolkit.  Training is intentionally plain: zero initialisation, a fixed step
size, and a fixed epoch count, so that two runs on the same inputs produce
bitwise identical models.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Sigmoid arguments are clamped here before exponentiation so probabilities
# stay strictly inside (0, 1) without overflow.
ACTIVATION_CLAMP = 35.0

# Probabilities are clipped to this range inside the loss so it stays finite.
PROB_EPS = 1e-12


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for gradient-descent training of one binary model."""

    learning_rate: float = 0.1
    epochs: int = 1000
    l2_penalty: float = 1e-4
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.l2_penalty < 0:
            raise ValueError(f"l2_penalty must be >= 0, got {self.l2_penalty}")


@dataclass
class LinearModel:
    """A trained binary classifier: weights[0] is the bias, weights[1:] the coefficients."""

    weights: np.ndarray
    input_dim: int = field(default=-1)

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.ndim != 1:
            raise ValueError("weights must be a 1-D vector")
        if self.input_dim < 0:
            self.input_dim = self.weights.shape[0] - 1
        if self.weights.shape[0] != self.input_dim + 1:
            raise ValueError(
                f"weights length {self.weights.shape[0]} != input_dim + 1 "
                f"({self.input_dim + 1})"
            )
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite")

    def activation(self, x: np.ndarray) -> np.ndarray | float:
        """Bias plus dot product; accepts one vector or a matrix of rows."""
        x = _check_features(x, self.input_dim)
        return self.weights[0] + x @ self.weights[1:]

    def predict_proba(self, x: np.ndarray) -> np.ndarray | float:
        return sigmoid(self.activation(x))

    def predict_bit(self, x: np.ndarray) -> np.ndarray | int:
        # Decided on the raw activation so the tie at probability 0.5
        # (activation exactly 0) predicts 1.
        a = self.activation(x)
        if np.ndim(a) == 0:
            return int(a >= 0.0)
        return (a >= 0.0).astype(np.int64)

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "LinearModel":
        return cls(weights=np.asarray(d["weights"], dtype=float))


def sigmoid(a):
    """Logistic function 1 / (1 + exp(-a)), with the argument clamped to +-35."""
    a = np.clip(a, -ACTIVATION_CLAMP, ACTIVATION_CLAMP)
    return 1.0 / (1.0 + np.exp(-a))


def _check_features(x: np.ndarray, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2):
        raise ValueError(f"feature input must be 1-D or 2-D, got ndim={x.ndim}")
    if x.shape[-1] != dim:
        raise ValueError(f"feature dimension {x.shape[-1]} != model input_dim {dim}")
    return x


def _check_xy(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix of feature rows")
    if X.shape[0] == 0:
        raise ValueError("need at least one training example")
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]} targets")
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("targets must be 0 or 1")
    return X, y


def cross_entropy(model: LinearModel, X: np.ndarray, y: np.ndarray) -> float:
    """Summed negative log-likelihood of binary targets under the model.

    Probabilities are clipped to [1e-12, 1 - 1e-12] so the result is finite
    for arbitrarily confident wrong predictions.
    """
    X, y = _check_xy(X, y)
    p = np.clip(sigmoid(model.activation(X)), PROB_EPS, 1.0 - PROB_EPS)
    return float(-np.sum(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def cross_entropy_grad(model: LinearModel, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Analytic gradient of cross_entropy w.r.t. the weight vector (bias first)."""
    X, y = _check_xy(X, y)
    err = sigmoid(model.activation(X)) - y
    return np.concatenate(([err.sum()], X.T @ err))


def train_logistic(X: np.ndarray, y: np.ndarray, config: TrainConfig | None = None) -> LinearModel:
    """Fit a logistic model by full-batch gradient descent from zero weights.

    The per-epoch step uses the mean gradient over the batch (the summed
    gradient scaled by 1/N), so the fixed default step size stays stable
    across dataset sizes; the bias is never regularized.  Deterministic
    given (X, y, config).
    """
    if config is None:
        config = TrainConfig()
    X, y = _check_xy(X, y)
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    lr = config.learning_rate
    l2 = config.l2_penalty
    for _ in range(config.epochs):
        err = sigmoid(b + X @ w) - y
        w -= lr * (X.T @ err / n + l2 * w)
        b -= lr * float(err.mean())
    return LinearModel(weights=np.concatenate(([b], w)), input_dim=d)


def predict_proba(model: LinearModel, x: np.ndarray) -> np.ndarray | float:
    proba = model.predict_proba(x)
    return float(proba) if np.ndim(proba) == 0 else proba


def predict_bit(model: LinearModel, x: np.ndarray) -> np.ndarray | int:
    return model.predict_bit(x)

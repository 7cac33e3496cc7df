"""The six multi-label methods behind one train/predict contract.

br      independent binary relevance
cc      greedy classifier chain over the label columns in order
ccasl   chain trained over [synthetic cascade bits, labels]; the synthetic
        bits are predicted along the chain at test time
ccasl+br  ccasl plus a meta binary-relevance layer over [x, its predictions]
ccasl+aml chain over [cascade bits, label-subset indicator bits] feeding a
        binary-relevance output layer over [x, predicted middle bits]
elm     flat random projection appended to x, then binary relevance
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, ClassVar

import numpy as np

from .data import Dataset
from .logistic import LinearModel, TrainConfig
from .synth import (
    LabelIndicatorSet,
    RandomProjection,
    TLUCascade,
    apply_cascade,
    apply_indicators,
    apply_projection,
    init_cascade,
    init_projection,
    sample_indicators,
)
from .transforms import BRModel, CCModel, StackedModel, train_br, train_cc

METHOD_NAMES = ("br", "cc", "ccasl", "ccasl+br", "ccasl+aml", "elm")


@dataclass(frozen=True)
class MethodConfig:
    """Method-level knobs on top of the base-learner TrainConfig.

    synthetic_count (H) defaults per method when None: the label count for
    the chain methods, twice the label count for elm.  indicator_count (H')
    defaults to twice the label count.  cascade_at_test switches the chain
    methods to computing synthetic bits from the stored cascade at prediction
    time instead of predicting them greedily.
    """

    synthetic_count: int | None = None
    indicator_count: int | None = None
    subset_size: int = 3
    base: TrainConfig = field(default_factory=TrainConfig)
    seed: int = 0
    cascade_at_test: bool = False

    def __post_init__(self) -> None:
        if self.synthetic_count is not None and self.synthetic_count < 0:
            raise ValueError("synthetic_count must be >= 0")
        if self.indicator_count is not None and self.indicator_count < 0:
            raise ValueError("indicator_count must be >= 0")
        if self.subset_size < 1:
            raise ValueError("subset_size must be >= 1")

    def resolve_h(self, n_labels: int, method: str) -> int:
        if self.synthetic_count is not None:
            return self.synthetic_count
        return 2 * n_labels if method == "elm" else n_labels

    def resolve_h_prime(self, n_labels: int) -> int:
        return 2 * n_labels if self.indicator_count is None else self.indicator_count


@dataclass
class CCASLModel:
    """Chain over [synthetic bits, real labels]; prediction slices off the labels.

    The cascade that produced the synthetic training targets is kept so the
    bits can optionally be recomputed exactly at test time; by default they
    are predicted along the chain like any other label.
    """

    cascade: TLUCascade
    chain: CCModel
    n_labels: int
    cascade_at_test: bool = False

    kind: ClassVar[str] = "ccasl"

    @property
    def n_synthetic(self) -> int:
        return self.cascade.H

    @property
    def input_dim(self) -> int:
        return self.chain.input_dim

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        X = x[None, :] if single else x
        prefix = apply_cascade(self.cascade, X) if self.cascade_at_test else None
        full = self.chain.predict(X, prefix=prefix)
        out = full[:, self.n_synthetic :]
        return out[0] if single else out


@dataclass
class CCASLBRModel(StackedModel):
    """ccasl regularized by a meta binary-relevance layer with a skip to x."""

    kind: ClassVar[str] = "ccasl+br"


@dataclass
class CCASLAMLModel:
    """Middle chain over [cascade bits, label-subset indicator bits], then an
    output layer of independent binary models over [x, predicted middle bits]."""

    cascade: TLUCascade
    indicators: LabelIndicatorSet
    middle: CCModel
    output: BRModel
    cascade_at_test: bool = False

    kind: ClassVar[str] = "ccasl+aml"

    @property
    def n_labels(self) -> int:
        return self.output.n_labels

    @property
    def input_dim(self) -> int:
        return self.middle.input_dim

    def middle_bits(self, X: np.ndarray) -> np.ndarray:
        prefix = apply_cascade(self.cascade, X) if self.cascade_at_test else None
        return self.middle.predict(X, prefix=prefix)

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        X = x[None, :] if single else x
        bits = self.middle_bits(X)
        out = self.output.predict(np.hstack([X, bits.astype(float)]))
        return out[0] if single else out


@dataclass
class ELMBRModel:
    """Binary relevance over the features extended with a fixed random projection."""

    projection: RandomProjection
    br: BRModel

    kind: ClassVar[str] = "elm"

    @property
    def n_labels(self) -> int:
        return self.br.n_labels

    @property
    def input_dim(self) -> int:
        return self.projection.D

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        X = x[None, :] if single else x
        Z = apply_projection(self.projection, X)
        out = self.br.predict(np.hstack([X, Z.astype(float)]))
        return out[0] if single else out


def _augmented_chain_dataset(dataset: Dataset, Z: np.ndarray, names: list[str]) -> Dataset:
    return Dataset(
        dataset.X,
        np.hstack([Z, dataset.Y]),
        list(dataset.feature_names),
        names + list(dataset.label_names),
    )


def train_ccasl(dataset: Dataset, cfg: MethodConfig | None = None) -> CCASLModel:
    """Fit the synthetic cascade on the training features, compute its bits for
    every training row, and train a chain over [bits, labels] in column order."""
    cfg = cfg or MethodConfig()
    H = cfg.resolve_h(dataset.n_labels, "ccasl")
    cascade = init_cascade(dataset.X, H, cfg.seed)
    Z = apply_cascade(cascade, dataset.X)
    aug = _augmented_chain_dataset(dataset, Z, [f"z{k + 1}" for k in range(H)])
    chain = train_cc(aug, None, cfg.base)
    return CCASLModel(
        cascade=cascade,
        chain=chain,
        n_labels=dataset.n_labels,
        cascade_at_test=cfg.cascade_at_test,
    )


def predict_ccasl(model: CCASLModel, x: np.ndarray) -> np.ndarray:
    return model.predict(x)


def train_ccasl_br(dataset: Dataset, cfg: MethodConfig | None = None) -> CCASLBRModel:
    """ccasl first, then a meta binary-relevance layer on [x, its training predictions]."""
    cfg = cfg or MethodConfig()
    first = train_ccasl(dataset, cfg)
    first_bits = first.predict(dataset.X)
    meta_data = Dataset(
        np.hstack([dataset.X, first_bits.astype(float)]),
        dataset.Y,
        label_names=list(dataset.label_names),
    )
    meta = train_br(meta_data, cfg.base)
    return CCASLBRModel(first_layer=first, meta=meta, input_dim=dataset.n_features)


def train_ccasl_aml(dataset: Dataset, cfg: MethodConfig | None = None) -> CCASLAMLModel:
    """Chain the cascade bits and label-subset indicator bits as a middle layer,
    then fit an independent output model per label on [x, predicted middle bits].

    Indicator targets come from the true training labels; the output layer is
    fit on the middle chain's own greedy training-set predictions so it sees
    the bits it will receive at test time.
    """
    cfg = cfg or MethodConfig()
    L = dataset.n_labels
    H = cfg.resolve_h(L, "ccasl+aml")
    Hp = cfg.resolve_h_prime(L)
    cascade = init_cascade(dataset.X, H, cfg.seed)
    Z = apply_cascade(cascade, dataset.X)
    subset_size = min(cfg.subset_size, L)
    indicators = sample_indicators(dataset.Y, Hp, subset_size, cfg.seed + 1)
    Phi = apply_indicators(indicators, dataset.Y)
    names = [f"z{k + 1}" for k in range(H)] + [f"phi{k + 1}" for k in range(Hp)]
    middle_targets = np.hstack([Z, Phi])
    middle_data = Dataset(dataset.X, middle_targets, list(dataset.feature_names), names)
    middle = train_cc(middle_data, None, cfg.base)
    prefix = Z if cfg.cascade_at_test else None
    middle_hat = middle.predict(dataset.X, prefix=prefix)
    out_data = Dataset(
        np.hstack([dataset.X, middle_hat.astype(float)]),
        dataset.Y,
        label_names=list(dataset.label_names),
    )
    return CCASLAMLModel(
        cascade=cascade,
        indicators=indicators,
        middle=middle,
        output=train_br(out_data, cfg.base),
        cascade_at_test=cfg.cascade_at_test,
    )


def train_elm_br(dataset: Dataset, cfg: MethodConfig | None = None) -> ELMBRModel:
    """Fixed random projection of the features, then binary relevance on [x, bits]."""
    cfg = cfg or MethodConfig()
    H = cfg.resolve_h(dataset.n_labels, "elm")
    projection = init_projection(dataset.X, H, cfg.seed)
    Z = apply_projection(projection, dataset.X)
    br_data = Dataset(
        np.hstack([dataset.X, Z.astype(float)]),
        dataset.Y,
        label_names=list(dataset.label_names),
    )
    return ELMBRModel(projection=projection, br=train_br(br_data, cfg.base))


def _train_br_method(dataset: Dataset, cfg: MethodConfig) -> BRModel:
    return train_br(dataset, cfg.base)


def _train_cc_method(dataset: Dataset, cfg: MethodConfig) -> CCModel:
    return train_cc(dataset, None, cfg.base)


_TRAINERS = {
    "br": _train_br_method,
    "cc": _train_cc_method,
    "ccasl": train_ccasl,
    "ccasl+br": train_ccasl_br,
    "ccasl+aml": train_ccasl_aml,
    "elm": train_elm_br,
}


def train_method(name: str, dataset: Dataset, cfg: MethodConfig | None = None):
    """Train any method by name; see METHOD_NAMES for the valid names."""
    if name not in _TRAINERS:
        raise ValueError(f"unknown method {name!r}; expected one of {', '.join(METHOD_NAMES)}")
    return _TRAINERS[name](dataset, cfg or MethodConfig())


def predict(model: Any, x: np.ndarray) -> np.ndarray:
    """Uniform prediction entry point: a length-L bit vector per input row."""
    return model.predict(x)


def with_seed(cfg: MethodConfig, seed: int) -> MethodConfig:
    """Copy of cfg with both the method seed and the base-learner seed set."""
    return replace(cfg, seed=seed, base=replace(cfg.base, seed=seed))


# --- JSON serialization -----------------------------------------------------

def _br_to_dict(m: BRModel) -> dict:
    return {
        "models": [lm.to_dict() for lm in m.models],
        "input_dim": m.input_dim,
    }


def _br_from_dict(d: dict) -> BRModel:
    return BRModel(
        models=[LinearModel.from_dict(md) for md in d["models"]],
        input_dim=d["input_dim"],
    )


def _cc_to_dict(m: CCModel) -> dict:
    return {
        "models": [lm.to_dict() for lm in m.models],
        "label_order": m.label_order.tolist(),
        "input_dim": m.input_dim,
    }


def _cc_from_dict(d: dict) -> CCModel:
    return CCModel(
        models=[LinearModel.from_dict(md) for md in d["models"]],
        label_order=np.asarray(d["label_order"], dtype=np.int64),
        input_dim=d["input_dim"],
    )


def model_to_dict(model: Any) -> dict:
    """JSON-ready description of any trained method, tagged with its kind."""
    kind = model.kind
    if kind == "br":
        body = _br_to_dict(model)
    elif kind == "cc":
        body = _cc_to_dict(model)
    elif kind == "ccasl":
        body = {
            "cascade": model.cascade.to_dict(),
            "chain": _cc_to_dict(model.chain),
            "n_labels": model.n_labels,
            "cascade_at_test": model.cascade_at_test,
        }
    elif kind in ("ccasl+br", "stack"):
        body = {
            "first_layer": model_to_dict(model.first_layer),
            "meta": _br_to_dict(model.meta),
            "input_dim": model.input_dim,
        }
    elif kind == "ccasl+aml":
        body = {
            "cascade": model.cascade.to_dict(),
            "indicators": model.indicators.to_dict(),
            "middle": _cc_to_dict(model.middle),
            "output": _br_to_dict(model.output),
            "cascade_at_test": model.cascade_at_test,
        }
    elif kind == "elm":
        body = {
            "projection": model.projection.to_dict(),
            "br": _br_to_dict(model.br),
        }
    else:
        raise ValueError(f"cannot serialize model kind {kind!r}")
    return {"kind": kind, **body}


def model_from_dict(d: dict) -> Any:
    kind = d["kind"]
    if kind == "br":
        return _br_from_dict(d)
    if kind == "cc":
        return _cc_from_dict(d)
    if kind == "ccasl":
        return CCASLModel(
            cascade=TLUCascade.from_dict(d["cascade"]),
            chain=_cc_from_dict(d["chain"]),
            n_labels=d["n_labels"],
            cascade_at_test=d["cascade_at_test"],
        )
    if kind in ("ccasl+br", "stack"):
        cls = CCASLBRModel if kind == "ccasl+br" else StackedModel
        return cls(
            first_layer=model_from_dict(d["first_layer"]),
            meta=_br_from_dict(d["meta"]),
            input_dim=d["input_dim"],
        )
    if kind == "ccasl+aml":
        return CCASLAMLModel(
            cascade=TLUCascade.from_dict(d["cascade"]),
            indicators=LabelIndicatorSet.from_dict(d["indicators"]),
            middle=_cc_from_dict(d["middle"]),
            output=_br_from_dict(d["output"]),
            cascade_at_test=d["cascade_at_test"],
        )
    if kind == "elm":
        return ELMBRModel(
            projection=RandomProjection.from_dict(d["projection"]),
            br=_br_from_dict(d["br"]),
        )
    raise ValueError(f"cannot load model kind {kind!r}")


def save_model(
    model: Any,
    path: str | Path,
    feature_names: list[str] | None = None,
    label_names: list[str] | None = None,
    standardizer: dict | None = None,
) -> None:
    doc = {
        "format": "mlcascade-model",
        "version": 1,
        "feature_names": feature_names,
        "label_names": label_names,
        "standardizer": standardizer,
        "model": model_to_dict(model),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_model(path: str | Path) -> tuple[Any, dict]:
    """Load a saved model; returns (model, metadata) where metadata carries the
    optional feature/label names and feature standardizer stored at save time."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "mlcascade-model":
        raise ValueError(f"{path} is not a saved model file")
    meta = {
        "feature_names": doc.get("feature_names"),
        "label_names": doc.get("label_names"),
        "standardizer": doc.get("standardizer"),
    }
    return model_from_dict(doc["model"]), meta

"""Embedding-distance features and the logistic-regression predictor.

A patch is represented by the concatenated comparison of the patched
program's embedding against the buggy and ground-truth embeddings:
per pair [element-wise subtraction (k) | element-wise multiplication (k) |
euclidean distance (1) | cosine similarity (1)], giving 4k+4 features total.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingVector
from .errors import DimensionMismatch, NonFiniteLoss, SingleClassData, ZeroNormWarning
from .labels import Correctness


@dataclass
class DistanceFeatures:
    pair_pb: np.ndarray
    pair_pg: np.ndarray

    @property
    def combined(self) -> np.ndarray:
        return np.concatenate([self.pair_pb, self.pair_pg])


def distance_pair(e_p: EmbeddingVector, e_other: EmbeddingVector) -> np.ndarray:
    """[e_p - e_other | e_p * e_other | ||e_p - e_other|| | cos(e_p, e_other)]."""
    if e_p.dim != e_other.dim:
        raise DimensionMismatch(f"{e_p.dim} vs {e_other.dim}")
    p = e_p.values
    o = e_other.values
    diff = p - o
    euclidean = float(np.sqrt(np.dot(diff, diff)))
    norm_p = float(np.sqrt(np.dot(p, p)))
    norm_o = float(np.sqrt(np.dot(o, o)))
    if norm_p == 0.0 or norm_o == 0.0:
        warnings.warn(
            f"zero-norm embedding in pair ({e_p.id!r}, {e_other.id!r}); cosine set to 0",
            ZeroNormWarning,
        )
        cosine = 0.0
    else:
        cosine = float(np.dot(p, o)) / (norm_p * norm_o)
    return np.concatenate([diff, p * o, [euclidean, cosine]])


def feature_vector(
    e_b: EmbeddingVector, e_p: EmbeddingVector, e_g: EmbeddingVector
) -> DistanceFeatures:
    if not (e_b.dim == e_p.dim == e_g.dim):
        raise DimensionMismatch(f"{e_b.dim}/{e_p.dim}/{e_g.dim}")
    return DistanceFeatures(distance_pair(e_p, e_b), distance_pair(e_p, e_g))


@dataclass
class TrainingConfig:
    learning_rate: float = 0.1
    epochs: int = 2000
    l2_penalty: float = 1e-4
    seed: int = 42


@dataclass
class PredictorModel:
    """Logistic predictor over standardized distance features.

    `weights` has length 4k+4 where k is the embedding dimension; `mean` and
    `std` are the per-dimension standardization fitted on the training split.
    Immutable after training; safe to share across threads for prediction.
    """

    k: int
    weights: np.ndarray
    bias: float
    mean: np.ndarray
    std: np.ndarray
    threshold: float = 0.975
    config: TrainingConfig = field(default_factory=TrainingConfig)

    @classmethod
    def plain(cls, weights, bias: float, threshold: float = 0.975) -> "PredictorModel":
        """Identity standardization; for hand-set models."""
        w = np.asarray(weights, dtype=np.float64)
        if (w.shape[0] - 4) % 4:
            raise DimensionMismatch("weight length must be 4k+4")
        return cls(
            k=(w.shape[0] - 4) // 4,
            weights=w,
            bias=float(bias),
            mean=np.zeros_like(w),
            std=np.ones_like(w),
            threshold=threshold,
        )


def sigmoid(z):
    out = np.empty_like(z, dtype=np.float64) if isinstance(z, np.ndarray) else None
    if out is None:
        z = np.float64(z)
        return float(np.where(z >= 0, 1.0 / (1.0 + np.exp(-z)), np.exp(z) / (1.0 + np.exp(z))))
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    ez = np.exp(z[~positive])
    out[~positive] = ez / (1.0 + ez)
    return out


def loss_and_gradient(weights, bias, X, y, l2_penalty):
    """L2-regularized mean logistic loss and its analytic gradient.

    The penalty applies to the weights only, never the bias.
    """
    z = X @ weights + bias
    # log(1 + exp(-z*y')) written stably via logaddexp; y in {0,1}
    margins = np.where(y == 1, -z, z)
    loss = float(np.mean(np.logaddexp(0.0, margins))) + 0.5 * l2_penalty * float(
        np.dot(weights, weights)
    )
    residual = sigmoid(z) - y
    grad_w = X.T @ residual / X.shape[0] + l2_penalty * weights
    grad_b = float(np.mean(residual))
    return loss, grad_w, grad_b


def _as_matrix(features) -> np.ndarray:
    rows = [f.combined if isinstance(f, DistanceFeatures) else np.asarray(f, dtype=np.float64) for f in features]
    widths = {r.shape[0] for r in rows}
    if len(widths) != 1:
        raise DimensionMismatch(f"inconsistent feature widths: {sorted(widths)}")
    return np.stack(rows)


def lr_train(features, labels, config: TrainingConfig | None = None) -> PredictorModel:
    """Full-batch gradient descent; deterministic for a fixed seed."""
    config = config or TrainingConfig()
    X = _as_matrix(features)
    y = np.asarray(
        [1.0 if lab == Correctness.OVERFITTING else 0.0 for lab in labels],
        dtype=np.float64,
    )
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatch("features and labels differ in length")
    if len(set(y.tolist())) < 2:
        raise SingleClassData("training needs both classes")

    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    Xs = (X - mean) / std

    rng = np.random.default_rng(config.seed)
    weights = rng.uniform(-0.01, 0.01, size=X.shape[1])
    bias = 0.0
    for _ in range(config.epochs):
        loss, grad_w, grad_b = loss_and_gradient(weights, bias, Xs, y, config.l2_penalty)
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"loss diverged (learning rate {config.learning_rate})")
        weights = weights - config.learning_rate * grad_w
        bias = bias - config.learning_rate * grad_b
    if not (np.all(np.isfinite(weights)) and np.isfinite(bias)):
        raise NonFiniteLoss("non-finite parameters after training")

    dim = X.shape[1]
    if (dim - 4) % 4:
        raise DimensionMismatch("feature width must be 4k+4")
    return PredictorModel(
        k=(dim - 4) // 4,
        weights=weights,
        bias=float(bias),
        mean=mean,
        std=std,
        config=config,
    )


def lr_predict(model: PredictorModel, features) -> float:
    """Probability that the patch is overfitting."""
    x = features.combined if isinstance(features, DistanceFeatures) else np.asarray(features, dtype=np.float64)
    if x.shape[0] != model.weights.shape[0]:
        raise DimensionMismatch(f"{x.shape[0]} features vs {model.weights.shape[0]} weights")
    xs = (x - model.mean) / model.std
    return float(sigmoid(float(np.dot(model.weights, xs)) + model.bias))


def classify_threshold(score: float, threshold: float) -> Correctness:
    """Correct iff score <= threshold (the boundary is inclusive for correct)."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    return Correctness.CORRECT if score <= threshold else Correctness.OVERFITTING


def save_model(model: PredictorModel, path: str | Path) -> None:
    payload = {
        "k": model.k,
        "weights": [float(w) for w in model.weights],
        "bias": model.bias,
        "standardization": {
            "mean": [float(m) for m in model.mean],
            "std": [float(s) for s in model.std],
        },
        "threshold": model.threshold,
        "config": {
            "learning_rate": model.config.learning_rate,
            "epochs": model.config.epochs,
            "l2_penalty": model.config.l2_penalty,
            "seed": model.config.seed,
        },
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> PredictorModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    config = TrainingConfig(**payload["config"])
    return PredictorModel(
        k=int(payload["k"]),
        weights=np.asarray(payload["weights"], dtype=np.float64),
        bias=float(payload["bias"]),
        mean=np.asarray(payload["standardization"]["mean"], dtype=np.float64),
        std=np.asarray(payload["standardization"]["std"], dtype=np.float64),
        threshold=float(payload["threshold"]),
        config=config,
    )

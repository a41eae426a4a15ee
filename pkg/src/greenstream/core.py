"""Domain types shared by every module, the model contract, and the
cold-start prediction policy used by the batch evaluation loop."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .metrics import MetricsBundle


class GreenstreamError(Exception):
    """Base class for harness errors."""


class UnsupportedOperationError(GreenstreamError):
    """A model was asked for an operation its paradigm does not provide."""


class SchemaMismatchError(GreenstreamError):
    """Instance shape or label range does not match the declared schema."""


@dataclass(frozen=True)
class Schema:
    """Dimensions of a classification stream."""

    num_features: int
    num_classes: int
    feature_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.num_features < 1:
            raise ValueError(f"num_features must be >= 1, got {self.num_features}")
        if self.num_classes < 2:
            raise ValueError(f"num_classes must be >= 2, got {self.num_classes}")
        if self.feature_names is not None and len(self.feature_names) != self.num_features:
            raise ValueError(
                f"feature_names has {len(self.feature_names)} entries "
                f"for {self.num_features} features"
            )


@dataclass(eq=False, slots=True)
class Instance:
    """One labeled example: feature vector, class index, stream position."""

    features: np.ndarray
    label: int
    seq: int


@dataclass(eq=False)
class Prediction:
    """A predicted class, optionally with a probability vector over classes.

    When scores are present they must be a probability distribution and
    class_index must be their argmax (ties resolved to the lowest index).
    """

    class_index: int
    scores: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.scores is not None:
            scores = np.asarray(self.scores, dtype=np.float64)
            if np.any(scores < 0.0):
                raise ValueError("prediction scores must be non-negative")
            total = float(scores.sum())
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"prediction scores must sum to 1, got {total!r}")
            if int(np.argmax(scores)) != self.class_index:
                raise ValueError("class_index must be the argmax of scores")
            self.scores = scores


class Model:
    """Behavioral contract every learner implements.

    Operations:
      * ``predict(features)``: inference on one feature vector.
      * ``learn_one(instance)``: incremental update (streaming paradigm).
      * ``fit(instances)``: from-scratch batch training; always discards
        prior learned state, including internal RNG position.
      * ``reset()``: return to the exact post-construction state for the
        stored seed.

    ``paradigm`` is one of "batch", "streaming", "both" and declares which
    of fit / learn_one the model supports.
    """

    model_id: str = "model"
    paradigm: str = "both"

    def predict(self, features: np.ndarray) -> Prediction:
        raise NotImplementedError

    def learn_one(self, instance: Instance) -> None:
        raise UnsupportedOperationError(f"{self.model_id} does not support learn_one")

    def fit(self, instances: Sequence[Instance]) -> None:
        raise UnsupportedOperationError(f"{self.model_id} does not support fit")

    def reset(self) -> None:
        raise NotImplementedError


@dataclass
class Checkpoint:
    """One emitted evaluation point of a run.

    ``instances`` is the geometric schedule value at which the checkpoint
    fired; energy and emissions are cumulative over the whole run so far
    and therefore non-decreasing across checkpoints.
    """

    k: int
    instances: int
    cumulative_joules: float
    gco2e: float
    metrics: MetricsBundle
    train_events: int
    wall_seconds: float
    train_joules: float = 0.0
    predict_joules: float = 0.0


def fallback_predict(label_counts: Sequence[int]) -> Prediction:
    """Majority-so-far cold-start prediction.

    Returns the most frequent class among observed labels, ties broken by
    the lowest class index; class 0 when nothing has been observed yet.
    """
    counts = np.asarray(label_counts)
    if np.any(counts < 0):
        raise ValueError("label counts must be non-negative")
    return Prediction(class_index=int(np.argmax(counts)))


class MajorityBaseline(Model):
    """Predicts the majority class of the labels it has been trained on.

    Supports both paradigms, providing a floor line for any dataset in
    trade-off reports.
    """

    paradigm = "both"

    def __init__(self, schema: Schema, seed: int = 0):
        self.model_id = "majority_baseline"
        self.schema = schema
        self.seed = seed
        self._counts = np.zeros(schema.num_classes, dtype=np.int64)

    def predict(self, features: np.ndarray) -> Prediction:
        return Prediction(class_index=int(np.argmax(self._counts)))

    def learn_one(self, instance: Instance) -> None:
        self._check_label(instance.label)
        self._counts[instance.label] += 1

    def fit(self, instances: Sequence[Instance]) -> None:
        self._counts = np.zeros(self.schema.num_classes, dtype=np.int64)
        for inst in instances:
            self._check_label(inst.label)
            self._counts[inst.label] += 1

    def reset(self) -> None:
        self._counts = np.zeros(self.schema.num_classes, dtype=np.int64)

    def _check_label(self, label: int) -> None:
        if not 0 <= label < self.schema.num_classes:
            raise SchemaMismatchError(
                f"label {label} outside [0, {self.schema.num_classes})"
            )

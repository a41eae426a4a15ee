"""Sliding-window prequential metrics over the last w (true, predicted) pairs.

The window is a ring buffer backed by an incrementally maintained confusion
matrix; snapshots are O(num_classes^2) regardless of window size.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class MetricsBundle:
    """Windowed performance metrics; all None when the window is empty."""

    accuracy: Optional[float]
    kappa: Optional[float]
    macro_f1: Optional[float]
    support: int


class EvalWindow:
    """Ring buffer of the last ``capacity`` (y, yhat) pairs."""

    def __init__(self, capacity: int, num_classes: int):
        if capacity < 1:
            raise ValueError(f"window capacity must be >= 1, got {capacity}")
        if num_classes < 2:
            raise ValueError(f"num_classes must be >= 2, got {num_classes}")
        self.capacity = capacity
        self.num_classes = num_classes
        self._pairs: deque[tuple[int, int]] = deque()
        self._confusion = np.zeros((num_classes, num_classes), dtype=np.int64)

    def __len__(self) -> int:
        return len(self._pairs)

    @property
    def support(self) -> int:
        return len(self._pairs)

    def pairs(self) -> list[tuple[int, int]]:
        """Current window contents, oldest first."""
        return list(self._pairs)

    def confusion(self) -> np.ndarray:
        """Copy of the confusion matrix; rows are true, columns predicted."""
        return self._confusion.copy()

    def push(self, y: int, yhat: int) -> None:
        for value, name in ((y, "y"), (yhat, "yhat")):
            if not 0 <= value < self.num_classes:
                raise ValueError(
                    f"{name}={value} outside class range [0, {self.num_classes})"
                )
        if len(self._pairs) == self.capacity:
            old_y, old_yhat = self._pairs.popleft()
            self._confusion[old_y, old_yhat] -= 1
        self._pairs.append((y, yhat))
        self._confusion[y, yhat] += 1

    def snapshot(self) -> MetricsBundle:
        return snapshot_confusion(self._confusion)


def snapshot_confusion(confusion: np.ndarray) -> MetricsBundle:
    """Metrics bundle from a confusion matrix (rows true, columns predicted).

    Cohen's kappa is (p_o - p_e) / (1 - p_e) with p_e from the row/column
    marginals, defined as 0 when p_e = 1.  Macro-F1 averages per-class F1
    over all schema classes; a class with a zero denominator in precision
    or recall contributes 0 for that component.
    """
    confusion = np.asarray(confusion, dtype=np.float64)
    support = int(confusion.sum())
    if support == 0:
        return MetricsBundle(accuracy=None, kappa=None, macro_f1=None, support=0)

    trace = float(np.trace(confusion))
    accuracy = trace / support

    row = confusion.sum(axis=1)
    col = confusion.sum(axis=0)
    p_o = accuracy
    p_e = float(np.dot(row, col)) / (support * support)
    if p_e >= 1.0:
        kappa = 0.0
    else:
        kappa = (p_o - p_e) / (1.0 - p_e)

    f1_per_class = []
    for c in range(confusion.shape[0]):
        tp = confusion[c, c]
        precision = tp / col[c] if col[c] > 0 else 0.0
        recall = tp / row[c] if row[c] > 0 else 0.0
        if precision + recall > 0:
            f1_per_class.append(2.0 * precision * recall / (precision + recall))
        else:
            f1_per_class.append(0.0)
    macro_f1 = float(np.mean(f1_per_class))

    return MetricsBundle(accuracy=accuracy, kappa=kappa, macro_f1=macro_f1, support=support)

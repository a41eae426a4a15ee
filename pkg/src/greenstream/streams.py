"""Deterministic, seedable instance sources.

Two sources ship: a synthetic 40-feature waveform stream (three classes,
each a noisy convex combination of two triangular base waves) and CSV
ingestion for real datasets.  Given the same seed and configuration a
source always emits an identical sequence, and iterating a source twice
replays it from the start.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .core import GreenstreamError, Instance, Schema
from .rng import Rng


class StreamError(GreenstreamError):
    """Dataset file missing or malformed."""


class StreamSource:
    """Iterable of Instance with a declared schema.

    seq values are consecutive from 0.  A source is single-consumer per
    iteration; distinct iterations replay the identical sequence.
    """

    schema: Schema
    stream_id: str = "stream"
    total_hint: Optional[int] = None

    def __iter__(self) -> Iterator[Instance]:
        raise NotImplementedError


# -- synthetic waveform stream ----------------------------------------------

# Three triangular base waves over 21 positions: height-6 peaks at 1-based
# positions 7, 15 and 11, ramping linearly to 0 over +-6 positions.
BASE_WAVES = np.array(
    [[max(6 - abs(i - peak), 0) for i in range(1, 22)] for peak in (7, 15, 11)],
    dtype=np.float64,
)
# Class c blends the wave pair CLASS_WAVE_PAIRS[c].
CLASS_WAVE_PAIRS = np.array([[0, 1], [0, 2], [1, 2]], dtype=np.int64)

_SHAPE_FEATURES = 21
_NUM_CLASSES = 3
_GEN_BATCH = 512  # instances generated per block; part of the pinned draw layout


@dataclass(frozen=True)
class WaveformConfig:
    seed: int
    noise_features: int = 19
    limit: Optional[int] = None

    def __post_init__(self):
        if self.noise_features < 0:
            raise ValueError(f"noise_features must be >= 0, got {self.noise_features}")
        if self.limit is not None and self.limit < 0:
            raise ValueError(f"limit must be >= 0, got {self.limit}")


class WaveformSource(StreamSource):
    """Endless (or capped) waveform stream.

    Per generated block the draw order is: one class draw per instance,
    one blend coefficient u ~ Uniform(0,1) per instance, then the unit
    gaussians for the 21 shape features and finally for the noise tail.
    Feature i < 21 is u*wave_a[i] + (1-u)*wave_b[i] + N(0,1); the
    remaining features are pure N(0,1).
    """

    def __init__(self, config: WaveformConfig):
        self.config = config
        self.schema = Schema(
            num_features=_SHAPE_FEATURES + config.noise_features,
            num_classes=_NUM_CLASSES,
        )
        self.total_hint = config.limit
        self.stream_id = f"waveform40(seed={config.seed})"
        if config.noise_features != 19:
            self.stream_id = (
                f"waveform(seed={config.seed},noise={config.noise_features})"
            )

    def __iter__(self) -> Iterator[Instance]:
        rng = Rng(self.config.seed)
        noise = self.config.noise_features
        limit = self.config.limit
        seq = 0
        while limit is None or seq < limit:
            count = _GEN_BATCH if limit is None else min(_GEN_BATCH, limit - seq)
            classes = rng.randint_block(count, _NUM_CLASSES)
            blend = rng.uniform_block(count)
            shape_noise = rng.gauss_block(count * _SHAPE_FEATURES)
            shape_noise = shape_noise.reshape(count, _SHAPE_FEATURES)
            tail = rng.gauss_block(count * noise).reshape(count, noise)

            pair = CLASS_WAVE_PAIRS[classes]
            wave_a = BASE_WAVES[pair[:, 0]]
            wave_b = BASE_WAVES[pair[:, 1]]
            features = np.empty((count, self.schema.num_features), dtype=np.float64)
            features[:, :_SHAPE_FEATURES] = (
                blend[:, None] * wave_a + (1.0 - blend[:, None]) * wave_b + shape_noise
            )
            features[:, _SHAPE_FEATURES:] = tail

            for i in range(count):
                yield Instance(features=features[i], label=int(classes[i]), seq=seq)
                seq += 1


def waveform40(config: WaveformConfig) -> WaveformSource:
    return WaveformSource(config)


# -- truncation ---------------------------------------------------------------

class TakeSource(StreamSource):
    def __init__(self, source: StreamSource, count: int):
        self.source = source
        self.count = count
        self.schema = source.schema
        self.stream_id = source.stream_id
        inner = source.total_hint
        self.total_hint = count if inner is None else min(count, inner)

    def __iter__(self) -> Iterator[Instance]:
        emitted = 0
        for instance in self.source:
            if emitted >= self.count:
                return
            yield instance
            emitted += 1


def take(source: StreamSource, count: int) -> TakeSource:
    """At most the first ``count`` instances of ``source``."""
    if count < 1:
        raise ValueError(f"take count must be >= 1, got {count}")
    return TakeSource(source, count)


# -- CSV ingestion -------------------------------------------------------------

class CsvSource(StreamSource):
    """In-memory stream loaded from a CSV file.

    File order is stream order unless pre_shuffle is set, in which case a
    seeded permutation is applied once at load time.  Raw label values map
    to dense 0-based indices in first-seen (file) order; the mapping is
    exposed for run manifests.
    """

    def __init__(self, features: np.ndarray, labels: np.ndarray, schema: Schema,
                 label_mapping: dict[str, int], stream_id: str):
        self.features = features
        self.labels = labels
        self.schema = schema
        self.label_mapping = label_mapping
        self.stream_id = stream_id
        self.total_hint = len(labels)

    def __iter__(self) -> Iterator[Instance]:
        for i in range(len(self.labels)):
            yield Instance(features=self.features[i], label=int(self.labels[i]), seq=i)


def load_csv(path: str, label_column, limit: Optional[int] = None,
             pre_shuffle: bool = False, shuffle_seed: int = 0) -> CsvSource:
    """Load a UTF-8, comma-separated file with one header row.

    ``label_column`` selects the class column by header name (str) or
    0-based position (int); every other cell must parse as a real number.
    Errors name the offending file line and column.
    """
    if not os.path.isfile(path):
        raise StreamError(f"dataset file not found: {path}")
    if limit is not None and limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")

    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise StreamError(f"{path}: file is empty, expected a header row")

        if isinstance(label_column, bool) or not isinstance(label_column, (int, str)):
            raise StreamError(f"label_column must be a column name or 0-based index, "
                              f"got {label_column!r}")
        if isinstance(label_column, int):
            if not 0 <= label_column < len(header):
                raise StreamError(
                    f"{path}: label column index {label_column} outside header "
                    f"of {len(header)} columns"
                )
            label_idx = label_column
        else:
            if label_column not in header:
                raise StreamError(f"{path}: label column {label_column!r} not in header")
            label_idx = header.index(label_column)

        feature_names = tuple(name for i, name in enumerate(header) if i != label_idx)
        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for line_no, row in enumerate(reader, start=2):
            if limit is not None and len(rows) >= limit:
                break
            if len(row) != len(header):
                raise StreamError(
                    f"{path}: line {line_no} has {len(row)} cells, header has {len(header)}"
                )
            values = []
            for col_idx, cell in enumerate(row):
                if col_idx == label_idx:
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    raise StreamError(
                        f"{path}: line {line_no}, column {header[col_idx]!r}: "
                        f"cannot parse {cell!r} as a real number"
                    ) from None
            rows.append(values)
            raw_labels.append(row[label_idx])

    if not rows:
        raise StreamError(f"{path}: no data rows")

    label_mapping: dict[str, int] = {}
    labels = np.empty(len(raw_labels), dtype=np.int64)
    for i, raw in enumerate(raw_labels):
        if raw not in label_mapping:
            label_mapping[raw] = len(label_mapping)
        labels[i] = label_mapping[raw]

    if len(label_mapping) < 2:
        raise StreamError(
            f"{path}: found {len(label_mapping)} distinct label value(s), need at least 2"
        )

    features = np.asarray(rows, dtype=np.float64)
    schema = Schema(
        num_features=features.shape[1],
        num_classes=len(label_mapping),
        feature_names=feature_names,
    )

    if pre_shuffle:
        order = Rng(shuffle_seed).permutation(len(labels))
        features = features[order]
        labels = labels[order]

    stream_id = f"csv:{os.path.basename(path)}"
    return CsvSource(features, labels, schema, label_mapping, stream_id)

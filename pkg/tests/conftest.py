import numpy as np
import pytest

from greenstream.core import Instance, Schema
from greenstream.streams import StreamSource


class ListSource(StreamSource):
    """Deterministic in-memory stream for protocol tests."""

    def __init__(self, features: np.ndarray, labels, num_classes: int, stream_id="list"):
        features = np.asarray(features, dtype=np.float64)
        self.features = features
        self.labels = [int(v) for v in labels]
        self.schema = Schema(num_features=features.shape[1], num_classes=num_classes)
        self.stream_id = stream_id
        self.total_hint = len(self.labels)

    def __iter__(self):
        for i, label in enumerate(self.labels):
            yield Instance(features=self.features[i], label=label, seq=i)


def make_list_source(labels, num_classes=2, num_features=2):
    labels = list(labels)
    features = np.arange(len(labels) * num_features, dtype=np.float64)
    features = features.reshape(len(labels), num_features)
    return ListSource(features, labels, num_classes)


@pytest.fixture
def list_source_factory():
    return make_list_source

"""greenstream: long-term sustainability vs. performance evaluation of
batch and streaming learners over data streams.

The package pairs geometric-checkpoint evaluation loops (batch refits on
an ever-growing store; prequential test-then-train for streaming models)
with pluggable energy metering and carbon conversion, native reference
learners, and reproducible trade-off reports.
"""

__version__ = "0.1.0"

from .core import (
    Checkpoint,
    GreenstreamError,
    Instance,
    MajorityBaseline,
    Model,
    Prediction,
    Schema,
    SchemaMismatchError,
    UnsupportedOperationError,
    fallback_predict,
)
from .energy import (
    CarbonConfig,
    CostTable,
    CpuTimeMeter,
    DeterministicMeter,
    EnergyMeter,
    MeterError,
    cpu_time_meter,
    deterministic_meter,
    to_gco2e,
)
from .metrics import EvalWindow, MetricsBundle, snapshot_confusion
from .protocol import ProtocolConfig, RunAborted, RunResult, run_batch, run_streaming, sweep
from .rng import Rng
from .streams import (
    CsvSource,
    StreamError,
    StreamSource,
    TakeSource,
    WaveformConfig,
    WaveformSource,
    load_csv,
    take,
    waveform40,
)

__all__ = [
    "Checkpoint",
    "GreenstreamError",
    "Instance",
    "MajorityBaseline",
    "Model",
    "Prediction",
    "Schema",
    "SchemaMismatchError",
    "UnsupportedOperationError",
    "fallback_predict",
    "CarbonConfig",
    "CostTable",
    "CpuTimeMeter",
    "DeterministicMeter",
    "EnergyMeter",
    "MeterError",
    "cpu_time_meter",
    "deterministic_meter",
    "to_gco2e",
    "EvalWindow",
    "MetricsBundle",
    "snapshot_confusion",
    "ProtocolConfig",
    "RunAborted",
    "RunResult",
    "run_batch",
    "run_streaming",
    "sweep",
    "Rng",
    "CsvSource",
    "StreamError",
    "StreamSource",
    "TakeSource",
    "WaveformConfig",
    "WaveformSource",
    "load_csv",
    "take",
    "waveform40",
    "__version__",
]

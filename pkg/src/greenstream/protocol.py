"""Long-term evaluation loops with geometric checkpoint schedules.

Both runners consume a stream instance by instance, maintain a sliding
evaluation window, and emit a checkpoint whenever the processed-instance
count reaches the current threshold; thresholds grow geometrically
(next = round-half-up(growth * current), forced to advance by at least 1
so growth factors close to 1 cannot stall).

Batch runner: every instance is predicted (model if fitted, else the
majority-so-far cold-start policy), appended to an ever-growing training
store, and at each threshold the model is refit from scratch on the whole
store.  Streaming runner: prequential test-then-train, the model predicts
each instance strictly before learning from it.

A run is strictly single-threaded for measurement fidelity; sweep executes
its cells sequentially, which satisfies the metering contract for both
meter kinds.
"""

from __future__ import annotations

import math
import time
import traceback
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .core import Checkpoint, GreenstreamError, Instance, Model, fallback_predict
from .energy import CarbonConfig, EnergyMeter, to_gco2e
from .metrics import EvalWindow
from .streams import StreamSource


@dataclass(frozen=True)
class ProtocolConfig:
    """Evaluation loop parameters.

    ``n0`` is the first checkpoint threshold, ``growth`` the geometric
    factor applied after each checkpoint (the config-file key for it is
    ``lambda``), ``window_w`` the evaluation window size.
    """

    n0: int
    growth: float
    window_w: int
    max_instances: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.n0 < 1:
            raise ValueError(f"n0 must be >= 1, got {self.n0}")
        if not self.growth > 1.0:
            raise ValueError(
                f"growth factor must be > 1 for the schedule to grow, got {self.growth}"
            )
        if self.window_w < 1:
            raise ValueError(f"window_w must be >= 1, got {self.window_w}")
        if self.max_instances is not None and self.max_instances < 1:
            raise ValueError(f"max_instances must be >= 1, got {self.max_instances}")


@dataclass
class RunResult:
    """Checkpoint history plus run totals."""

    checkpoints: list[Checkpoint]
    config: ProtocolConfig
    carbon: CarbonConfig
    model_id: str
    stream_id: str
    mode: str
    instances: int = 0
    train_events: int = 0
    total_joules: float = 0.0
    train_joules: float = 0.0
    predict_joules: float = 0.0
    gco2e: float = 0.0
    wall_seconds: float = 0.0


class RunAborted(GreenstreamError):
    """A model operation failed mid-run; checkpoint history is preserved."""

    def __init__(self, message: str, partial: RunResult):
        super().__init__(message)
        self.partial = partial


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def next_threshold(current: int, growth: float) -> int:
    """Next checkpoint threshold: round-half-up with forced strict growth."""
    return max(round_half_up(growth * current), current + 1)


def checkpoint_schedule(n0: int, growth: float, total: int) -> list[int]:
    """All thresholds <= total, starting at n0."""
    out = []
    threshold = n0
    while threshold <= total:
        out.append(threshold)
        threshold = next_threshold(threshold, growth)
    return out


def _capped(stream: StreamSource, cap: Optional[int]) -> Iterator[Instance]:
    if cap is None:
        yield from stream
        return
    emitted = 0
    for instance in stream:
        if emitted >= cap:
            return
        yield instance
        emitted += 1


def _emit(result: RunResult, meter: EnergyMeter, carbon: CarbonConfig,
          window: EvalWindow, k: int, instances: int, started: float) -> Checkpoint:
    joules = meter.read()
    checkpoint = Checkpoint(
        k=k,
        instances=instances,
        cumulative_joules=joules,
        gco2e=to_gco2e(joules, carbon),
        metrics=window.snapshot(),
        train_events=result.train_events,
        wall_seconds=time.perf_counter() - started,
        train_joules=meter.read_kind("train"),
        predict_joules=meter.read_kind("predict"),
    )
    result.checkpoints.append(checkpoint)
    return checkpoint


def _finalize(result: RunResult, meter: EnergyMeter, carbon: CarbonConfig,
              started: float) -> RunResult:
    meter.assert_balanced()
    result.total_joules = meter.read()
    result.train_joules = meter.read_kind("train")
    result.predict_joules = meter.read_kind("predict")
    result.gco2e = to_gco2e(result.total_joules, carbon)
    result.wall_seconds = time.perf_counter() - started
    return result


def _abort(result: RunResult, meter: EnergyMeter, carbon: CarbonConfig,
           started: float, stage: str, err: Exception) -> RunAborted:
    # Discard a span left open by the failing operation so totals stay readable.
    meter.abandon_open_span()
    _finalize(result, meter, carbon, started)
    detail = "".join(traceback.format_exception_only(type(err), err)).strip()
    aborted = RunAborted(f"{stage} failed after {result.instances} instances: {detail}",
                         partial=result)
    aborted.__cause__ = err
    return aborted


def run_batch(stream: StreamSource, model: Model, config: ProtocolConfig,
              meter: EnergyMeter, carbon: CarbonConfig) -> RunResult:
    """Evaluate a batch model: grow the training store, refit at thresholds.

    Until the first fit, predictions come from the majority-so-far policy,
    so cold-start mistakes count against the model.  Refits always see the
    entire store (it is never cleared) and happen inside train spans; model
    predictions happen inside predict spans.  No partial checkpoint is
    emitted at stream end.
    """
    if model.paradigm not in ("batch", "both"):
        raise ValueError(f"model {model.model_id!r} does not support batch fitting")

    num_classes = stream.schema.num_classes
    window = EvalWindow(config.window_w, num_classes)
    result = RunResult(checkpoints=[], config=config, carbon=carbon,
                       model_id=model.model_id, stream_id=stream.stream_id,
                       mode="batch")
    store: list[Instance] = []
    label_counts = [0] * num_classes
    threshold = config.n0
    fitted = False
    k = 0
    started = time.perf_counter()

    for instance in _capped(stream, config.max_instances):
        if fitted:
            meter.begin_span("predict")
            try:
                yhat = model.predict(instance.features).class_index
            except Exception as err:
                raise _abort(result, meter, carbon, started, "predict", err) from err
            meter.end_span("predict")
        else:
            yhat = fallback_predict(label_counts).class_index
        window.push(instance.label, yhat)
        label_counts[instance.label] += 1
        store.append(instance)
        result.instances += 1

        if len(store) == threshold:
            meter.begin_span("train", instances=len(store))
            try:
                model.fit(store)
            except Exception as err:
                raise _abort(result, meter, carbon, started, "fit", err) from err
            meter.end_span("train")
            fitted = True
            result.train_events += 1
            _emit(result, meter, carbon, window, k, len(store), started)
            threshold = next_threshold(threshold, config.growth)
            k += 1

    return _finalize(result, meter, carbon, started)


def run_streaming(stream: StreamSource, model: Model, config: ProtocolConfig,
                  meter: EnergyMeter, carbon: CarbonConfig) -> RunResult:
    """Evaluate a streaming model prequentially: test, then train, per instance.

    Every instance is predicted strictly before the model learns from it;
    checkpoints fire when the processed-instance count reaches the current
    threshold.
    """
    if model.paradigm not in ("streaming", "both"):
        raise ValueError(f"model {model.model_id!r} does not support incremental learning")

    window = EvalWindow(config.window_w, stream.schema.num_classes)
    result = RunResult(checkpoints=[], config=config, carbon=carbon,
                       model_id=model.model_id, stream_id=stream.stream_id,
                       mode="streaming")
    threshold = config.n0
    k = 0
    started = time.perf_counter()

    for instance in _capped(stream, config.max_instances):
        meter.begin_span("predict")
        try:
            yhat = model.predict(instance.features).class_index
        except Exception as err:
            raise _abort(result, meter, carbon, started, "predict", err) from err
        meter.end_span("predict")
        window.push(instance.label, yhat)

        meter.begin_span("train", instances=1)
        try:
            model.learn_one(instance)
        except Exception as err:
            raise _abort(result, meter, carbon, started, "learn_one", err) from err
        meter.end_span("train")
        result.instances += 1
        result.train_events += 1

        if result.instances == threshold:
            _emit(result, meter, carbon, window, k, result.instances, started)
            threshold = next_threshold(threshold, config.growth)
            k += 1

    return _finalize(result, meter, carbon, started)


# -- sweeps --------------------------------------------------------------------

@dataclass
class SweepCell:
    """One independent run: factories guarantee fresh meters per cell and
    models are reset before running."""

    mode: str  # "batch" | "streaming"
    stream: StreamSource
    model: Model
    config: ProtocolConfig
    meter_factory: Callable[[], EnergyMeter]
    carbon: CarbonConfig = field(default_factory=CarbonConfig)
    label: str = ""


@dataclass
class SweepOutcome:
    cell: SweepCell
    result: Optional[RunResult] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def sweep(cells: list[SweepCell]) -> list[SweepOutcome]:
    """Run every cell independently, collecting per-run failures.

    Results come back in input order; one failing cell does not abort the
    rest.  Cells execute sequentially (see module docstring).
    """
    if not cells:
        raise ValueError("sweep requires at least one cell")
    outcomes = []
    for cell in cells:
        if cell.mode not in ("batch", "streaming"):
            outcomes.append(SweepOutcome(cell=cell, error=f"unknown mode {cell.mode!r}"))
            continue
        runner = run_batch if cell.mode == "batch" else run_streaming
        meter = cell.meter_factory()
        cell.model.reset()
        try:
            result = runner(cell.stream, cell.model, cell.config, meter, cell.carbon)
            outcomes.append(SweepOutcome(cell=cell, result=result))
        except RunAborted as err:
            outcomes.append(SweepOutcome(cell=cell, result=err.partial, error=str(err)))
        except Exception as err:  # config/stream faults
            outcomes.append(SweepOutcome(cell=cell, error=f"{type(err).__name__}: {err}"))
    return outcomes

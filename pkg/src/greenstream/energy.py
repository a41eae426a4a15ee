"""Span-based energy accounting and conversion to grams of CO2-equivalent.

Only train and predict work is metered; harness bookkeeping between spans
is deliberately excluded.  Two meters are provided: a CPU-time meter
(process CPU seconds x a constant power draw) for real measurements, and
a deterministic table-driven meter for exact, hardware-independent tests.
The meter contract is pluggable so hardware-counter meters can be added
without touching the evaluation loops.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .core import GreenstreamError

SPAN_KINDS = ("train", "predict")


class MeterError(GreenstreamError):
    """Span protocol violated (unbalanced or mislabeled begin/end calls)."""


@dataclass(frozen=True)
class CarbonConfig:
    """Regional carbon intensity used to convert energy to emissions."""

    intensity_g_per_kwh: float = 190.0
    region_label: str = "ES"

    def __post_init__(self):
        if not self.intensity_g_per_kwh > 0:
            raise ValueError(
                f"carbon intensity must be > 0, got {self.intensity_g_per_kwh}"
            )


@dataclass(frozen=True)
class CostTable:
    """Fixed per-operation energy costs for the deterministic meter."""

    joules_per_train_instance: float
    joules_per_predict: float

    def __post_init__(self):
        for name in ("joules_per_train_instance", "joules_per_predict"):
            value = getattr(self, name)
            if not (value >= 0 and value < float("inf")):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


class EnergyMeter:
    """Accumulates energy over train/predict spans.

    Spans are flat: exactly one span may be open at a time and every
    begin_span must be closed by an end_span of the same kind.  Violations
    raise MeterError because they indicate a bug in the calling protocol.
    """

    def __init__(self):
        self._open_kind: Optional[str] = None
        self._open_payload = None
        self._totals = {kind: 0.0 for kind in SPAN_KINDS}

    def begin_span(self, kind: str, instances: Optional[int] = None) -> None:
        if kind not in SPAN_KINDS:
            raise MeterError(f"unknown span kind {kind!r}")
        if self._open_kind is not None:
            raise MeterError(
                f"begin_span({kind!r}) while a {self._open_kind!r} span is open"
            )
        payload = self._on_begin(kind, instances)
        self._open_kind = kind
        self._open_payload = payload

    def end_span(self, kind: str) -> None:
        if self._open_kind is None:
            raise MeterError(f"end_span({kind!r}) with no open span")
        if kind != self._open_kind:
            raise MeterError(
                f"end_span({kind!r}) does not match open {self._open_kind!r} span"
            )
        joules = self._on_end(kind, self._open_payload)
        self._totals[kind] += joules
        self._open_kind = None
        self._open_payload = None

    def read(self) -> float:
        """Cumulative joules over all closed spans; non-decreasing."""
        return sum(self._totals.values())

    def read_kind(self, kind: str) -> float:
        if kind not in SPAN_KINDS:
            raise MeterError(f"unknown span kind {kind!r}")
        return self._totals[kind]

    def assert_balanced(self) -> None:
        if self._open_kind is not None:
            raise MeterError(f"meter finished with open {self._open_kind!r} span")

    def abandon_open_span(self) -> None:
        """Discard an open span without charging it (abort paths only)."""
        self._open_kind = None
        self._open_payload = None

    # hooks ----------------------------------------------------------------

    def _on_begin(self, kind: str, instances: Optional[int]):
        raise NotImplementedError

    def _on_end(self, kind: str, payload) -> float:
        raise NotImplementedError


class CpuTimeMeter(EnergyMeter):
    """Energy = process CPU seconds inside the span x constant power draw.

    The clock is injectable for exact tests; it defaults to
    time.process_time so a run must be the only busy work in the process.
    """

    deterministic = False

    def __init__(self, power_watts: float = 45.0, clock: Callable[[], float] = time.process_time):
        if not power_watts > 0:
            raise ValueError(f"power_watts must be > 0, got {power_watts}")
        super().__init__()
        self.power_watts = power_watts
        self._clock = clock

    def _on_begin(self, kind, instances):
        return self._clock()

    def _on_end(self, kind, started) -> float:
        elapsed = self._clock() - started
        return max(elapsed, 0.0) * self.power_watts


class DeterministicMeter(EnergyMeter):
    """Bit-exact meter driven by a fixed cost table.

    Train spans charge instances x joules_per_train_instance and therefore
    require the instance count as span metadata; predict spans charge a
    flat joules_per_predict each.
    """

    deterministic = True

    def __init__(self, table: CostTable):
        super().__init__()
        self.table = table

    def _on_begin(self, kind, instances):
        if kind == "train":
            if instances is None:
                raise MeterError("train span requires an instance count")
            if instances < 0:
                raise MeterError(f"train span instance count must be >= 0, got {instances}")
        return instances

    def _on_end(self, kind, instances) -> float:
        if kind == "train":
            return instances * self.table.joules_per_train_instance
        return self.table.joules_per_predict


def cpu_time_meter(power_watts: float = 45.0,
                   clock: Callable[[], float] = time.process_time) -> CpuTimeMeter:
    return CpuTimeMeter(power_watts=power_watts, clock=clock)


def deterministic_meter(table: CostTable) -> DeterministicMeter:
    return DeterministicMeter(table)


def to_gco2e(joules: float, carbon: CarbonConfig) -> float:
    """Convert joules to grams CO2e: (J / 3.6e6) x intensity[g/kWh]."""
    if joules < 0:
        raise ValueError(f"joules must be >= 0, got {joules}")
    return (joules / 3.6e6) * carbon.intensity_g_per_kwh

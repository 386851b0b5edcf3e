"""Kinetic/potential energy decomposition of OHLCV price series.

Per bar, kinetic energy is 0.5 * mass * velocity**2 where velocity is the
backward close-to-close difference divided by the bar duration, and potential
energy is the linear height of the close above its reference level (rolling
minimum support by default). A falling rate trades potential for kinetic
energy; the rebound trades it back.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

from .energy_engine import PotentialModel
from .errors import DomainError, EmptyInputError, NonFiniteError, OhlcRangeError

__all__ = [
    "Bar",
    "EnergyTrace",
    "velocity_series",
    "kinetic_series",
    "potential_series",
    "energy_decomposition",
]


@dataclass(frozen=True)
class Bar:
    """One OHLCV record. Prices are positive; low/high bound open and close."""

    timestamp: datetime
    open: float
    high: float
    low: float
    close: float
    volume: float

    def __post_init__(self) -> None:
        prices = {"open": self.open, "high": self.high, "low": self.low, "close": self.close}
        for name, p in prices.items():
            if not math.isfinite(float(p)):
                raise NonFiniteError(f"{name} price is not finite")
            if p <= 0:
                raise DomainError(f"{name} price must be > 0, got {p}")
        if not math.isfinite(float(self.volume)):
            raise NonFiniteError("volume is not finite")
        if self.volume < 0:
            raise DomainError(f"volume must be >= 0, got {self.volume}")
        if self.low > min(self.open, self.close) or self.high < max(self.open, self.close):
            raise OhlcRangeError(
                f"low/high [{self.low}, {self.high}] does not contain open/close "
                f"[{self.open}, {self.close}]"
            )


@dataclass(frozen=True)
class EnergyTrace:
    """Per-bar energy ledger: kinetic, potential, total, and their exchange."""

    timestamps: tuple[datetime, ...]
    kinetic: tuple[float, ...]
    potential: tuple[float, ...]
    total: tuple[float, ...]
    reference: tuple[float, ...]
    clamped: tuple[bool, ...]
    d_kinetic: tuple[float, ...]
    d_potential: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.timestamps)


def _require_bars(series: Sequence[Bar]) -> None:
    if len(series) == 0:
        raise EmptyInputError("price series is empty")


def velocity_series(series: Sequence[Bar], dt: float = 1.0) -> list[float]:
    """Backward-difference rate velocity per bar; the first bar has velocity 0."""
    _require_bars(series)
    dt = float(dt)
    if not math.isfinite(dt) or dt <= 0:
        raise DomainError(f"dt must be finite and > 0, got {dt}")
    out = [0.0]
    for prev, cur in zip(series, series[1:]):
        out.append((cur.close - prev.close) / dt)
    return out


def kinetic_series(series: Sequence[Bar], model: PotentialModel, dt: float = 1.0) -> list[float]:
    """Kinetic energy 0.5 * mass * velocity**2 per bar."""
    return [0.5 * model.mass * v * v for v in velocity_series(series, dt)]


def _rolling_min(values: Sequence[float], window: int) -> list[float]:
    # Monotonic deque of candidate indices; O(n) overall.
    out: list[float] = []
    candidates: deque[int] = deque()
    for i, v in enumerate(values):
        while candidates and values[candidates[-1]] >= v:
            candidates.pop()
        candidates.append(i)
        if candidates[0] <= i - window:
            candidates.popleft()
        out.append(values[candidates[0]])
    return out


def potential_series(
    series: Sequence[Bar], model: PotentialModel
) -> tuple[list[float], list[float]]:
    """Potential energy per bar plus the reference level used at each bar.

    The rolling reference is the minimum close over the trailing ``window``
    bars including the current one, so it can never exceed the current close.
    A fixed reference above the close clamps the potential at 0.
    """
    _require_bars(series)
    closes = [b.close for b in series]
    if model.reference_rule == "rolling_min":
        if model.window > len(series):
            raise DomainError(
                f"rolling window {model.window} exceeds series length {len(series)}"
            )
        refs = _rolling_min(closes, model.window)
    else:
        refs = [float(model.v_ref)] * len(series)
    potentials = [max(model.mass * (c - ref), 0.0) for c, ref in zip(closes, refs)]
    return potentials, refs


def energy_decomposition(
    series: Sequence[Bar], model: PotentialModel, dt: float = 1.0
) -> EnergyTrace:
    """Full per-bar energy trace: kinetic, potential, total, and exchange deltas.

    ``clamped`` flags bars whose close sits below the reference level, where
    the potential was clamped at 0 instead of going negative.
    """
    kinetic = kinetic_series(series, model, dt)
    potential, refs = potential_series(series, model)
    total = [k + p for k, p in zip(kinetic, potential)]
    clamped = [bar.close < ref for bar, ref in zip(series, refs)]
    d_kin = [0.0] + [b - a for a, b in zip(kinetic, kinetic[1:])]
    d_pot = [0.0] + [b - a for a, b in zip(potential, potential[1:])]
    return EnergyTrace(
        timestamps=tuple(b.timestamp for b in series),
        kinetic=tuple(kinetic),
        potential=tuple(potential),
        total=tuple(total),
        reference=tuple(refs),
        clamped=tuple(clamped),
        d_kinetic=tuple(d_kin),
        d_potential=tuple(d_pot),
    )

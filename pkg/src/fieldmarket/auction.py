"""Single-round call-auction clearing and equilibrium-price simulation.

Each step aggregates buy orders from the highest limit down and sell orders
from the lowest limit up, then clears at the tick-grid price that maximizes
executable volume min(demand, supply). Ties are broken by proximity to the
previous equilibrium price, then by the lower price, so replays are fully
deterministic. The simulator threads the resulting price path through the
market-work ledger work = R * delta_price.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .config import RunConfig
from .energy_engine import PotentialModel, market_work
from .errors import DomainError, EmptyInputError, FormatError, NonFiniteError

SIDES = ("buy", "sell")

SCENARIO_HEADER = ["day", "side", "limit_price", "quantity"]
BOOK_HEADER = ["side", "limit_price", "quantity"]


@dataclass(frozen=True)
class Order:
    """A limit or market order; ``limit_price=None`` means a market order."""

    side: str
    limit_price: float | None
    quantity: int

    def __post_init__(self) -> None:
        if self.side not in SIDES:
            raise DomainError(f"side must be 'buy' or 'sell', got {self.side!r}")
        if not isinstance(self.quantity, int) or isinstance(self.quantity, bool):
            raise DomainError(f"quantity must be an integer, got {self.quantity!r}")
        if self.quantity < 1:
            raise DomainError(f"quantity must be >= 1, got {self.quantity}")
        if self.limit_price is not None:
            price = float(self.limit_price)
            if not math.isfinite(price):
                raise NonFiniteError("limit price must be finite")
            if price <= 0:
                raise DomainError(f"limit price must be > 0, got {price}")
            object.__setattr__(self, "limit_price", price)

    @property
    def is_market(self) -> bool:
        return self.limit_price is None


@dataclass(frozen=True)
class ClearingResult:
    """Outcome of one call auction."""

    clearing_price: float | None
    executed_volume: int
    demand_at_price: int
    supply_at_price: int
    crossed: bool


@dataclass(frozen=True)
class MarketState:
    """Per-asset simulator state: the current equilibrium price."""

    asset_id: str
    price: float

    def __post_init__(self) -> None:
        if not math.isfinite(float(self.price)) or self.price <= 0:
            raise DomainError(f"price must be finite and > 0, got {self.price}")


@dataclass(frozen=True)
class StepRecord:
    """One simulator step: the new price, executed volume, and work increment."""

    price: float | None
    executed_volume: int
    delta_p: float
    work: float
    potential_delta: float


@dataclass(frozen=True)
class TraceRecord:
    day: int
    price: float | None
    executed_volume: int
    delta_p: float
    work: float
    cum_work: float


@dataclass(frozen=True)
class SimulationTrace:
    records: tuple[TraceRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    @property
    def prices(self) -> list[float | None]:
        return [r.price for r in self.records]

    @property
    def cumulative_work(self) -> float:
        return self.records[-1].cum_work if self.records else 0.0


def _validate_grid(price_grid: Sequence[float]) -> None:
    if len(price_grid) == 0:
        raise EmptyInputError("price grid is empty")
    for p in price_grid:
        if not math.isfinite(float(p)):
            raise NonFiniteError("price grid contains a non-finite price")
    for lo, hi in zip(price_grid, price_grid[1:]):
        if not lo < hi:
            raise DomainError("price grid must be sorted strictly ascending")


def aggregate_demand(
    orders: Iterable[Order], price_grid: Sequence[float]
) -> list[tuple[float, int]]:
    """Cumulative buy quantity willing to pay at least each grid price.

    Market buys count at every price. The curve is nonincreasing in price.
    """
    _validate_grid(price_grid)
    market_qty = 0
    limits: list[tuple[float, int]] = []
    for o in orders:
        if o.side != "buy":
            continue
        if o.is_market:
            market_qty += o.quantity
        else:
            limits.append((o.limit_price, o.quantity))
    limits.sort(key=lambda pair: pair[0], reverse=True)
    out: list[tuple[float, int]] = []
    acc = market_qty
    idx = 0
    for p in reversed(price_grid):  # walk prices high -> low, accumulating
        while idx < len(limits) and limits[idx][0] >= p:
            acc += limits[idx][1]
            idx += 1
        out.append((float(p), acc))
    out.reverse()
    return out


def aggregate_supply(
    orders: Iterable[Order], price_grid: Sequence[float]
) -> list[tuple[float, int]]:
    """Cumulative sell quantity willing to accept at most each grid price.

    Market sells count at every price. The curve is nondecreasing in price.
    """
    _validate_grid(price_grid)
    market_qty = 0
    limits: list[tuple[float, int]] = []
    for o in orders:
        if o.side != "sell":
            continue
        if o.is_market:
            market_qty += o.quantity
        else:
            limits.append((o.limit_price, o.quantity))
    limits.sort(key=lambda pair: pair[0])
    out: list[tuple[float, int]] = []
    acc = market_qty
    idx = 0
    for p in price_grid:
        while idx < len(limits) and limits[idx][0] <= p:
            acc += limits[idx][1]
            idx += 1
        out.append((float(p), acc))
    return out


def _to_ticks(price: float, tick: float) -> int:
    # Half-up rounding in tick units; integer ticks keep grid comparisons exact.
    return math.floor(price / tick + 0.5)


def clear_auction(orders: Sequence[Order], prev_price: float, tick: float = 1.0) -> ClearingResult:
    """Clear one call auction against the tick grid spanned by the limit prices.

    Candidate prices are every tick multiple between the lowest and highest
    limit price (limits are rounded to the tick first). The clearing price
    maximizes min(demand, supply); ties prefer the candidate closest to
    ``prev_price``, then the lower price. A book with no positive executable
    volume (or no limit prices at all) does not cross; that is a result, not
    an error.
    """
    tick = float(tick)
    prev_price = float(prev_price)
    if not math.isfinite(tick) or tick <= 0:
        raise DomainError(f"tick must be finite and > 0, got {tick}")
    if not math.isfinite(prev_price) or prev_price <= 0:
        raise DomainError(f"prev_price must be finite and > 0, got {prev_price}")

    not_crossed = ClearingResult(None, 0, 0, 0, False)
    limit_ticks = [_to_ticks(o.limit_price, tick) for o in orders if not o.is_market]
    if not limit_ticks:
        return not_crossed

    rounded = [
        Order(o.side, None if o.is_market else _to_ticks(o.limit_price, tick) * tick, o.quantity)
        for o in orders
    ]
    lo, hi = min(limit_ticks), max(limit_ticks)
    grid = [t * tick for t in range(lo, hi + 1)]
    demand = aggregate_demand(rounded, grid)
    supply = aggregate_supply(rounded, grid)

    best = None  # (volume, |price - prev|, price, demand, supply)
    for (p, d), (_, s) in zip(demand, supply):
        volume = min(d, s)
        distance = abs(p - prev_price)
        if best is None or volume > best[0] or (volume == best[0] and distance < best[1]):
            best = (volume, distance, p, d, s)
    volume, _, price, d, s = best
    if volume <= 0:
        return not_crossed
    return ClearingResult(price, volume, d, s, True)


def step(
    state: MarketState,
    order_flow: Sequence[Order],
    model: PotentialModel,
    r_force: float,
    tick: float = 1.0,
) -> tuple[MarketState, StepRecord]:
    """Advance one auction round; the price holds when the book does not cross.

    The record carries the market-work increment R * delta_p and, for
    work-energy bookkeeping, the matching potential change mass * delta_p.
    """
    result = clear_auction(order_flow, state.price, tick) if order_flow else ClearingResult(
        None, 0, 0, 0, False
    )
    new_price = result.clearing_price if result.crossed else state.price
    delta_p = new_price - state.price
    record = StepRecord(
        price=new_price,
        executed_volume=result.executed_volume,
        delta_p=delta_p,
        work=market_work(r_force, delta_p),
        potential_delta=model.mass * delta_p,
    )
    return MarketState(state.asset_id, new_price), record


def parse_book_csv(text: str) -> list[Order]:
    """Parse an order book: header ``side,limit_price,quantity``."""
    rows = _read_csv(text, BOOK_HEADER)
    return [
        _order_from_fields(side, limit, qty, line)
        for line, (side, limit, qty) in rows
    ]


def parse_scenario_csv(text: str) -> list[tuple[int, list[Order]]]:
    """Parse a day-by-day order flow: header ``day,side,limit_price,quantity``.

    Days must be nondecreasing so the replay order is unambiguous.
    """
    rows = _read_csv(text, SCENARIO_HEADER)
    days: list[tuple[int, list[Order]]] = []
    last_day = None
    for line, (day_raw, side, limit, qty) in rows:
        try:
            day = int(day_raw)
        except ValueError:
            raise FormatError(f"line {line}, column day: not an integer: {day_raw!r}") from None
        if last_day is not None and day < last_day:
            raise FormatError(f"line {line}, column day: days must be nondecreasing")
        order = _order_from_fields(side, limit, qty, line)
        if last_day != day:
            days.append((day, []))
            last_day = day
        days[-1][1].append(order)
    return days


def _read_csv(text: str, header: list[str]) -> list[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(text))
    try:
        got_header = next(reader)
    except StopIteration:
        raise FormatError(f"missing header row; expected {','.join(header)}") from None
    if [h.strip() for h in got_header] != header:
        raise FormatError(
            f"bad header {','.join(got_header)!r}; expected {','.join(header)!r}"
        )
    rows = []
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise FormatError(f"line {line}: expected {len(header)} fields, got {len(row)}")
        rows.append((line, [f.strip() for f in row]))
    return rows


def _order_from_fields(side: str, limit: str, qty: str, line: int) -> Order:
    if limit == "":
        price = None
    else:
        try:
            price = float(limit)
        except ValueError:
            raise FormatError(
                f"line {line}, column limit_price: not a number: {limit!r}"
            ) from None
    try:
        quantity = int(qty)
    except ValueError:
        raise FormatError(f"line {line}, column quantity: not an integer: {qty!r}") from None
    try:
        return Order(side, price, quantity)
    except (DomainError, NonFiniteError) as exc:
        raise FormatError(f"line {line}: {exc}") from None


def run_scenario(config: RunConfig, scenario_path: str | Path) -> SimulationTrace:
    """Replay an order-flow scenario deterministically.

    When ``config.initial_price`` is unset, the first crossed auction sets the
    rate datum: its proximity tie-break degenerates to the lowest candidate
    price, and its delta_p and work are 0.
    """
    try:
        text = Path(scenario_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read scenario file {scenario_path}: {exc}") from None
    flow = parse_scenario_csv(text)
    return replay(flow, config)


def replay(
    flow: Sequence[tuple[int, Sequence[Order]]] | Mapping[int, Sequence[Order]],
    config: RunConfig | None = None,
) -> SimulationTrace:
    """Run the simulator over parsed per-day order flow."""
    config = config or RunConfig()
    model = config.potential_model()
    if isinstance(flow, Mapping):
        flow = sorted(flow.items())
    price: float | None = config.initial_price
    records: list[TraceRecord] = []
    cum_work = 0.0
    for day, orders in flow:
        if price is None:
            result = _clear_datum(orders, config.tick)
            new_price = result.clearing_price if result.crossed else None
            record = TraceRecord(day, new_price, result.executed_volume, 0.0, 0.0, cum_work)
            price = new_price
        else:
            state, step_rec = step(MarketState("scenario", price), list(orders), model,
                                   config.r_force, config.tick)
            cum_work += step_rec.work
            record = TraceRecord(day, step_rec.price, step_rec.executed_volume,
                                 step_rec.delta_p, step_rec.work, cum_work)
            price = state.price
        records.append(record)
    return SimulationTrace(tuple(records))


def _clear_datum(orders: Sequence[Order], tick: float) -> ClearingResult:
    # No prior price yet: anchoring the proximity tie-break at the lowest
    # limit makes it select the lowest max-volume price, matching the
    # documented second-level tie-break.
    limits = [o.limit_price for o in orders if not o.is_market]
    if not limits:
        return ClearingResult(None, 0, 0, 0, False)
    return clear_auction(orders, min(limits), tick)

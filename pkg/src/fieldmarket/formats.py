"""CSV/JSON parsing and rendering for the file interfaces.

All numeric output is rendered at 12 significant digits so golden files stay
stable, and the JSON form of a report carries exactly the same column names
and values as the CSV form.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

from .errors import (
    DomainError,
    FormatError,
    NonFiniteError,
    OhlcRangeError,
    TimestampOrderError,
)
from .info_space import FeatureVector, InformationCharge
from .series_energy import Bar

OHLCV_HEADER = ["timestamp", "open", "high", "low", "close", "volume"]

SIG_DIGITS = 12


def format_number(x: float) -> str:
    """Render a float at 12 significant digits; -0.0 normalizes to 0."""
    if x == 0.0:
        x = 0.0
    return f"{x:.{SIG_DIGITS}g}"


def _json_number(x: float) -> float:
    return float(format_number(x))


def format_timestamp(ts: datetime) -> str:
    """Canonical ISO form: date only at midnight, else full datetime."""
    if ts.tzinfo is None and ts.hour == ts.minute == ts.second == ts.microsecond == 0:
        return ts.date().isoformat()
    return ts.isoformat()


# ---------------------------------------------------------------------------
# OHLCV bars
# ---------------------------------------------------------------------------


def parse_ohlcv_csv(text: str) -> list[Bar]:
    """Parse bars with header ``timestamp,open,high,low,close,volume``.

    Rows failing to parse raise FormatError with the offending row number;
    low/high envelope violations raise OhlcRangeError; timestamps must be
    strictly increasing or TimestampOrderError names the first offender.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"missing header row; expected {','.join(OHLCV_HEADER)}") from None
    if [h.strip() for h in header] != OHLCV_HEADER:
        raise FormatError(
            f"bad header {','.join(header)!r}; expected {','.join(OHLCV_HEADER)!r}"
        )
    bars: list[Bar] = []
    for row_num, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != 6:
            raise FormatError(f"row {row_num}: expected 6 fields, got {len(row)}")
        raw_ts, *numbers = (f.strip() for f in row)
        try:
            ts = datetime.fromisoformat(raw_ts)
        except ValueError:
            raise FormatError(f"row {row_num}: bad timestamp {raw_ts!r}") from None
        try:
            o, h, l, c, v = (float(x) for x in numbers)
        except ValueError:
            raise FormatError(f"row {row_num}: non-numeric price or volume field") from None
        try:
            bar = Bar(ts, o, h, l, c, v)
        except OhlcRangeError as exc:
            raise OhlcRangeError(f"row {row_num}: {exc}") from None
        except (DomainError, NonFiniteError) as exc:
            raise FormatError(f"row {row_num}: {exc}") from None
        if bars:
            previous = bars[-1].timestamp
            if (previous.tzinfo is None) != (ts.tzinfo is None):
                raise TimestampOrderError(
                    f"row {row_num}: mixes naive and timezone-aware timestamps"
                )
            if ts <= previous:
                raise TimestampOrderError(
                    f"row {row_num}: timestamp {format_timestamp(ts)} is not after "
                    f"{format_timestamp(previous)}"
                )
        bars.append(bar)
    return bars


def render_ohlcv_csv(bars: Sequence[Bar]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(OHLCV_HEADER)
    for b in bars:
        writer.writerow(
            [
                format_timestamp(b.timestamp),
                format_number(b.open),
                format_number(b.high),
                format_number(b.low),
                format_number(b.close),
                format_number(b.volume),
            ]
        )
    return out.getvalue()


# ---------------------------------------------------------------------------
# Assets, query points, and paths
# ---------------------------------------------------------------------------


def _feature_header(names: Sequence[str], start: int, context: str) -> int:
    features = names[start:]
    expected = [f"f{i}" for i in range(1, len(features) + 1)]
    if len(features) == 0 or list(features) != expected:
        raise FormatError(
            f"{context}: feature columns must be f1..fk, got {','.join(names)!r}"
        )
    return len(features)


def _float_fields(row: Sequence[str], row_num: int) -> list[float]:
    try:
        return [float(x) for x in row]
    except ValueError:
        raise FormatError(f"row {row_num}: non-numeric field") from None


def parse_assets_csv(text: str) -> list[InformationCharge]:
    """Parse charges with header ``asset_id,charge,f1,...,fk``."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise FormatError("missing header row; expected asset_id,charge,f1,...,fk") from None
    if header[:2] != ["asset_id", "charge"]:
        raise FormatError(f"bad header {','.join(header)!r}; expected asset_id,charge,f1,...,fk")
    dim = _feature_header(header, 2, "assets file")
    charges: list[InformationCharge] = []
    for row_num, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != 2 + dim:
            raise FormatError(f"row {row_num}: expected {2 + dim} fields, got {len(row)}")
        asset_id = row[0].strip()
        magnitude, *coords = _float_fields([f.strip() for f in row[1:]], row_num)
        try:
            charges.append(InformationCharge(asset_id, FeatureVector(tuple(coords)), magnitude))
        except (DomainError, NonFiniteError) as exc:
            raise FormatError(f"row {row_num}: {exc}") from None
    return charges


def parse_points_csv(text: str) -> list[tuple[str, FeatureVector]]:
    """Parse query points with header ``point_id,f1,...,fk``."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise FormatError("missing header row; expected point_id,f1,...,fk") from None
    if header[:1] != ["point_id"]:
        raise FormatError(f"bad header {','.join(header)!r}; expected point_id,f1,...,fk")
    dim = _feature_header(header, 1, "points file")
    points = []
    for row_num, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != 1 + dim:
            raise FormatError(f"row {row_num}: expected {1 + dim} fields, got {len(row)}")
        coords = _float_fields([f.strip() for f in row[1:]], row_num)
        try:
            points.append((row[0].strip(), FeatureVector(tuple(coords))))
        except (DomainError, NonFiniteError) as exc:
            raise FormatError(f"row {row_num}: {exc}") from None
    return points


def parse_path_csv(text: str) -> list[tuple[float, ...]]:
    """Parse path vertices with header ``f1,...,fk``."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise FormatError("missing header row; expected f1,...,fk") from None
    dim = _feature_header(header, 0, "path file")
    vertices = []
    for row_num, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != dim:
            raise FormatError(f"row {row_num}: expected {dim} fields, got {len(row)}")
        vertices.append(tuple(_float_fields([f.strip() for f in row], row_num)))
    return vertices


# ---------------------------------------------------------------------------
# Tabular reports (shared by every CLI subcommand)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Report:
    """A flat table; the CSV and JSON renderers agree field for field."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, datetime):
        return format_timestamp(value)
    return str(value)


def _json_cell(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return _json_number(value)
    if isinstance(value, datetime):
        return format_timestamp(value)
    return value


def render_report_csv(report: Report) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_csv_cell(v) for v in row])
    return out.getvalue()


def render_report_json(report: Report) -> str:
    records = [
        {col: _json_cell(v) for col, v in zip(report.columns, row)}
        for row in report.rows
    ]
    return json.dumps(records, indent=2) + "\n"


def render_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return render_report_json(report)
    return render_report_csv(report)

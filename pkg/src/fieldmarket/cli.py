"""Command-line interface tying the library into runnable workflows.

Subcommands: ``field``, ``work``, ``energy``, ``auction``, ``simulate``, and
``config dump``. Exit codes: 0 success, 1 usage error, 2 data error. Every
failure prints a single diagnostic line ``error[<kind>]: message`` to stderr.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .auction import clear_auction, parse_book_csv, run_scenario
from .config import (
    CONFIG_ENV_VAR,
    RunConfig,
    dump_config,
    load_config,
    load_default_config,
)
from .energy_engine import PolylinePath, work_closed_form, work_line_integral
from .errors import FieldMarketError, UsageError
from .field_engine import FieldParams, field_at, force_on
from .formats import (
    Report,
    parse_assets_csv,
    parse_ohlcv_csv,
    parse_path_csv,
    parse_points_csv,
    render_report,
)
from .info_space import info_distance
from .series_energy import energy_decomposition


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fieldmarket",
        description="Information-field analytics and auction simulation for market data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help=f"config file (also ${CONFIG_ENV_VAR})")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--seed", type=int, help="recorded for reproducibility; currently unused")

    p = sub.add_parser("field", help="evaluate the information field at query points")
    p.add_argument("--assets", help="CSV of source charges (asset_id,charge,f1..fk)")
    p.add_argument("--points", help="CSV of query points (point_id,f1..fk)")
    p.add_argument("--k-b", dest="k_b", type=float, help="field coupling constant")
    p.add_argument("--floor", dest="distance_floor", type=float, help="distance floor")
    p.add_argument("--probe-charge", type=float, default=1.0, help="probe charge for the force column")
    common(p)

    p = sub.add_parser("work", help="line-integral work along a path, with closed-form check")
    p.add_argument("--assets", help="CSV of source charges")
    p.add_argument("--path", help="CSV of path vertices (f1..fk)")
    p.add_argument("--q0", type=float, default=1.0, help="probe charge moved along the path")
    p.add_argument("--k-b", dest="k_b", type=float, help="field coupling constant")
    p.add_argument("--floor", dest="distance_floor", type=float, help="distance floor")
    common(p)

    p = sub.add_parser("energy", help="kinetic/potential energy trace of an OHLCV series")
    p.add_argument("--in", dest="bars", help="OHLCV CSV file")
    p.add_argument("--mass", type=float, help="mass analogue")
    p.add_argument("--dt", type=float, help="bar duration in velocity units")
    p.add_argument("--reference", help="reference rule: fixed:<value> or rolling_min:<window>")
    common(p)

    p = sub.add_parser("auction", help="clear one call auction from an order book")
    p.add_argument("--book", help="order book CSV (side,limit_price,quantity)")
    p.add_argument("--prev", type=float, required=True, help="previous equilibrium price")
    p.add_argument("--tick", type=float, help="price tick size")
    common(p)

    p = sub.add_parser("simulate", help="replay a day-by-day order-flow scenario")
    p.add_argument("--scenario", help="scenario CSV (day,side,limit_price,quantity)")
    p.add_argument("--r", dest="r_force", type=float, help="request force for the work ledger")
    p.add_argument("--tick", type=float, help="price tick size")
    p.add_argument("--initial-price", dest="initial_price", type=float,
                   help="rate before the first day; defaults to the first clearing price")
    common(p)

    p = sub.add_parser("config", help="configuration utilities")
    action = p.add_subparsers(dest="action", required=True)
    d = action.add_parser("dump", help="print the effective configuration")
    common(d)

    return parser


def _effective_config(args: argparse.Namespace) -> RunConfig:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
    else:
        cfg = load_default_config()
    overrides = (
        "k_b", "distance_floor", "mass", "dt", "tick", "r_force",
        "initial_price", "assets", "points", "path", "bars", "book", "scenario",
    )
    for name in overrides:
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if getattr(args, "reference", None) is not None:
        cfg.reference_rule = args.reference
    if getattr(args, "format", None) is not None:
        cfg.fmt = args.format
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    cfg.validate()
    return cfg


def _resolve_input(value: str | None, what: str) -> Path:
    """Resolve an input path: the filesystem first, then bundled fixtures."""
    if not value:
        raise UsageError(f"missing required input: {what}")
    p = Path(value)
    if p.exists():
        return p
    bundled = resources.files("fieldmarket").joinpath("fixtures", p.name)
    if p.name == value and bundled.is_file():
        with resources.as_file(bundled) as real:
            return Path(real)
    raise FileNotFoundError(f"input file not found: {value}")


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _field_params(cfg: RunConfig) -> FieldParams:
    return FieldParams(k_b=cfg.k_b, distance_floor=cfg.distance_floor)


def cmd_field(args: argparse.Namespace, cfg: RunConfig) -> Report:
    sources = parse_assets_csv(_read(_resolve_input(cfg.assets, "--assets")))
    points = parse_points_csv(_read(_resolve_input(cfg.points, "--points")))
    params = _field_params(cfg)
    if not points:
        return Report(("point_id",), ())
    dim = points[0][1].dimension
    columns = ("point_id", *(f"e{i}" for i in range(1, dim + 1)), "magnitude", "force_magnitude")
    rows = []
    for point_id, point in points:
        field = field_at(sources, point, params)
        force = force_on(args.probe_charge, field)
        rows.append((point_id, *field.components, field.magnitude, force.magnitude))
    return Report(columns, tuple(rows))


def cmd_work(args: argparse.Namespace, cfg: RunConfig) -> Report:
    sources = parse_assets_csv(_read(_resolve_input(cfg.assets, "--assets")))
    vertices = parse_path_csv(_read(_resolve_input(cfg.path, "--path")))
    path = PolylinePath.from_points(vertices)
    params = _field_params(cfg)
    numeric = work_line_integral(sources, args.q0, path, params)
    closed = 0.0
    start, end = path.vertices[0], path.vertices[-1]
    for src in sources:
        r1 = info_distance(start, src.position)
        r2 = info_distance(end, src.position)
        closed += work_closed_form(cfg.k_b, args.q0, src.magnitude, r1, r2,
                                   floor=cfg.distance_floor)
    return Report(
        ("work_line_integral", "work_closed_form", "abs_difference"),
        ((numeric, closed, abs(numeric - closed)),),
    )


def cmd_energy(args: argparse.Namespace, cfg: RunConfig) -> Report:
    bars = parse_ohlcv_csv(_read(_resolve_input(cfg.bars, "--in")))
    trace = energy_decomposition(bars, cfg.potential_model(), cfg.dt)
    columns = ("timestamp", "kinetic", "potential", "total", "reference", "clamped")
    rows = tuple(
        (ts, k, p, t, ref, cl)
        for ts, k, p, t, ref, cl in zip(
            trace.timestamps, trace.kinetic, trace.potential,
            trace.total, trace.reference, trace.clamped,
        )
    )
    return Report(columns, rows)


def cmd_auction(args: argparse.Namespace, cfg: RunConfig) -> Report:
    orders = parse_book_csv(_read(_resolve_input(cfg.book, "--book")))
    result = clear_auction(orders, args.prev, cfg.tick)
    return Report(
        ("clearing_price", "executed_volume", "demand_at_price", "supply_at_price", "crossed"),
        ((result.clearing_price, result.executed_volume, result.demand_at_price,
          result.supply_at_price, result.crossed),),
    )


def cmd_simulate(args: argparse.Namespace, cfg: RunConfig) -> Report:
    trace = run_scenario(cfg, _resolve_input(cfg.scenario, "--scenario"))
    columns = ("day", "price", "volume", "delta_p", "work", "cum_work")
    rows = tuple(
        (r.day, r.price, r.executed_volume, r.delta_p, r.work, r.cum_work)
        for r in trace.records
    )
    return Report(columns, rows)


_COMMANDS = {
    "field": cmd_field,
    "work": cmd_work,
    "energy": cmd_energy,
    "auction": cmd_auction,
    "simulate": cmd_simulate,
}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _effective_config(args)
        if args.command == "config":
            _emit(dump_config(cfg), args.out)
            return 0
        report = _COMMANDS[args.command](args, cfg)
        _emit(render_report(report, cfg.fmt), args.out)
        return 0
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 1
    except FieldMarketError as exc:
        print(f"error[{exc.kind}]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

"""Acceptance suite: one test per release criterion.

Each test prints a PASS line with its measured numbers; run with ``-s`` to
see them (any failure shows the captured output regardless). Timing budgets
are wall-clock on the current host and measure the operation itself, not
interpreter or import startup.
"""

import csv
import io
import json
import math
import os
import random
import subprocess
import sys
import time

import pytest

from fieldmarket import (
    FeatureVector,
    FieldParams,
    InformationCharge,
    PolylinePath,
    PotentialModel,
    clear_auction,
    energy_decomposition,
    field_at,
    field_magnitude,
    market_work,
    potential_delta,
    work_closed_form,
    work_line_integral,
)
from fieldmarket.cli import main
from fieldmarket.formats import render_ohlcv_csv

from oracles import bars_from_closes, brute_clear, free_fall_closes
from test_auction import random_book
from test_io_cli import ASSETS_TEXT, PATH_TEXT, POINTS_TEXT, SCENARIO_TEXT


def report(criterion, detail):
    print(f"PASS criterion {criterion}: {detail}")


def rel_diff(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


def test_criterion_1_inverse_square_law():
    rng = random.Random(1001)
    params = FieldParams()
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        q = rng.uniform(0.01, 100.0)
        r = rng.uniform(2 * params.distance_floor, 1000.0)
        ratio = field_magnitude(q, 2 * r, params) / field_magnitude(q, r, params)
        worst = max(worst, abs(ratio - 0.25) / 0.25)
    elapsed = time.perf_counter() - start
    assert worst <= 1e-12
    assert elapsed < 1.0
    report(1, f"1000 ratio checks, worst rel err {worst:.2e}, {elapsed * 1e3:.0f} ms")


def test_criterion_2_superposition():
    rng = random.Random(1002)
    params = FieldParams()
    start = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        dim = rng.randint(2, 4)
        n = rng.randint(1, 100)
        sources = [
            InformationCharge(
                f"s{i}",
                FeatureVector(tuple(rng.uniform(-10, 10) for _ in range(dim))),
                rng.uniform(0.0, 5.0),
            )
            for i in range(n)
        ]
        point = FeatureVector(tuple(rng.uniform(-10, 10) for _ in range(dim)))
        combined = field_at(sources, point, params)
        singles = [field_at([s], point, params) for s in sources]
        for axis in range(dim):
            total = math.fsum(s.components[axis] for s in singles)
            got = combined.components[axis]
            scale = max(abs(got), abs(total), combined.magnitude)
            if scale > 0:
                worst = max(worst, abs(got - total) / scale)
    elapsed = time.perf_counter() - start
    assert worst <= 1e-12
    assert elapsed < 1.0
    report(2, f"500 superposition cases, worst rel err {worst:.2e}, {elapsed * 1e3:.0f} ms")


def test_criterion_3_conservative_field():
    rng = random.Random(1003)
    params = FieldParams()
    sources = [
        InformationCharge(
            f"s{i}",
            FeatureVector(tuple(rng.uniform(-1, 1) for _ in range(3))),
            rng.uniform(0.5, 3.0),
        )
        for i in range(5)
    ]
    start_pt, end_pt = (2.0, 0.0, 0.0), (0.0, 3.0, 1.0)
    start = time.perf_counter()
    works = []
    for _ in range(10):
        interior = []
        while len(interior) < 3:
            candidate = tuple(rng.uniform(-4, 4) for _ in range(3))
            if all(math.dist(candidate, s.position.values) > 0.5 for s in sources):
                interior.append(candidate)
        path = PolylinePath.from_points([start_pt, *interior, end_pt])
        works.append(work_line_integral(sources, 1.0, path, params))
    spread = (max(works) - min(works)) / max(abs(w) for w in works)
    assert spread <= 1e-6

    unit = InformationCharge("u", FeatureVector((0.0, 0.0)), 1.0)
    radial = work_line_integral(
        [unit], 1.0, PolylinePath.from_points([(1.0, 0.0), (2.0, 0.0)]), params
    )
    closed = work_closed_form(1.0, 1.0, 1.0, 1.0, 2.0)
    radial_err = rel_diff(radial, closed)
    elapsed = time.perf_counter() - start
    assert radial_err <= 1e-8
    assert elapsed < 5.0
    report(
        3,
        f"10 paths spread {spread:.2e}, radial vs closed form {radial_err:.2e}, "
        f"{elapsed * 1e3:.0f} ms",
    )


def test_criterion_4_work_energy_consistency():
    rng = random.Random(1004)
    model = PotentialModel.fixed(0.0, mass=1.0)
    worst = 0.0
    for _ in range(1000):
        mass = rng.uniform(0.1, 10.0)
        model = PotentialModel.fixed(0.0, mass=mass)
        ref = rng.uniform(0.0, 500.0)
        v1 = ref + rng.uniform(0.0, 1000.0)
        v2 = ref + rng.uniform(0.0, 1000.0)
        work = market_work(mass, v2 - v1)
        delta = potential_delta(v2, v1, model, ref)
        scale = max(abs(work), abs(delta), 1.0)
        worst = max(worst, abs(work - delta) / scale)
    assert worst <= 1e-12
    narrative = market_work(1.0, 1000.0 - 950.0)
    assert narrative == 50.0
    assert potential_delta(1000.0, 950.0, PotentialModel.fixed(950.0), 950.0) == 50.0
    report(4, f"1000 pairs, worst rel err {worst:.2e}; 950->1000 move = {narrative}")


def test_criterion_5_energy_conservation_free_fall():
    closes = free_fall_closes(v0=1000.0, g=2.0, n=30)
    bars = bars_from_closes(closes)
    model = PotentialModel.fixed(min(closes), mass=1.0)
    start = time.perf_counter()
    # dt = sqrt(g): the parabola is unit-acceleration free fall in rescaled
    # time, so kinetic + potential is constant up to backward-difference error.
    trace = energy_decomposition(bars, model, dt=math.sqrt(2.0))
    elapsed = time.perf_counter() - start
    top = 1000.0 - min(closes)
    analytic = [top] + [top + 0.25 - t for t in range(1, 30)]
    for got, want in zip(trace.total, analytic):
        assert got == pytest.approx(want, rel=1e-9)
    mean = sum(trace.total) / len(trace.total)
    worst = max(abs(x - mean) / mean for x in trace.total)
    assert worst <= 0.02
    assert elapsed < 1.0
    report(
        5,
        f"30-bar free fall, max total-energy deviation {worst * 100:.3f}% "
        f"(analytic discretization bound holds), {elapsed * 1e3:.1f} ms",
    )


def test_criterion_6_auction_matches_exhaustive_oracle():
    rng = random.Random(1006)
    start = time.perf_counter()
    crossed = 0
    for _ in range(1000):
        orders = random_book(rng, max_orders=50, lo=90, hi=110)
        prev = rng.uniform(85, 115)
        tick = rng.choice((0.5, 1.0))
        result = clear_auction(orders, prev, tick)
        price, volume = brute_clear(orders, prev, tick)
        assert result.executed_volume == volume
        assert result.clearing_price == price
        assert result.crossed == (price is not None)
        crossed += result.crossed
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    report(6, f"1000 books ({crossed} crossed) match the oracle exactly, {elapsed * 1e3:.0f} ms")


def test_criterion_7_reference_price_path(capsys):
    start = time.perf_counter()
    code = main(["simulate", "--scenario", "paper_days.csv"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    prices = [float(r["price"]) for r in rows]
    assert prices == [950.0, 1000.0, 1100.0]
    assert elapsed < 1.0
    with capsys.disabled():
        report(7, f"equilibrium path {prices}, {elapsed * 1e3:.1f} ms")


def test_criterion_8_indicator_throughput(tmp_path, capsys):
    rng = random.Random(1008)
    closes = [500.0]
    for _ in range(499):
        closes.append(max(10.0, closes[-1] + rng.uniform(-5, 5)))
    closes = [float(f"{c:.12g}") for c in closes]
    bars_file = tmp_path / "bars500.csv"
    bars_file.write_text(render_ohlcv_csv(bars_from_closes(closes)))
    argv = ["energy", "--in", str(bars_file), "--mass", "1"]
    assert main(argv) == 0  # warm-up, excludes one-time import costs
    capsys.readouterr()
    start = time.perf_counter()
    code = main(argv)
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 500
    for row in rows:
        for key in ("kinetic", "potential", "total", "reference"):
            value = float(row[key])
            assert math.isfinite(value)
            if key != "reference":
                assert value >= 0.0
    assert elapsed < 0.1
    with capsys.disabled():
        report(8, f"500-bar energy run in {elapsed * 1e3:.1f} ms, all finite and nonnegative")


def test_criterion_9_cli_determinism(tmp_path):
    bars = bars_from_closes(
        [100.0 + 10.0 * math.sin(t / 5.0) + (t % 7) for t in range(40)]
    )
    (tmp_path / "bars.csv").write_text(render_ohlcv_csv(bars))
    (tmp_path / "assets.csv").write_text(ASSETS_TEXT)
    (tmp_path / "points.csv").write_text(POINTS_TEXT)
    (tmp_path / "path.csv").write_text(PATH_TEXT)
    (tmp_path / "days.csv").write_text(SCENARIO_TEXT)
    (tmp_path / "run.cfg").write_text("mass=2\ntick=0.5\n")
    invocations = [
        ["field", "--assets", "assets.csv", "--points", "points.csv"],
        ["work", "--assets", "assets.csv", "--path", "path.csv"],
        ["energy", "--in", "bars.csv"],
        ["auction", "--book", "crossing.csv", "--prev", "9"],
        ["simulate", "--scenario", "days.csv"],
        ["config", "dump", "--config", "run.cfg"],
    ]
    env = {k: v for k, v in os.environ.items() if k != "FIELD_MARKET_CONFIG"}
    for argv in invocations:
        for fmt in (["--format", "csv"], ["--format", "json"], []):
            if argv[0] == "config" and fmt:
                continue
            cmd = [sys.executable, "-m", "fieldmarket", *argv, *fmt]
            first = subprocess.run(cmd, cwd=tmp_path, env=env, capture_output=True)
            second = subprocess.run(cmd, cwd=tmp_path, env=env, capture_output=True)
            assert first.returncode == 0, first.stderr
            assert second.returncode == 0
            assert first.stdout == second.stdout
            assert first.stderr == second.stderr == b""
    report(9, "all subcommands byte-identical across consecutive runs (csv and json)")

"""Tests for call-auction aggregation, clearing, and the scenario simulator."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fieldmarket import (
    DomainError,
    EmptyInputError,
    FormatError,
    MarketState,
    Order,
    PotentialModel,
    RunConfig,
    aggregate_demand,
    aggregate_supply,
    clear_auction,
    parse_scenario_csv,
    replay,
    step,
)

from oracles import brute_clear, demand_at, supply_at


def random_book(rng, max_orders=50, lo=80, hi=120):
    orders = []
    for _ in range(rng.randint(1, max_orders)):
        side = rng.choice(("buy", "sell"))
        if rng.random() < 0.1:
            price = None
        else:
            price = rng.uniform(lo, hi)
        orders.append(Order(side, price, rng.randint(1, 20)))
    return orders


order_strategy = st.builds(
    Order,
    side=st.sampled_from(("buy", "sell")),
    limit_price=st.one_of(st.none(), st.floats(min_value=1.0, max_value=50.0)),
    quantity=st.integers(min_value=1, max_value=10),
)


class TestAggregation:
    def test_single_buy_order_curve(self):
        orders = [Order("buy", 10.0, 5)]
        assert aggregate_demand(orders, [8.0, 9.0, 10.0, 11.0]) == [
            (8.0, 5),
            (9.0, 5),
            (10.0, 5),
            (11.0, 0),
        ]

    def test_no_buy_orders_all_zero(self):
        orders = [Order("sell", 9.0, 4)]
        assert aggregate_demand(orders, [8.0, 9.0, 10.0]) == [(8.0, 0), (9.0, 0), (10.0, 0)]

    def test_single_sell_order_curve(self):
        orders = [Order("sell", 9.0, 4)]
        assert aggregate_supply(orders, [8.0, 9.0, 10.0]) == [(8.0, 0), (9.0, 4), (10.0, 4)]

    def test_no_sell_orders_all_zero(self):
        orders = [Order("buy", 9.0, 4)]
        assert aggregate_supply(orders, [8.0, 9.0]) == [(8.0, 0), (9.0, 0)]

    def test_market_orders_count_at_every_price(self):
        orders = [Order("buy", None, 7), Order("sell", None, 3)]
        grid = [5.0, 50.0]
        assert aggregate_demand(orders, grid) == [(5.0, 7), (50.0, 7)]
        assert aggregate_supply(orders, grid) == [(5.0, 3), (50.0, 3)]

    def test_random_books_match_filter_and_sum_oracle(self):
        rng = random.Random(307)
        for _ in range(50):
            orders = random_book(rng)
            grid = sorted({round(rng.uniform(75, 125), 2) for _ in range(20)})
            demand = aggregate_demand(orders, grid)
            supply = aggregate_supply(orders, grid)
            for (p, d), (_, s) in zip(demand, supply):
                assert d == demand_at(orders, p)
                assert s == supply_at(orders, p)

    def test_demand_nonincreasing_supply_nondecreasing(self):
        rng = random.Random(311)
        for _ in range(30):
            orders = random_book(rng)
            grid = sorted({rng.uniform(75, 125) for _ in range(15)})
            d = [q for _, q in aggregate_demand(orders, grid)]
            s = [q for _, q in aggregate_supply(orders, grid)]
            assert all(a >= b for a, b in zip(d, d[1:]))
            assert all(a <= b for a, b in zip(s, s[1:]))

    def test_empty_grid_rejected(self):
        with pytest.raises(EmptyInputError):
            aggregate_demand([Order("buy", 10.0, 1)], [])

    def test_unsorted_grid_rejected(self):
        with pytest.raises(DomainError):
            aggregate_demand([Order("buy", 10.0, 1)], [9.0, 8.0])


class TestClearAuction:
    def test_tiebreak_prefers_previous_price(self):
        orders = [Order("buy", 10.0, 5), Order("sell", 8.0, 5)]
        result = clear_auction(orders, prev_price=9.0, tick=1.0)
        assert result.crossed
        assert result.clearing_price == 9.0
        assert result.executed_volume == 5

    def test_uncrossed_book(self):
        orders = [Order("buy", 8.0, 5), Order("sell", 10.0, 5)]
        result = clear_auction(orders, prev_price=9.0, tick=1.0)
        assert not result.crossed
        assert result.clearing_price is None
        assert result.executed_volume == 0

    def test_no_orders_is_not_an_error(self):
        result = clear_auction([], prev_price=9.0, tick=1.0)
        assert not result.crossed

    def test_market_only_book_cannot_discover_a_price(self):
        orders = [Order("buy", None, 5), Order("sell", None, 5)]
        assert not clear_auction(orders, prev_price=9.0).crossed

    def test_price_lies_between_executable_limits(self):
        # Limit-only books: market orders are executable at any price, so the
        # limit-based bound only applies when every order carries a limit.
        rng = random.Random(313)
        for _ in range(200):
            orders = [o for o in random_book(rng) if o.limit_price is not None]
            if not orders:
                continue
            result = clear_auction(orders, rng.uniform(80, 120), 1.0)
            if not result.crossed:
                continue
            p = result.clearing_price
            buy_limits = [o.limit_price for o in orders if o.side == "buy"]
            sell_limits = [o.limit_price for o in orders if o.side == "sell"]
            assert p <= max(buy_limits) + 0.5  # rounded to tick
            assert p >= min(sell_limits) - 0.5

    def test_matches_exhaustive_grid_oracle(self):
        rng = random.Random(317)
        for _ in range(300):
            orders = random_book(rng)
            prev = rng.uniform(80, 120)
            tick = rng.choice((0.5, 1.0))
            result = clear_auction(orders, prev, tick)
            price, volume = brute_clear(orders, prev, tick)
            assert result.executed_volume == volume
            if price is None:
                assert not result.crossed
            else:
                assert result.crossed
                assert result.clearing_price == price

    def test_volume_reported_at_price(self):
        orders = [Order("buy", 10.0, 7), Order("sell", 9.0, 4), Order("sell", 10.0, 5)]
        result = clear_auction(orders, 10.0, 1.0)
        assert result.crossed
        assert result.demand_at_price == demand_at(orders, result.clearing_price)
        assert result.supply_at_price == supply_at(orders, result.clearing_price)
        assert result.executed_volume == min(result.demand_at_price, result.supply_at_price)

    def test_adding_aggressive_buy_never_reduces_volume(self):
        rng = random.Random(331)
        for _ in range(100):
            orders = random_book(rng)
            base = clear_auction(orders, 100.0, 1.0)
            if not base.crossed:
                continue
            extra = Order("buy", base.clearing_price + 5.0, rng.randint(1, 10))
            bigger = clear_auction(orders + [extra], 100.0, 1.0)
            assert bigger.executed_volume >= base.executed_volume

    @given(st.lists(order_strategy, min_size=1, max_size=20), st.randoms())
    @settings(max_examples=100, deadline=None)
    def test_order_permutation_does_not_change_result(self, orders, rnd):
        shuffled = list(orders)
        rnd.shuffle(shuffled)
        a = clear_auction(orders, 25.0, 1.0)
        b = clear_auction(shuffled, 25.0, 1.0)
        assert a == b

    def test_bad_tick_and_prev_rejected(self):
        with pytest.raises(DomainError):
            clear_auction([], 9.0, 0.0)
        with pytest.raises(DomainError):
            clear_auction([], 0.0, 1.0)


class TestStep:
    def model(self):
        return PotentialModel.rolling_min(20, mass=1.0)

    def test_crossing_flow_moves_rate(self):
        state = MarketState("X", 950.0)
        flow = [Order("buy", 1000.0, 120), Order("sell", 1000.0, 120)]
        new_state, record = step(state, flow, self.model(), r_force=1.0)
        assert new_state.price == 1000.0
        assert record.delta_p == 50.0
        assert record.work == 50.0
        assert record.potential_delta == 50.0

    def test_empty_flow_holds_price(self):
        state = MarketState("X", 950.0)
        new_state, record = step(state, [], self.model(), r_force=1.0)
        assert new_state.price == 950.0
        assert record.work == 0.0
        assert record.executed_volume == 0

    def test_cumulative_work_telescopes(self):
        rng = random.Random(337)
        state = MarketState("X", 100.0)
        model = self.model()
        r_force = 2.0
        total = 0.0
        initial = state.price
        for _ in range(50):
            price = float(rng.randint(90, 110))
            flow = [Order("buy", price, 10), Order("sell", price, 10)]
            state, record = step(state, flow, model, r_force)
            total += record.work
        assert total == pytest.approx(r_force * (state.price - initial), rel=1e-12, abs=1e-9)


class TestScenario:
    def test_parse_groups_by_day(self):
        text = "day,side,limit_price,quantity\n1,buy,10,5\n1,sell,8,5\n2,buy,,3\n"
        flow = parse_scenario_csv(text)
        assert [day for day, _ in flow] == [1, 2]
        assert flow[0][1][0] == Order("buy", 10.0, 5)
        assert flow[1][1][0].is_market

    def test_parse_rejects_decreasing_days(self):
        text = "day,side,limit_price,quantity\n2,buy,10,5\n1,sell,8,5\n"
        with pytest.raises(FormatError, match="nondecreasing"):
            parse_scenario_csv(text)

    def test_parse_reports_line_and_column(self):
        text = "day,side,limit_price,quantity\n1,buy,ten,5\n"
        with pytest.raises(FormatError, match="line 2, column limit_price"):
            parse_scenario_csv(text)

    def test_empty_scenario_gives_empty_trace(self):
        trace = replay([], RunConfig())
        assert len(trace) == 0
        assert trace.cumulative_work == 0.0

    def test_datum_day_sets_rate_without_work(self):
        flow = [(1, [Order("buy", 950.0, 10), Order("sell", 950.0, 10)])]
        trace = replay(flow, RunConfig())
        assert trace.prices == [950.0]
        assert trace.records[0].work == 0.0

    def test_initial_price_produces_first_day_work(self):
        cfg = RunConfig(initial_price=900.0)
        flow = [(1, [Order("buy", 950.0, 10), Order("sell", 950.0, 10)])]
        trace = replay(flow, cfg)
        assert trace.records[0].delta_p == 50.0
        assert trace.records[0].work == 50.0

    def test_forward_then_reverse_flow_nets_zero_work(self):
        rng = random.Random(347)
        days = []
        prices = [float(rng.randint(90, 110)) for _ in range(10)]
        for i, p in enumerate(prices + prices[-2::-1], start=1):
            days.append((i, [Order("buy", p, 5), Order("sell", p, 5)]))
        trace = replay(days, RunConfig())
        assert trace.prices[-1] == trace.prices[0]
        assert trace.cumulative_work == pytest.approx(0.0, abs=1e-9)

    def test_cum_work_is_exact_running_sum(self):
        rng = random.Random(349)
        days = []
        for i in range(1, 30):
            p = float(rng.randint(95, 105))
            days.append((i, [Order("buy", p, 5), Order("sell", p, 5)]))
        trace = replay(days, RunConfig(r_force=1.5))
        running = 0.0
        for record in trace.records:
            running += record.work
            assert record.cum_work == running

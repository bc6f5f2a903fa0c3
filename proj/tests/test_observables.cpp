#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fracta/observables.hpp"

using namespace fracta;

namespace {

EventSeries<TradeEvent> toy_trades() {
  return EventSeries<TradeEvent>({{7, "a", 1.0, 10.0},
                                  {25, "b", 2.0, 20.0},
                                  {43, "a", 3.0, 30.0}});
}

EventSeries<FloorQuote> toy_floor() {
  return EventSeries<FloorQuote>({{5, 0.5, 5.0}, {30, 1.0, 10.0}});
}

}  // namespace

TEST_CASE("capitalization tracks last traded price per token") {
  const auto ev = capitalization_events(toy_trades());
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == CapitalizationEvent{7, 1.0, 10.0});
  CHECK(ev[1] == CapitalizationEvent{25, 3.0, 30.0});
  // token a re-trades: its old contribution is replaced, not added
  CHECK(ev[2] == CapitalizationEvent{43, 5.0, 50.0});

  const auto sol = sol_values(ev);
  REQUIRE(sol.size() == 3);
  CHECK(sol[1].value == 3.0);
  CHECK(usd_values(ev)[2].value == 50.0);
  CHECK(sol_values(toy_floor())[0].value == 0.5);
  CHECK(usd_values(toy_floor())[1].value == 10.0);
}

TEST_CASE("sample and hold picks the latest event at or before each tick") {
  EventSeries<TimedValue> ev({{0, 1.0}, {10, 2.0}, {25, 3.0}});
  const auto s = sample_hold(ev, 0, 10, 4, Unit::sol);
  REQUIRE(s.size() == 4);
  CHECK(s.values == std::vector<double>{1.0, 2.0, 2.0, 3.0});
  CHECK(s.t0 == 0);
  CHECK(s.dt == 10);
  CHECK(s.unit == Unit::sol);
  CHECK(s.timestamp(3) == 30);

  // grid may extend past the last event: the value just holds
  const auto longer = sample_hold(ev, 0, 10, 6, Unit::sol);
  CHECK(longer.values[5] == 3.0);

  CHECK_THROWS_AS(sample_hold(ev, -1, 10, 4, Unit::sol), std::invalid_argument);  // first > t0
  CHECK_THROWS_AS(sample_hold(ev, 0, 0, 4, Unit::sol), std::invalid_argument);
  CHECK_THROWS_AS(sample_hold(ev, 0, 10, 0, Unit::sol), std::invalid_argument);
  CHECK_THROWS_AS(sample_hold(EventSeries<TimedValue>{}, 0, 10, 1, Unit::sol),
                  std::invalid_argument);
}

TEST_CASE("log returns are anchored one tick late and flat bins give exact zeros") {
  SampledSeries s;
  s.t0 = 100;
  s.dt = 10;
  s.unit = Unit::sol;
  const double held = 5.5;  // same double twice, as sample-and-hold produces
  s.values = {1.0, held, held, std::exp(1.0)};
  const auto r = log_returns(s);
  REQUIRE(r.size() == 3);
  CHECK(r.t0 == 110);
  CHECK(r.values[0] == doctest::Approx(std::log(5.5)).epsilon(1e-15));
  CHECK(r.values[1] == 0.0);  // exactly, by construction
  CHECK(r.unit == Unit::dimensionless);

  SampledSeries bad = s;
  bad.values = {1.0, 0.0};
  CHECK_THROWS_AS(log_returns(bad), std::invalid_argument);
  bad.values = {1.0};
  CHECK_THROWS_AS(log_returns(bad), std::invalid_argument);
}

TEST_CASE("transaction counts bin half-open and conserve totals on covering grids") {
  EventSeries<TradeEvent> tr({{0, "x", 1.0, 1.0},
                              {5, "x", 1.0, 1.0},
                              {9, "x", 1.0, 1.0},
                              {10, "x", 1.0, 1.0},
                              {19, "x", 1.0, 1.0},
                              {20, "x", 1.0, 1.0}});
  const auto n2 = transaction_counts(tr, 0, 10, 2);
  CHECK(n2.values == std::vector<double>{3.0, 2.0});  // t=20 falls off the grid

  const auto n3 = transaction_counts(tr, 0, 10, 3);
  CHECK(n3.values == std::vector<double>{3.0, 2.0, 1.0});
  double total = 0.0;
  for (double v : n3.values) total += v;
  CHECK(total == static_cast<double>(tr.size()));  // exact: small integer sums
  CHECK(n3.unit == Unit::count);
}

TEST_CASE("volume series sum traded value per bin") {
  EventSeries<TradeEvent> tr({{0, "x", 1.0, 10.0},
                              {5, "y", 2.0, 20.0},
                              {12, "x", 4.0, 40.0}});
  const auto [v_sol, v_usd] = volume_value_series(tr, 0, 10, 2);
  CHECK(v_sol.values == std::vector<double>{3.0, 4.0});
  CHECK(v_usd.values == std::vector<double>{30.0, 40.0});
  CHECK(v_sol.unit == Unit::sol);
  CHECK(v_usd.unit == Unit::usd);
}

TEST_CASE("inter-transaction times carry the later timestamp and sum to the span") {
  EventSeries<TradeEvent> tr({{100, "a", 1.0, 1.0},
                              {100, "b", 1.0, 1.0},
                              {150, "a", 1.0, 1.0},
                              {163, "c", 1.0, 1.0}});
  const auto dt = inter_transaction_times(tr);
  REQUIRE(dt.size() == 3);
  CHECK(dt[0] == TimedValue{100, 0.0});  // simultaneous trades
  CHECK(dt[1] == TimedValue{150, 50.0});
  CHECK(dt[2] == TimedValue{163, 13.0});
  double sum = 0.0;
  for (const auto& e : dt) sum += e.value;
  CHECK(sum == static_cast<double>(tr.span_seconds()));  // exact integer arithmetic

  CHECK_THROWS_AS(inter_transaction_times(EventSeries<TradeEvent>({{1, "a", 1.0, 1.0}})),
                  std::invalid_argument);
}

TEST_CASE("zero fraction counts exact zeros only") {
  CHECK(zero_fraction(std::vector<double>{0.0, 1.0, 0.0, 2.0}) == 0.5);
  CHECK(zero_fraction(std::vector<double>{-0.0}) == 1.0);
  CHECK(zero_fraction(std::vector<double>{1e-300}) == 0.0);
  CHECK_THROWS_AS(zero_fraction(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("observable set shares one grid with a rounded-up origin") {
  const auto obs = build_observables(toy_trades(), toy_floor(), 10);
  CHECK(obs.t0 == 10);  // first covered instant 7, rounded up to the grid
  CHECK(obs.dt == 10);
  CHECK(obs.grid_len == 4);  // ticks at 10, 20, 30, 40

  CHECK(obs.cap_sol.values == std::vector<double>{1.0, 1.0, 3.0, 3.0});
  CHECK(obs.cap_usd.values == std::vector<double>{10.0, 10.0, 30.0, 30.0});
  CHECK(obs.floor_sol.values == std::vector<double>{0.5, 0.5, 1.0, 1.0});

  REQUIRE(obs.c_sol.size() == 3);
  CHECK(obs.c_sol.t0 == 20);
  CHECK(obs.c_sol.values[0] == 0.0);
  CHECK(obs.c_sol.values[1] == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  CHECK(obs.c_sol.values[2] == 0.0);
  CHECK(obs.r_sol.values[1] == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  CHECK(obs.n_trades.values == std::vector<double>{0.0, 1.0, 0.0, 1.0});
  CHECK(obs.v_sol.values == std::vector<double>{0.0, 2.0, 0.0, 3.0});
  CHECK(obs.v_usd.values == std::vector<double>{0.0, 20.0, 0.0, 30.0});

  REQUIRE(obs.delta_t.size() == 2);
  CHECK(obs.delta_t[0].value == 18.0);
  CHECK(obs.delta_t[1].value == 18.0);
}

TEST_CASE("observables reject inputs that cannot cover two grid points") {
  EventSeries<TradeEvent> one({{5, "a", 1.0, 1.0}});
  EventSeries<FloorQuote> q({{5, 1.0, 1.0}});
  CHECK_THROWS_AS(build_observables(one, q, 100), std::invalid_argument);
  CHECK_THROWS_AS(build_observables(EventSeries<TradeEvent>{}, q, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_observables(one, EventSeries<FloorQuote>{}, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_observables(one, q, 0), std::invalid_argument);
}

TEST_CASE("collection summary reports the toy numbers") {
  const auto obs = build_observables(toy_trades(), toy_floor(), 10);
  const CollectionMeta meta{"toyset", parse_iso_date("2021-05-01"), 2};
  const auto s = collection_summary(obs, meta);
  CHECK(s.collection == "toyset");
  CHECK(s.start_date == "2021-05-01");
  CHECK(s.token_count == 2);
  CHECK(s.grid_len == 4);
  CHECK(s.trade_count == 3);
  REQUIRE(s.mean_delta_t.has_value());
  CHECK(*s.mean_delta_t == doctest::Approx(18.0).epsilon(1e-15));
  REQUIRE(s.mean_n.has_value());
  CHECK(*s.mean_n == doctest::Approx(0.5).epsilon(1e-15));
  REQUIRE(s.mean_v_sol.has_value());
  CHECK(*s.mean_v_sol == doctest::Approx(1.25).epsilon(1e-15));
  REQUIRE(s.zero_frac_c.has_value());
  CHECK(*s.zero_frac_c == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  REQUIRE(s.zero_frac_r.has_value());
  CHECK(*s.zero_frac_r == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("iso dates round-trip") {
  CHECK(parse_iso_date("1970-01-01") == 0);
  CHECK(parse_iso_date("2021-05-01") == 1619827200);
  CHECK(format_iso_date(0) == "1970-01-01");
  CHECK(format_iso_date(1619827200) == "2021-05-01");
  // mid-day seconds round down to the date
  CHECK(format_iso_date(1619827200 + 7000) == "2021-05-01");
  for (const char* s : {"2000-02-29", "1999-12-31", "2038-01-19"})
    CHECK(format_iso_date(parse_iso_date(s)) == s);
  CHECK_THROWS_AS(parse_iso_date("not-a-date"), std::invalid_argument);
  CHECK_THROWS_AS(parse_iso_date("2021-13-01"), std::invalid_argument);
  CHECK_THROWS_AS(parse_iso_date("2021-02-30"), std::invalid_argument);
}

TEST_CASE("series csv files round-trip bit-exactly") {
  SampledSeries s;
  s.t0 = 3600;
  s.dt = 3600;
  s.values = {0.1, 0.0, -2.5e-17, 337.7940251578608};
  std::ostringstream out;
  write_series_csv(out, s);
  std::istringstream in(out.str());
  const auto f = read_series_csv(in);
  CHECK(f.timed);
  REQUIRE(f.values.size() == 4);
  CHECK(f.values == s.values);
  CHECK(f.keys == std::vector<std::int64_t>{3600, 7200, 10800, 14400});

  std::ostringstream iout;
  write_indexed_csv(iout, std::vector<double>{1.5, 2.5});
  std::istringstream iin(iout.str());
  const auto g = read_series_csv(iin);
  CHECK_FALSE(g.timed);
  CHECK(g.keys == std::vector<std::int64_t>{0, 1});
  CHECK(g.values == std::vector<double>{1.5, 2.5});

  std::istringstream bad("wrong,header\n1,2\n");
  CHECK_THROWS_AS(read_series_csv(bad), ParseError);
}

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracta/market_data.hpp"

namespace fracta {

enum class Unit { sol, usd, count, seconds, dimensionless };

std::string unit_name(Unit u);

struct TimedValue {
  std::int64_t timestamp = 0;
  double value = 0.0;
  bool operator==(const TimedValue&) const = default;
};

// Running market capitalization in both quote units after each trade.
struct CapitalizationEvent {
  std::int64_t timestamp = 0;
  double c_sol = 0.0;
  double c_usd = 0.0;
  bool operator==(const CapitalizationEvent&) const = default;
};

// Uniformly sampled series: values[i] belongs to time t0 + i*dt.
struct SampledSeries {
  std::int64_t t0 = 0;
  std::int64_t dt = 3600;
  Unit unit = Unit::dimensionless;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::int64_t timestamp(std::size_t i) const {
    return t0 + static_cast<std::int64_t>(i) * dt;
  }
  bool operator==(const SampledSeries&) const = default;
};

// Capitalization C(t) = sum over tokens of the last traded price, in SOL and
// USD; tokens contribute from their first trade on.  One event per trade.
EventSeries<CapitalizationEvent> capitalization_events(const EventSeries<TradeEvent>& trades);

EventSeries<TimedValue> sol_values(const EventSeries<CapitalizationEvent>& ev);
EventSeries<TimedValue> usd_values(const EventSeries<CapitalizationEvent>& ev);
EventSeries<TimedValue> sol_values(const EventSeries<FloorQuote>& quotes);
EventSeries<TimedValue> usd_values(const EventSeries<FloorQuote>& quotes);

// Sample-and-hold: values[i] = value of the latest event at or before
// t0 + i*dt.  Pre: n >= 1 and the first event does not postdate t0.
SampledSeries sample_hold(const EventSeries<TimedValue>& events, std::int64_t t0,
                          std::int64_t dt, std::size_t n, Unit unit);

// log v[i+1] - log v[i]; requires strictly positive inputs and length >= 2.
// The result is anchored at t0 + dt (a return belongs to the later sample).
SampledSeries log_returns(const SampledSeries& s);

// Number of trades per bin [t0 + i*dt, t0 + (i+1)*dt).  Trades outside the
// covered span are not counted; pick a covering grid when conservation with
// the full trade count matters.
SampledSeries transaction_counts(const EventSeries<TradeEvent>& trades, std::int64_t t0,
                                 std::int64_t dt, std::size_t n);

// Per-bin traded value (sum of trade prices; every trade moves one token) in
// SOL and USD, same binning as transaction_counts.
std::pair<SampledSeries, SampledSeries> volume_value_series(const EventSeries<TradeEvent>& trades,
                                                            std::int64_t t0, std::int64_t dt,
                                                            std::size_t n);

// Waiting times between consecutive trades, in event order.  Entry i carries
// the timestamp of the later trade and the gap in seconds; simultaneous
// trades contribute zeros.  Pre: at least two trades.
EventSeries<TimedValue> inter_transaction_times(const EventSeries<TradeEvent>& trades);

// Fraction of entries exactly equal to 0.0.  Sample-and-hold makes empty-bin
// log returns exact zeros, so no tolerance is involved.
double zero_fraction(std::span<const double> values);

struct SummaryStats {
  std::string collection;
  std::string start_date;  // ISO date
  std::int64_t token_count = 0;
  std::size_t grid_len = 0;     // sampled capitalization length T
  std::size_t trade_count = 0;  // after trimming
  std::optional<double> mean_delta_t;  // seconds
  std::optional<double> mean_n;
  std::optional<double> mean_v_sol;
  std::optional<double> zero_frac_c;
  std::optional<double> zero_frac_r;
  bool operator==(const SummaryStats&) const = default;
};

// Everything the downstream statistics consume, on one shared grid whose
// origin is the first covered instant rounded up to a whole multiple of dt.
struct ObservableSet {
  std::int64_t t0 = 0;
  std::int64_t dt = 3600;
  std::size_t grid_len = 0;
  SampledSeries cap_sol, cap_usd, floor_sol, floor_usd;  // sampled levels
  SampledSeries c_sol, c_usd, r_sol, r_usd;              // log returns
  SampledSeries n_trades, v_sol, v_usd;                  // per-bin activity
  EventSeries<TimedValue> delta_t;                       // event-indexed gaps
};

// Pre: trades and quotes are trimmed and non-empty, and the grid has at least
// two points; throws std::invalid_argument otherwise.
ObservableSet build_observables(const EventSeries<TradeEvent>& trades,
                                const EventSeries<FloorQuote>& quotes, std::int64_t dt = 3600);

SummaryStats collection_summary(const ObservableSet& obs, const CollectionMeta& meta);

// ISO "YYYY-MM-DD" <-> unix seconds at midnight UTC
std::int64_t parse_iso_date(const std::string& s);
std::string format_iso_date(std::int64_t unix_seconds);

// Series file schema: header "timestamp,value" (time-sampled) or
// "index,value" (event-indexed), %.17g values, so files round-trip
// bit-exactly.
void write_series_csv(std::ostream& out, const SampledSeries& s);
void write_indexed_csv(std::ostream& out, std::span<const double> values);

struct SeriesFile {
  bool timed = false;  // timestamp vs index rows
  std::vector<std::int64_t> keys;
  std::vector<double> values;
};
SeriesFile read_series_csv(std::istream& in);

}  // namespace fracta

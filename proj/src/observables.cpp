#include "fracta/observables.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "fracta/stats.hpp"

namespace fracta {

std::string unit_name(Unit u) {
  switch (u) {
    case Unit::sol: return "sol";
    case Unit::usd: return "usd";
    case Unit::count: return "count";
    case Unit::seconds: return "seconds";
    case Unit::dimensionless: return "dimensionless";
  }
  return "unknown";
}

EventSeries<CapitalizationEvent> capitalization_events(const EventSeries<TradeEvent>& trades) {
  std::unordered_map<std::string, std::pair<double, double>> last_price;
  std::vector<CapitalizationEvent> out;
  out.reserve(trades.size());
  double c_sol = 0.0, c_usd = 0.0;
  for (const auto& t : trades) {
    auto& p = last_price[t.token_id];  // value-initialized on first trade
    c_sol += t.price_sol - p.first;
    c_usd += t.price_usd - p.second;
    p = {t.price_sol, t.price_usd};
    out.push_back({t.timestamp, c_sol, c_usd});
  }
  return EventSeries<CapitalizationEvent>(std::move(out));
}

EventSeries<TimedValue> sol_values(const EventSeries<CapitalizationEvent>& ev) {
  std::vector<TimedValue> v;
  v.reserve(ev.size());
  for (const auto& e : ev) v.push_back({e.timestamp, e.c_sol});
  return EventSeries<TimedValue>(std::move(v));
}

EventSeries<TimedValue> usd_values(const EventSeries<CapitalizationEvent>& ev) {
  std::vector<TimedValue> v;
  v.reserve(ev.size());
  for (const auto& e : ev) v.push_back({e.timestamp, e.c_usd});
  return EventSeries<TimedValue>(std::move(v));
}

EventSeries<TimedValue> sol_values(const EventSeries<FloorQuote>& quotes) {
  std::vector<TimedValue> v;
  v.reserve(quotes.size());
  for (const auto& q : quotes) v.push_back({q.timestamp, q.floor_sol});
  return EventSeries<TimedValue>(std::move(v));
}

EventSeries<TimedValue> usd_values(const EventSeries<FloorQuote>& quotes) {
  std::vector<TimedValue> v;
  v.reserve(quotes.size());
  for (const auto& q : quotes) v.push_back({q.timestamp, q.floor_usd});
  return EventSeries<TimedValue>(std::move(v));
}

SampledSeries sample_hold(const EventSeries<TimedValue>& events, std::int64_t t0, std::int64_t dt,
                          std::size_t n, Unit unit) {
  if (events.empty()) throw std::invalid_argument("sample_hold: no events");
  if (dt <= 0) throw std::invalid_argument("sample_hold: dt must be positive");
  if (n == 0) throw std::invalid_argument("sample_hold: empty grid");
  if (events.front().timestamp > t0)
    throw std::invalid_argument("sample_hold: first event postdates grid origin");

  SampledSeries s;
  s.t0 = t0;
  s.dt = dt;
  s.unit = unit;
  s.values.resize(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t t = t0 + static_cast<std::int64_t>(i) * dt;
    while (j + 1 < events.size() && events[j + 1].timestamp <= t) ++j;
    s.values[i] = events[j].value;
  }
  return s;
}

SampledSeries log_returns(const SampledSeries& s) {
  if (s.size() < 2) throw std::invalid_argument("log_returns: need at least two samples");
  SampledSeries r;
  r.t0 = s.t0 + s.dt;
  r.dt = s.dt;
  r.unit = Unit::dimensionless;
  r.values.resize(s.size() - 1);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (!(s.values[i] > 0.0) || !(s.values[i + 1] > 0.0))
      throw std::invalid_argument("log_returns: inputs must be positive");
    // identical held doubles give an exact 0.0 here
    r.values[i] = std::log(s.values[i + 1]) - std::log(s.values[i]);
  }
  return r;
}

SampledSeries transaction_counts(const EventSeries<TradeEvent>& trades, std::int64_t t0,
                                 std::int64_t dt, std::size_t n) {
  if (dt <= 0) throw std::invalid_argument("transaction_counts: dt must be positive");
  if (n == 0) throw std::invalid_argument("transaction_counts: empty grid");
  SampledSeries s;
  s.t0 = t0;
  s.dt = dt;
  s.unit = Unit::count;
  s.values.assign(n, 0.0);
  for (const auto& t : trades) {
    if (t.timestamp < t0) continue;
    const std::int64_t bin = (t.timestamp - t0) / dt;
    if (bin >= 0 && static_cast<std::size_t>(bin) < n) s.values[static_cast<std::size_t>(bin)] += 1.0;
  }
  return s;
}

std::pair<SampledSeries, SampledSeries> volume_value_series(const EventSeries<TradeEvent>& trades,
                                                            std::int64_t t0, std::int64_t dt,
                                                            std::size_t n) {
  if (dt <= 0) throw std::invalid_argument("volume_value_series: dt must be positive");
  if (n == 0) throw std::invalid_argument("volume_value_series: empty grid");
  SampledSeries vs, vu;
  vs.t0 = vu.t0 = t0;
  vs.dt = vu.dt = dt;
  vs.unit = Unit::sol;
  vu.unit = Unit::usd;
  vs.values.assign(n, 0.0);
  vu.values.assign(n, 0.0);
  for (const auto& t : trades) {
    if (t.timestamp < t0) continue;
    const std::int64_t bin = (t.timestamp - t0) / dt;
    if (bin >= 0 && static_cast<std::size_t>(bin) < n) {
      vs.values[static_cast<std::size_t>(bin)] += t.price_sol;
      vu.values[static_cast<std::size_t>(bin)] += t.price_usd;
    }
  }
  return {std::move(vs), std::move(vu)};
}

EventSeries<TimedValue> inter_transaction_times(const EventSeries<TradeEvent>& trades) {
  if (trades.size() < 2)
    throw std::invalid_argument("inter_transaction_times: need at least two trades");
  std::vector<TimedValue> v;
  v.reserve(trades.size() - 1);
  for (std::size_t i = 1; i < trades.size(); ++i)
    v.push_back({trades[i].timestamp,
                 static_cast<double>(trades[i].timestamp - trades[i - 1].timestamp)});
  return EventSeries<TimedValue>(std::move(v));
}

double zero_fraction(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("zero_fraction: empty input");
  std::size_t z = 0;
  for (double v : values)
    if (v == 0.0) ++z;
  return static_cast<double>(z) / static_cast<double>(values.size());
}

ObservableSet build_observables(const EventSeries<TradeEvent>& trades,
                                const EventSeries<FloorQuote>& quotes, std::int64_t dt) {
  if (trades.empty() || quotes.empty())
    throw std::invalid_argument("build_observables: empty inputs");
  if (dt <= 0) throw std::invalid_argument("build_observables: dt must be positive");

  const std::int64_t first =
      std::max(trades.front().timestamp, quotes.front().timestamp);
  const std::int64_t last = std::max(trades.back().timestamp, quotes.back().timestamp);
  // grid origin: first covered instant rounded up to a whole dt multiple
  const std::int64_t t0 = ((first + dt - 1) / dt) * dt;
  if (last < t0 + dt)
    throw std::invalid_argument("build_observables: grid shorter than two samples");
  const std::size_t n = static_cast<std::size_t>((last - t0) / dt) + 1;

  ObservableSet o;
  o.t0 = t0;
  o.dt = dt;
  o.grid_len = n;

  const auto cap = capitalization_events(trades);
  o.cap_sol = sample_hold(sol_values(cap), t0, dt, n, Unit::sol);
  o.cap_usd = sample_hold(usd_values(cap), t0, dt, n, Unit::usd);
  o.floor_sol = sample_hold(sol_values(quotes), t0, dt, n, Unit::sol);
  o.floor_usd = sample_hold(usd_values(quotes), t0, dt, n, Unit::usd);
  o.c_sol = log_returns(o.cap_sol);
  o.c_usd = log_returns(o.cap_usd);
  o.r_sol = log_returns(o.floor_sol);
  o.r_usd = log_returns(o.floor_usd);
  o.n_trades = transaction_counts(trades, t0, dt, n);
  auto [vs, vu] = volume_value_series(trades, t0, dt, n);
  o.v_sol = std::move(vs);
  o.v_usd = std::move(vu);
  if (trades.size() >= 2) o.delta_t = inter_transaction_times(trades);
  return o;
}

SummaryStats collection_summary(const ObservableSet& obs, const CollectionMeta& meta) {
  SummaryStats s;
  s.collection = meta.name;
  s.start_date = meta.start_date > 0 ? format_iso_date(meta.start_date) : "";
  s.token_count = meta.token_count;
  s.grid_len = obs.grid_len;

  std::size_t trade_total = 0;
  for (double v : obs.n_trades.values) trade_total += static_cast<std::size_t>(v);
  s.trade_count = obs.delta_t.size() > 0 ? obs.delta_t.size() + 1 : trade_total;

  if (!obs.delta_t.empty()) {
    double acc = 0.0;
    for (const auto& e : obs.delta_t) acc += e.value;
    s.mean_delta_t = acc / static_cast<double>(obs.delta_t.size());
  }
  if (!obs.n_trades.values.empty()) {
    double acc = 0.0;
    for (double v : obs.n_trades.values) acc += v;
    s.mean_n = acc / static_cast<double>(obs.n_trades.values.size());
  }
  if (!obs.v_sol.values.empty()) {
    double acc = 0.0;
    for (double v : obs.v_sol.values) acc += v;
    s.mean_v_sol = acc / static_cast<double>(obs.v_sol.values.size());
  }
  if (!obs.c_sol.values.empty()) s.zero_frac_c = zero_fraction(obs.c_sol.values);
  if (!obs.r_sol.values.empty()) s.zero_frac_r = zero_fraction(obs.r_sol.values);
  return s;
}

std::int64_t parse_iso_date(const std::string& s) {
  int y = 0, m = 0, d = 0;
  char sep1 = 0, sep2 = 0;
  if (std::sscanf(s.c_str(), "%d%c%d%c%d", &y, &sep1, &m, &sep2, &d) != 5 || sep1 != '-' ||
      sep2 != '-')
    throw std::invalid_argument("parse_iso_date: expected YYYY-MM-DD, got '" + s + "'");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw std::invalid_argument("parse_iso_date: invalid date '" + s + "'");
  return std::chrono::sys_days(ymd).time_since_epoch().count() * std::int64_t{86400};
}

void write_series_csv(std::ostream& out, const SampledSeries& s) {
  out << "timestamp,value\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out << s.timestamp(i) << ',' << format_double(s.values[i]) << '\n';
}

void write_indexed_csv(std::ostream& out, std::span<const double> values) {
  out << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out << i << ',' << format_double(values[i]) << '\n';
}

SeriesFile read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "series csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  SeriesFile f;
  if (line == "timestamp,value") {
    f.timed = true;
  } else if (line == "index,value") {
    f.timed = false;
  } else {
    throw ParseError(1, "series csv: expected 'timestamp,value' or 'index,value' header");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(lineno, "expected 2 fields");
    std::int64_t key = 0;
    double value = 0.0;
    const auto [kp, kec] = std::from_chars(line.data(), line.data() + comma, key);
    const auto [vp, vec] =
        std::from_chars(line.data() + comma + 1, line.data() + line.size(), value);
    if (kec != std::errc{} || kp != line.data() + comma || vec != std::errc{} ||
        vp != line.data() + line.size())
      throw ParseError(lineno, "bad series row");
    f.keys.push_back(key);
    f.values.push_back(value);
  }
  return f;
}

std::string format_iso_date(std::int64_t unix_seconds) {
  const auto days = std::chrono::sys_days(
      std::chrono::days(unix_seconds >= 0 ? unix_seconds / 86400
                                          : (unix_seconds - 86399) / 86400));
  const std::chrono::year_month_day ymd(days);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

}  // namespace fracta

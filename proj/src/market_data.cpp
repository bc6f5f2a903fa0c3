#include "fracta/market_data.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "fracta/stats.hpp"

namespace fracta {

namespace {

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::int64_t parse_i64(const std::string& s, std::size_t line) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(line, "bad integer '" + s + "'");
  return v;
}

double parse_f64(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(line, "bad number '" + s + "'");
  return v;
}

double parse_price(const std::string& s, std::size_t line) {
  const double v = parse_f64(s, line);
  if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(line, "price must be positive, got '" + s + "'");
  return v;
}

// Returns false on a fully empty stream; throws on a wrong header.
bool check_header(std::istream& in, const char* expected) {
  std::string line;
  if (!std::getline(in, line)) return false;
  strip_cr(line);
  if (line != expected) throw ParseError(1, std::string("expected header '") + expected + "'");
  return true;
}

}  // namespace

EventSeries<TradeEvent> parse_trades(std::istream& in, const CollectionMeta& meta) {
  std::vector<TradeEvent> rows;
  if (!check_header(in, "timestamp,token_id,price_sol,price_usd"))
    return EventSeries<TradeEvent>{};

  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 4) throw ParseError(lineno, "expected 4 fields");
    TradeEvent e;
    e.timestamp = parse_i64(f[0], lineno);
    if (meta.start_date > 0 && e.timestamp < meta.start_date)
      throw ParseError(lineno, "timestamp precedes collection start");
    if (f[1].empty()) throw ParseError(lineno, "empty token_id");
    e.token_id = f[1];
    e.price_sol = parse_price(f[2], lineno);
    e.price_usd = parse_price(f[3], lineno);
    rows.push_back(std::move(e));
  }
  return EventSeries<TradeEvent>(std::move(rows));
}

EventSeries<FloorQuote> parse_floor_quotes(std::istream& in) {
  std::vector<FloorQuote> rows;
  if (!check_header(in, "timestamp,floor_sol,floor_usd")) return EventSeries<FloorQuote>{};

  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 3) throw ParseError(lineno, "expected 3 fields");
    FloorQuote q;
    q.timestamp = parse_i64(f[0], lineno);
    q.floor_sol = parse_price(f[1], lineno);
    q.floor_usd = parse_price(f[2], lineno);
    rows.push_back(q);
  }
  return EventSeries<FloorQuote>(std::move(rows));
}

void write_trades_csv(std::ostream& out, const EventSeries<TradeEvent>& trades) {
  out << "timestamp,token_id,price_sol,price_usd\n";
  for (const auto& e : trades)
    out << e.timestamp << ',' << e.token_id << ',' << format_double(e.price_sol) << ','
        << format_double(e.price_usd) << '\n';
}

void write_floor_csv(std::ostream& out, const EventSeries<FloorQuote>& quotes) {
  out << "timestamp,floor_sol,floor_usd\n";
  for (const auto& q : quotes)
    out << q.timestamp << ',' << format_double(q.floor_sol) << ',' << format_double(q.floor_usd)
        << '\n';
}

}  // namespace fracta

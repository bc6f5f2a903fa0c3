#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracta {

struct TradeEvent {
  std::int64_t timestamp = 0;  // unix seconds
  std::string token_id;
  double price_sol = 0.0;
  double price_usd = 0.0;
  bool operator==(const TradeEvent&) const = default;
};

struct FloorQuote {
  std::int64_t timestamp = 0;
  double floor_sol = 0.0;
  double floor_usd = 0.0;
  bool operator==(const FloorQuote&) const = default;
};

struct CollectionMeta {
  std::string name;
  std::int64_t start_date = 0;  // unix seconds; 0 = unknown
  std::int64_t token_count = 0;
  bool operator==(const CollectionMeta&) const = default;
};

// Events kept in nondecreasing timestamp order; ties preserve input order so
// construction is deterministic for any input permutation of distinct rows.
template <class Event>
class EventSeries {
 public:
  EventSeries() = default;
  explicit EventSeries(std::vector<Event> events) : events_(std::move(events)) {
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  }

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  const Event& front() const { return events_.front(); }
  const Event& back() const { return events_.back(); }
  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }
  const std::vector<Event>& events() const { return events_; }

  // span of the event times in seconds; 0 for fewer than two events
  std::int64_t span_seconds() const {
    return events_.size() < 2 ? 0 : events_.back().timestamp - events_.front().timestamp;
  }

  bool operator==(const EventSeries&) const = default;

 private:
  std::vector<Event> events_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// CSV schema: timestamp,token_id,price_sol,price_usd with a mandatory header.
// Rows may arrive in any order; the result is time-sorted.  Prices must be
// positive and finite, timestamps must not precede meta.start_date when that
// is set.  An empty stream (or header-only file) parses to an empty series.
EventSeries<TradeEvent> parse_trades(std::istream& in, const CollectionMeta& meta);

// CSV schema: timestamp,floor_sol,floor_usd.  Same conventions as trades.
EventSeries<FloorQuote> parse_floor_quotes(std::istream& in);

// Writers emit the same schema with %.17g floats, so parse(write(parse(x)))
// reproduces every field bit-exactly.
void write_trades_csv(std::ostream& out, const EventSeries<TradeEvent>& trades);
void write_floor_csv(std::ostream& out, const EventSeries<FloorQuote>& quotes);

template <class Event>
struct TrimResult {
  EventSeries<Event> events;
  bool all_trimmed = false;  // the window swallowed everything
};

// Drops the launch transient: everything earlier than first_timestamp + window
// goes, events at the boundary stay.  Pre: series non-empty.
template <class Event>
TrimResult<Event> trim_launch_window(const EventSeries<Event>& in,
                                     std::int64_t window_seconds = 7 * 86400) {
  if (in.empty()) throw std::invalid_argument("trim_launch_window: empty series");
  if (window_seconds < 0) throw std::invalid_argument("trim_launch_window: negative window");
  const std::int64_t cutoff = in.front().timestamp + window_seconds;
  std::vector<Event> kept;
  for (const auto& e : in)
    if (e.timestamp >= cutoff) kept.push_back(e);
  TrimResult<Event> r;
  r.all_trimmed = kept.empty();
  r.events = EventSeries<Event>(std::move(kept));
  return r;
}

}  // namespace fracta

#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxtrace/health.hpp"

namespace proxtrace {

/// One audited registry operation.
///
/// `args` carries the operation's inputs as `key=value` pairs separated by
/// ';' so that a log can be replayed. It never contains commas.
struct Event {
  Day day = 0;
  std::string operation;
  std::string actor;
  std::string outcome;
  std::string args;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Append-only audit log.
///
/// CSV layout: header `day,operation,actor_digest,outcome,args`, one row per event.
class EventLog {
 public:
  void append(Event event) { events_.push_back(std::move(event)); }
  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }

  void write_csv(std::ostream& out) const;
  /// Throws Error(parse) with the 1-based line number.
  static EventLog read_csv(std::istream& in);

 private:
  std::vector<Event> events_;
};

using EventArgs = std::map<std::string, std::string, std::less<>>;

/// Splits `k1=v1;k2=v2`. Throws Error(parse) on a field without '='.
EventArgs parse_event_args(std::string_view args);

/// Looks up a required key. Throws Error(parse) when missing.
const std::string& require_arg(const EventArgs& args, std::string_view key);

}  // namespace proxtrace

#include "proxtrace/event_log.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <istream>
#include <ostream>

#include "proxtrace/error.hpp"
#include "text.hpp"

namespace proxtrace {

namespace {
constexpr std::string_view kHeader = "day,operation,actor_digest,outcome,args";
}

void EventLog::write_csv(std::ostream& out) const {
  out << kHeader << '\n';
  for (const auto& e : events_) {
    fmt::print(out, "{},{},{},{},{}\n", e.day, e.operation, e.actor, e.outcome, e.args);
  }
}

EventLog EventLog::read_csv(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    if (line_no == 1 && text == kHeader) continue;
    const auto fields = detail::split(text, ',');
    if (fields.size() != 5) {
      throw Error(Errc::parse, fmt::format("line {}: expected 5 fields", line_no));
    }
    const auto day = detail::parse_number<Day>(fields[0]);
    if (!day) throw Error(Errc::parse, fmt::format("line {}: malformed day", line_no));
    if (fields[1].empty() || fields[3].empty()) {
      throw Error(Errc::parse, fmt::format("line {}: empty operation or outcome", line_no));
    }
    log.append(Event{*day, std::string(fields[1]), std::string(fields[2]), std::string(fields[3]),
                     std::string(fields[4])});
  }
  return log;
}

EventArgs parse_event_args(std::string_view args) {
  EventArgs out;
  if (detail::trim(args).empty()) return out;
  for (auto field : detail::split(args, ';')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::parse, fmt::format("event argument '{}' has no '='", field));
    }
    out.emplace(std::string(field.substr(0, eq)), std::string(field.substr(eq + 1)));
  }
  return out;
}

const std::string& require_arg(const EventArgs& args, std::string_view key) {
  const auto it = args.find(key);
  if (it == args.end()) {
    throw Error(Errc::parse, fmt::format("event is missing argument '{}'", key));
  }
  return it->second;
}

}  // namespace proxtrace

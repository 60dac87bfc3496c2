#include "proxtrace/tracing.hpp"

#include "proxtrace/error.hpp"

namespace proxtrace {

bool CoContactList::contains(const DeviceId& id) const { return members_.contains(id); }

bool CoContactList::add(const DeviceId& id) {
  if (!members_.insert(id).second) return false;
  ids_.push_back(id);
  return true;
}

CoContactList trace_co_contacts(const DeviceId& index_case, const ContactGraph& graph,
                                const SimClock& clock, const TraceOptions& options) {
  const auto it = graph.find(index_case);
  if (it == graph.end()) {
    throw Error(Errc::lookup, "index case " + index_case.hex() + " has no contact list");
  }
  const Day today = clock.current_day();

  CoContactList out;
  auto add = [&](const DeviceId& id) {
    if (id != index_case) out.add(id);
  };

  for (const auto& contact : it->second.on_day(today - kTraceOffsetDays)) {
    if (contact.duration_s < options.min_duration_s) continue;
    if (const auto peer_list = graph.find(contact.peer); peer_list != graph.end()) {
      for (const auto& co : peer_list->second.on_day(today)) add(co.peer);
    }
    add(contact.peer);
  }
  return out;
}

}  // namespace proxtrace

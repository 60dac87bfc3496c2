#pragma once

#include <span>
#include <unordered_set>
#include <vector>

#include "proxtrace/contact.hpp"

namespace proxtrace {

/// Devices to notify after an index case is confirmed. Deduplicated, never
/// contains the index case itself.
class CoContactList {
 public:
  std::span<const DeviceId> ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(const DeviceId& id) const;

  /// Appends unless already present. Returns true if appended.
  bool add(const DeviceId& id);

 private:
  std::vector<DeviceId> ids_;
  std::unordered_set<DeviceId> members_;
};

struct TraceOptions {
  /// Minimum cumulative encounter duration for a two-days-ago contact to be
  /// traced. 0 traces every contact.
  double min_duration_s = 0.0;
};

/// Offset, in days, between the index case's expanded contacts and today.
inline constexpr Day kTraceOffsetDays = 2;

/// Co-contact expansion of an index case.
///
/// For every record c in the index case's list with
/// current_day - c.date_of_contact == 2 (taken in list order), first every
/// peer that c.peer met today is added, then c.peer itself. Contacts from one
/// day ago are not expanded. A contact without a list of its own contributes
/// only itself.
///
/// Throws Error(lookup) if the index case has no contact list in `graph`.
CoContactList trace_co_contacts(const DeviceId& index_case, const ContactGraph& graph,
                                const SimClock& clock, const TraceOptions& options = {});

}  // namespace proxtrace

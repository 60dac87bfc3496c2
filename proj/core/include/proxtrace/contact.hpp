#pragma once

#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "proxtrace/device_id.hpp"
#include "proxtrace/health.hpp"

namespace proxtrace {

inline constexpr double kDefaultBluetoothRange = 10.0;

class SimClock {
 public:
  SimClock() = default;
  explicit SimClock(Day start) : current_day_(start < 0 ? 0 : start) {}

  Day current_day() const noexcept { return current_day_; }
  void tick(Day days = 1) noexcept {
    if (days > 0) current_day_ += days;
  }

 private:
  Day current_day_ = 0;
};

struct ContactRecord {
  DeviceId peer;
  Day date_of_contact = 0;
  double distance_m = 0.0;
  double duration_s = 0.0;

  friend bool operator==(const ContactRecord&, const ContactRecord&) = default;
};

/// Per-owner list of dated encounters, kept sorted by (day, peer) with at most
/// one record per key. A repeated same-day encounter with the same peer merges
/// into the existing record: durations add, the minimum distance is kept.
class ContactList {
 public:
  ContactList() = default;
  explicit ContactList(DeviceId owner) : owner_(owner) {}

  const DeviceId& owner() const noexcept { return owner_; }
  std::span<const ContactRecord> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  /// Throws Error(validation) for a future-dated record, a non-positive
  /// distance, a distance beyond `max_range_m`, negative duration, or a self-contact.
  void record(const ContactRecord& rec, const SimClock& clock,
              double max_range_m = kDefaultBluetoothRange);

  /// Merges `rec` without clock or range checks (deserialization path).
  void restore(const ContactRecord& rec);

  /// Records whose date_of_contact equals `day`.
  std::span<const ContactRecord> on_day(Day day) const noexcept;

  /// Drops every record dated before `first_kept_day`.
  void prune_before(Day first_kept_day);

  friend bool operator==(const ContactList&, const ContactList&) = default;

 private:
  DeviceId owner_;
  std::vector<ContactRecord> records_;
};

/// Value-returning form of ContactList::record.
ContactList record_contact(ContactList list, const ContactRecord& rec, const SimClock& clock);

using ContactGraph = std::unordered_map<DeviceId, ContactList>;

/// Inserts mirror records into both endpoints' lists (creating lists as needed).
void record_encounter(ContactGraph& graph, const DeviceId& a, const DeviceId& b, double distance_m,
                      double duration_s, const SimClock& clock,
                      double max_range_m = kDefaultBluetoothRange);

/// Owners in ascending digest order; the canonical iteration order for output.
std::vector<DeviceId> sorted_owners(const ContactGraph& graph);

/// CSV: header `owner,peer,day,distance_m,duration_s` then one row per record,
/// digests as lowercase hex, owners in ascending order.
void write_contact_csv(std::ostream& out, const ContactGraph& graph);
void write_contact_csv(std::ostream& out, const ContactList& list);

/// Reads the format above. The header row is optional. Rows are inserted
/// verbatim (no clock or range check); duplicate (owner, peer, day) keys merge.
/// Throws Error(parse) with the 1-based line number.
ContactGraph read_contact_csv(std::istream& in);

}  // namespace proxtrace

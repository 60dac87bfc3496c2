#pragma once

// Server-side state machines for the contact-tracing service: one-time-code
// issuance, OTC-verified registration and status updates, the proximity scan
// with area risk assessment, the background status checker, and the
// quarantine cascade that follows a positive report.
//
// The Registry is the single logical owner of all state; every mutation goes
// through one of its member functions, which callers must serialise.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "proxtrace/contact.hpp"
#include "proxtrace/event_log.hpp"
#include "proxtrace/health.hpp"
#include "proxtrace/risk.hpp"
#include "proxtrace/rng.hpp"
#include "proxtrace/tracing.hpp"

namespace proxtrace {

/// Simulated medical-staff role token.
struct StaffCredential {
  std::string token;
};

struct Otc {
  std::string code;
  Day issued_day = 0;
  bool consumed = false;
  /// Audit trail: "register:<digest>" or "update:<digest>" once consumed.
  std::string consumed_by;
};

struct DeviceRecord {
  DeviceId id;
  HealthStatus status;
  Day registered_day = 0;
  /// Health state seen by the most recent status-checker tick.
  Health last_checked = Health::susceptible;
};

enum class NotificationKind : std::uint8_t { status_positive, contact_at_risk, area_risk };

std::string_view to_string(NotificationKind kind) noexcept;

struct Notification {
  DeviceId recipient;
  NotificationKind kind = NotificationKind::status_positive;
  /// Set only for area_risk.
  std::optional<RiskClass> area_class;
  Day day = 0;

  friend bool operator==(const Notification&, const Notification&) = default;
};

struct ProtocolPolicy {
  Day quarantine_days = kDefaultQuarantineDays;
  /// Look-back, in days, for the category B/C tests and the status checker.
  Day category_window_days = 2;
  /// Only two-days-ago contacts with at least this much cumulative duration are traced.
  double min_trace_duration_s = 0.0;
  double bluetooth_range_m = kDefaultBluetoothRange;
  std::uint64_t otc_seed = 0;
  std::string staff_token = "medical-staff";
};

/// A neighbour seen by the scanner.
struct ScanPeer {
  DeviceId id;
  double distance_m = 0.0;
  double duration_s = 0.0;
};

/// What the scanning user learns. There is deliberately no per-neighbour
/// field: only the area's class and how many registered devices contributed.
struct ScanResult {
  /// Empty when no registered neighbour was in range (the score is undefined).
  std::optional<RiskClass> risk_class;
  std::size_t registered_neighbors = 0;
  /// The area_risk notification, if one was delivered (not a same-day duplicate).
  std::optional<Notification> notification;
};

class Registry {
 public:
  /// When `log` is given, an `init` event is written first and every later
  /// operation (successful or not) is appended to it.
  explicit Registry(ProtocolPolicy policy = {}, EventLog* log = nullptr);

  /// Rebuilds a registry by re-executing a log. The first event must be
  /// `init`. Every event's recorded outcome must be reproduced, otherwise
  /// Error(replay_mismatch) is thrown.
  static Registry replay(std::span<const Event> events);

  const ProtocolPolicy& policy() const noexcept { return policy_; }

  /// Throws Error(authorization) for a wrong staff token.
  Otc issue_otc(const StaffCredential& staff, const SimClock& clock);

  /// Registers the device whose raw identifier is `device_raw_id`.
  /// Errors: invalid_otc (unknown code), otc_replay (consumed code),
  /// already_registered (OTC stays fresh), validation (empty id).
  DeviceRecord register_user(std::string_view otc_code, std::string_view device_raw_id,
                             Health initial, const SimClock& clock);
  /// Same as register_user for an identity that is already hashed.
  DeviceRecord register_device(std::string_view otc_code, const DeviceId& device, Health initial,
                               const SimClock& clock);

  /// OTC-verified status change. A change to infected quarantines the device,
  /// traces its co-contacts, quarantines and notifies every registered one of
  /// them, and notifies the device itself. Returns the notifications delivered.
  /// Errors: invalid_otc, otc_replay, lookup (unknown device),
  /// invalid_transition. A failed call changes nothing.
  std::vector<Notification> update_status(std::string_view otc_code, const DeviceId& device,
                                          Health new_status, const SimClock& clock);

  /// Proximity scan. Neighbours are categorised from the state before this
  /// scan: infected -> A; contact with an infected device inside the window
  /// -> B; contact with a category-B device inside the window -> C; else D.
  /// Then mutual contacts are recorded for registered neighbours and the area
  /// class is sent to the scanner. Unregistered neighbours are ignored.
  /// Errors: lookup (unregistered scanner), validation (distance outside
  /// (0, range]).
  ScanResult scan_handshake(const DeviceId& scanner, std::span<const ScanPeer> neighbors,
                            const WeightConfig& weights, const SimClock& clock);

  /// Background status checker. If the device became infected since the last
  /// tick it gets status_positive; otherwise, if any contact inside the
  /// window is currently infected, it gets contact_at_risk.
  /// Returns the delivered notification, if any. Errors: lookup.
  std::optional<Notification> status_checker_tick(const DeviceId& device, const SimClock& clock);

  /// Records a mutual encounter between two registered devices without a
  /// risk assessment. Errors: lookup, validation.
  void record_encounter(const DeviceId& a, const DeviceId& b, double distance_m, double duration_s,
                        const SimClock& clock);

  /// Forgets contacts dated before `first_kept_day`.
  void prune_contacts(Day first_kept_day, const SimClock& clock);

  const DeviceRecord* find(const DeviceId& device) const;
  bool is_registered(const DeviceId& device) const { return find(device) != nullptr; }
  std::size_t device_count() const noexcept { return devices_.size(); }
  const std::map<DeviceId, DeviceRecord>& devices() const noexcept { return devices_; }
  const std::map<std::string, Otc, std::less<>>& otcs() const noexcept { return otcs_; }
  const ContactGraph& contact_graph() const noexcept { return graph_; }
  /// Every notification ever delivered, in delivery order.
  std::span<const Notification> notifications() const noexcept { return notifications_; }

  /// SHA-256 (hex) of a canonical rendering of devices, OTCs, contacts and
  /// notifications. Equal digests mean equal observable state.
  std::string state_digest() const;

 private:
  using NotificationKey = std::tuple<DeviceId, NotificationKind, int, Day>;

  void log(Day day, std::string_view op, std::string actor, std::string_view outcome,
           std::string args);
  Otc& checked_otc(std::string_view code);
  std::string fresh_code();
  void insert_otc(std::string code, Day day);
  void quarantine(DeviceRecord& record, Day day);
  bool notify(Notification n);
  bool infected(const DeviceId& id) const;
  bool had_contact_within(const DeviceId& id, Day today, auto predicate) const;
  Category categorize(const DeviceId& id, Day today) const;
  void apply(const Event& event);

  ProtocolPolicy policy_;
  Rng rng_;
  EventLog* log_ = nullptr;
  std::map<DeviceId, DeviceRecord> devices_;
  std::map<std::string, Otc, std::less<>> otcs_;
  ContactGraph graph_;
  std::vector<Notification> notifications_;
  std::set<NotificationKey> delivered_;
};

}  // namespace proxtrace

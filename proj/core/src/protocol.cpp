#include "proxtrace/protocol.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "proxtrace/error.hpp"
#include "text.hpp"

namespace proxtrace {

std::string_view to_string(NotificationKind kind) noexcept {
  switch (kind) {
    case NotificationKind::status_positive: return "status_positive";
    case NotificationKind::contact_at_risk: return "contact_at_risk";
    case NotificationKind::area_risk: return "area_risk";
  }
  return "unknown";
}

namespace {

// Runs `body`, appending one audit event with the outcome. Errors are rethrown.
// `log` is only invoked when `enabled`, so argument formatting costs nothing
// without an attached log.
template <typename Log, typename Body>
auto audited(bool enabled, Log&& log, Body&& body) -> decltype(body()) {
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      if (enabled) log("ok");
    } else {
      auto result = body();
      if (enabled) log("ok");
      return result;
    }
  } catch (const Error& e) {
    if (enabled) log(to_string(e.code()));
    throw;
  }
}

double parse_double_arg(const EventArgs& args, std::string_view key) {
  const auto v = detail::parse_number<double>(require_arg(args, key));
  if (!v) throw Error(Errc::parse, fmt::format("argument '{}' is not a number", key));
  return *v;
}

template <typename Int>
Int parse_int_arg(const EventArgs& args, std::string_view key) {
  const auto v = detail::parse_number<Int>(require_arg(args, key));
  if (!v) throw Error(Errc::parse, fmt::format("argument '{}' is not an integer", key));
  return *v;
}

std::string encode_weights(const WeightConfig& w) {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += '/';
    out += fmt::format("{}", w[k]);
  }
  return out;
}

WeightConfig decode_weights(std::string_view text) {
  std::vector<double> values;
  for (auto field : detail::split(text, '/')) {
    const auto v = detail::parse_number<double>(field);
    if (!v) throw Error(Errc::parse, "malformed weight list in event");
    values.push_back(*v);
  }
  return WeightConfig(std::move(values));
}

std::string encode_peers(std::span<const ScanPeer> peers) {
  std::string out;
  for (std::size_t i = 0; i < peers.size(); ++i) {
    if (i) out += '|';
    out += fmt::format("{}:{}:{}", peers[i].id.hex(), peers[i].distance_m, peers[i].duration_s);
  }
  return out;
}

std::vector<ScanPeer> decode_peers(std::string_view text) {
  std::vector<ScanPeer> peers;
  if (detail::trim(text).empty()) return peers;
  for (auto field : detail::split(text, '|')) {
    const auto parts = detail::split(field, ':');
    if (parts.size() != 3) throw Error(Errc::parse, "malformed scan peer in event");
    const auto d = detail::parse_number<double>(parts[1]);
    const auto t = detail::parse_number<double>(parts[2]);
    if (!d || !t) throw Error(Errc::parse, "malformed scan peer in event");
    peers.push_back({DeviceId::from_hex(parts[0]), *d, *t});
  }
  return peers;
}

}  // namespace

Registry::Registry(ProtocolPolicy policy, EventLog* log)
    : policy_(std::move(policy)), rng_(policy_.otc_seed), log_(log) {
  if (policy_.quarantine_days < 0 || policy_.category_window_days < 0 ||
      !(policy_.bluetooth_range_m > 0.0) || policy_.min_trace_duration_s < 0.0) {
    throw Error(Errc::validation, "invalid protocol policy");
  }
  this->log(0, "init", "-", "ok",
            fmt::format("quarantine_days={};window_days={};min_trace_duration_s={};range_m={};"
                        "otc_seed={}",
                        policy_.quarantine_days, policy_.category_window_days,
                        policy_.min_trace_duration_s, policy_.bluetooth_range_m,
                        policy_.otc_seed));
}

void Registry::log(Day day, std::string_view op, std::string actor, std::string_view outcome,
                   std::string args) {
  if (!log_) return;
  log_->append(Event{day, std::string(op), std::move(actor), std::string(outcome), std::move(args)});
}

std::string Registry::fresh_code() {
  while (true) {
    auto code = fmt::format("{:016x}", rng_.next());
    if (!otcs_.contains(code)) return code;
  }
}

void Registry::insert_otc(std::string code, Day day) {
  Otc otc{code, day, false, {}};
  otcs_.emplace(std::move(code), std::move(otc));
}

Otc Registry::issue_otc(const StaffCredential& staff, const SimClock& clock) {
  const Day day = clock.current_day();
  if (staff.token != policy_.staff_token) {
    log(day, "issue", "staff", to_string(Errc::authorization), "");
    throw Error(Errc::authorization, "invalid staff credential");
  }
  auto code = fresh_code();
  insert_otc(code, day);
  log(day, "issue", "staff", "ok", "code=" + code);
  return otcs_.at(code);
}

Otc& Registry::checked_otc(std::string_view code) {
  const auto it = otcs_.find(code);
  if (it == otcs_.end()) throw Error(Errc::invalid_otc, "unknown one-time code");
  if (it->second.consumed) throw Error(Errc::otc_replay, "one-time code already used");
  return it->second;
}

DeviceRecord Registry::register_user(std::string_view otc_code, std::string_view device_raw_id,
                                     Health initial, const SimClock& clock) {
  // The raw identifier never reaches the registry or the log; only its digest does.
  return register_device(otc_code, hash_identifier(device_raw_id), initial, clock);
}

DeviceRecord Registry::register_device(std::string_view otc_code, const DeviceId& device,
                                       Health initial, const SimClock& clock) {
  const Day day = clock.current_day();
  return audited(
      log_ != nullptr,
      [&](std::string_view outcome) {
        log(day, "register", device.hex(), outcome,
            fmt::format("code={};status={}", otc_code, to_string(initial)));
      },
      [&] {
        Otc& otc = checked_otc(otc_code);
        if (devices_.contains(device)) {
          throw Error(Errc::already_registered, "device is already registered");
        }
        otc.consumed = true;
        otc.consumed_by = "register:" + device.hex();
        DeviceRecord rec{device, HealthStatus{initial, std::nullopt}, day, Health::susceptible};
        devices_.emplace(device, rec);
        return rec;
      });
}

void Registry::quarantine(DeviceRecord& record, Day day) {
  const Quarantine q{day, day + policy_.quarantine_days};
  auto& current = record.status.quarantine;
  if (!current || current->end_day < q.end_day) current = q;
}

bool Registry::notify(Notification n) {
  const int cls = n.area_class ? static_cast<int>(*n.area_class) : -1;
  if (!delivered_.emplace(n.recipient, n.kind, cls, n.day).second) return false;
  notifications_.push_back(std::move(n));
  return true;
}

std::vector<Notification> Registry::update_status(std::string_view otc_code,
                                                  const DeviceId& device, Health new_status,
                                                  const SimClock& clock) {
  const Day day = clock.current_day();
  return audited(
      log_ != nullptr,
      [&](std::string_view outcome) {
        log(day, "update", device.hex(), outcome,
            fmt::format("code={};status={}", otc_code, to_string(new_status)));
      },
      [&] {
        Otc& otc = checked_otc(otc_code);
        const auto it = devices_.find(device);
        if (it == devices_.end()) throw Error(Errc::lookup, "device is not registered");
        DeviceRecord& rec = it->second;
        if (!is_valid_transition(rec.status.state, new_status)) {
          throw Error(Errc::invalid_transition,
                      fmt::format("cannot change status from {} to {}", to_string(rec.status.state),
                                  to_string(new_status)));
        }
        // Tracing cannot fail past this point, so the whole update is atomic.
        otc.consumed = true;
        otc.consumed_by = "update:" + device.hex();
        rec.status.state = new_status;

        std::vector<Notification> delivered;
        if (new_status != Health::infected) return delivered;

        quarantine(rec, day);
        Notification self{device, NotificationKind::status_positive, std::nullopt, day};
        if (notify(self)) delivered.push_back(self);

        if (!graph_.contains(device)) return delivered;
        const auto co = trace_co_contacts(device, graph_, clock,
                                          TraceOptions{policy_.min_trace_duration_s});
        for (const auto& id : co.ids()) {
          const auto other = devices_.find(id);
          if (other == devices_.end()) continue;
          quarantine(other->second, day);
          Notification n{id, NotificationKind::contact_at_risk, std::nullopt, day};
          if (notify(n)) delivered.push_back(n);
        }
        return delivered;
      });
}

bool Registry::infected(const DeviceId& id) const {
  const auto it = devices_.find(id);
  return it != devices_.end() && it->second.status.state == Health::infected;
}

bool Registry::had_contact_within(const DeviceId& id, Day today, auto predicate) const {
  const auto it = graph_.find(id);
  if (it == graph_.end()) return false;
  const Day first = today - policy_.category_window_days;
  for (const auto& r : it->second.records()) {
    if (r.date_of_contact >= first && r.date_of_contact <= today && predicate(r.peer)) return true;
  }
  return false;
}

Category Registry::categorize(const DeviceId& id, Day today) const {
  if (infected(id)) return Category::A;
  const auto is_b = [&](const DeviceId& peer) {
    return had_contact_within(peer, today, [&](const DeviceId& p) { return infected(p); });
  };
  if (had_contact_within(id, today, [&](const DeviceId& p) { return infected(p); })) {
    return Category::B;
  }
  if (had_contact_within(id, today, is_b)) return Category::C;
  return Category::D;
}

ScanResult Registry::scan_handshake(const DeviceId& scanner, std::span<const ScanPeer> neighbors,
                                    const WeightConfig& weights, const SimClock& clock) {
  const Day day = clock.current_day();
  return audited(
      log_ != nullptr,
      [&](std::string_view outcome) {
        log(day, "scan", scanner.hex(), outcome,
            fmt::format("peers={};weights={}", encode_peers(neighbors), encode_weights(weights)));
      },
      [&] {
        if (!devices_.contains(scanner)) throw Error(Errc::lookup, "scanner is not registered");
        AreaObservation area;
        area.radius_m = policy_.bluetooth_range_m;
        std::vector<const ScanPeer*> registered;
        for (const auto& peer : neighbors) {
          if (!(peer.distance_m > 0.0 && peer.distance_m <= policy_.bluetooth_range_m)) {
            throw Error(Errc::validation, "scan distance outside (0, bluetooth range]");
          }
          if (!(peer.duration_s >= 0.0)) throw Error(Errc::validation, "negative scan duration");
          if (peer.id == scanner || !devices_.contains(peer.id)) continue;
          registered.push_back(&peer);
          area.observations.push_back({index_of(categorize(peer.id, day)), peer.distance_m, {}});
        }
        if (!area.observations.empty() && weights.size() < kDefaultCategoryCount) {
          throw Error(Errc::validation, "scan needs a weight for each of the four categories");
        }

        ScanResult result;
        result.registered_neighbors = registered.size();
        for (const auto* peer : registered) {
          ::proxtrace::record_encounter(graph_, scanner, peer->id, peer->distance_m, peer->duration_s, clock,
                           policy_.bluetooth_range_m);
        }
        if (area.observations.empty()) return result;

        const RiskClass cls = classify(assess_area(area, weights));
        result.risk_class = cls;
        Notification n{scanner, NotificationKind::area_risk, cls, day};
        if (notify(n)) result.notification = n;
        return result;
      });
}

std::optional<Notification> Registry::status_checker_tick(const DeviceId& device,
                                                          const SimClock& clock) {
  const Day day = clock.current_day();
  return audited(
      log_ != nullptr,
      [&](std::string_view outcome) { log(day, "tick", device.hex(), outcome, ""); },
      [&]() -> std::optional<Notification> {
        const auto it = devices_.find(device);
        if (it == devices_.end()) throw Error(Errc::lookup, "device is not registered");
        DeviceRecord& rec = it->second;
        const Health previous = rec.last_checked;
        rec.last_checked = rec.status.state;

        if (rec.status.state == Health::infected) {
          if (previous == Health::infected) return std::nullopt;
          Notification n{device, NotificationKind::status_positive, std::nullopt, day};
          if (notify(n)) return n;
          return std::nullopt;
        }
        if (had_contact_within(device, day, [&](const DeviceId& p) { return infected(p); })) {
          Notification n{device, NotificationKind::contact_at_risk, std::nullopt, day};
          if (notify(n)) return n;
        }
        return std::nullopt;
      });
}

void Registry::record_encounter(const DeviceId& a, const DeviceId& b, double distance_m,
                                double duration_s, const SimClock& clock) {
  const Day day = clock.current_day();
  audited(
      log_ != nullptr,
      [&](std::string_view outcome) {
        log(day, "encounter", a.hex(), outcome,
            fmt::format("peer={};distance={};duration={}", b.hex(), distance_m, duration_s));
      },
      [&] {
        if (!devices_.contains(a) || !devices_.contains(b)) {
          throw Error(Errc::lookup, "encounter between unregistered devices");
        }
        proxtrace::record_encounter(graph_, a, b, distance_m, duration_s, clock,
                                    policy_.bluetooth_range_m);
      });
}

void Registry::prune_contacts(Day first_kept_day, const SimClock& clock) {
  for (auto& [owner, list] : graph_) list.prune_before(first_kept_day);
  std::erase_if(graph_, [](const auto& entry) { return entry.second.empty(); });
  if (log_) log(clock.current_day(), "prune", "-", "ok", fmt::format("keep_from={}", first_kept_day));
}

const DeviceRecord* Registry::find(const DeviceId& device) const {
  const auto it = devices_.find(device);
  return it == devices_.end() ? nullptr : &it->second;
}

std::string Registry::state_digest() const {
  std::string text;
  for (const auto& [id, rec] : devices_) {
    const auto& q = rec.status.quarantine;
    text += fmt::format("D {} {} {} {} {} {}\n", id.hex(), to_string(rec.status.state),
                        q ? std::to_string(q->start_day) : "-",
                        q ? std::to_string(q->end_day) : "-", rec.registered_day,
                        to_string(rec.last_checked));
  }
  for (const auto& [code, otc] : otcs_) {
    text += fmt::format("O {} {} {} {}\n", code, otc.issued_day, otc.consumed ? 1 : 0,
                        otc.consumed_by.empty() ? "-" : otc.consumed_by);
  }
  for (const auto& owner : sorted_owners(graph_)) {
    for (const auto& r : graph_.at(owner).records()) {
      text += fmt::format("C {} {} {} {} {}\n", owner.hex(), r.peer.hex(), r.date_of_contact,
                          r.distance_m, r.duration_s);
    }
  }
  for (const auto& n : notifications_) {
    text += fmt::format("N {} {} {} {}\n", n.recipient.hex(), to_string(n.kind),
                        n.area_class ? letter(*n.area_class) : '-', n.day);
  }
  return to_hex(sha256(text));
}

Registry Registry::replay(std::span<const Event> events) {
  if (events.empty() || events.front().operation != "init") {
    throw Error(Errc::parse, "event log must start with an init event");
  }
  const auto init = parse_event_args(events.front().args);
  ProtocolPolicy policy;
  policy.quarantine_days = parse_int_arg<Day>(init, "quarantine_days");
  policy.category_window_days = parse_int_arg<Day>(init, "window_days");
  policy.min_trace_duration_s = parse_double_arg(init, "min_trace_duration_s");
  policy.bluetooth_range_m = parse_double_arg(init, "range_m");
  policy.otc_seed = parse_int_arg<std::uint64_t>(init, "otc_seed");
  Registry registry(std::move(policy));
  for (std::size_t i = 1; i < events.size(); ++i) {
    try {
      registry.apply(events[i]);
    } catch (const Error& e) {
      if (e.code() == Errc::replay_mismatch || e.code() == Errc::parse) {
        throw Error(e.code(), fmt::format("event {}: {}", i + 1, e.what()));
      }
      throw;
    }
  }
  return registry;
}

void Registry::apply(const Event& event) {
  const SimClock clock(event.day);
  const auto args = parse_event_args(event.args);
  const auto& op = event.operation;

  if (op == "issue") {
    // Issued codes are restored verbatim; a refused issue left no state behind.
    if (event.outcome == "ok") insert_otc(require_arg(args, "code"), event.day);
    return;
  }
  if (op == "prune") {
    prune_contacts(parse_int_arg<Day>(args, "keep_from"), clock);
    return;
  }

  std::string outcome = "ok";
  try {
    const DeviceId actor = DeviceId::from_hex(event.actor);
    if (op == "register") {
      register_device(require_arg(args, "code"), actor, parse_health(require_arg(args, "status")),
                      clock);
    } else if (op == "update") {
      update_status(require_arg(args, "code"), actor, parse_health(require_arg(args, "status")),
                    clock);
    } else if (op == "scan") {
      const auto peers = decode_peers(require_arg(args, "peers"));
      scan_handshake(actor, peers, decode_weights(require_arg(args, "weights")), clock);
    } else if (op == "tick") {
      status_checker_tick(actor, clock);
    } else if (op == "encounter") {
      record_encounter(actor, DeviceId::from_hex(require_arg(args, "peer")),
                       parse_double_arg(args, "distance"), parse_double_arg(args, "duration"),
                       clock);
    } else {
      throw Error(Errc::parse, "unknown operation '" + op + "'");
    }
  } catch (const Error& e) {
    if (e.code() == Errc::parse) throw;
    outcome = std::string(to_string(e.code()));
  }
  if (outcome != event.outcome) {
    throw Error(Errc::replay_mismatch, fmt::format("{} recorded outcome '{}' but replay produced '{}'",
                                                   op, event.outcome, outcome));
  }
}

}  // namespace proxtrace

#include "proxtrace/contact.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <tuple>

#include "proxtrace/error.hpp"
#include "text.hpp"

namespace proxtrace {

namespace {

auto key(const ContactRecord& r) { return std::tie(r.date_of_contact, r.peer); }

void check_record(const DeviceId& owner, const ContactRecord& rec, const SimClock& clock,
                  double max_range_m) {
  if (rec.date_of_contact > clock.current_day()) {
    throw Error(Errc::validation, fmt::format("contact dated day {} is after current day {}",
                                              rec.date_of_contact, clock.current_day()));
  }
  if (!(rec.distance_m > 0.0)) {
    throw Error(Errc::validation, "contact distance must be > 0");
  }
  if (rec.distance_m > max_range_m) {
    throw Error(Errc::validation, fmt::format("contact distance {} m exceeds range {} m",
                                              rec.distance_m, max_range_m));
  }
  if (!(rec.duration_s >= 0.0)) {
    throw Error(Errc::validation, "contact duration must be >= 0");
  }
  if (rec.peer == owner) {
    throw Error(Errc::validation, "a device cannot record a contact with itself");
  }
}

}  // namespace

void ContactList::record(const ContactRecord& rec, const SimClock& clock, double max_range_m) {
  check_record(owner_, rec, clock, max_range_m);
  restore(rec);
}

void ContactList::restore(const ContactRecord& rec) {
  auto it = std::lower_bound(records_.begin(), records_.end(), rec,
                             [](const ContactRecord& a, const ContactRecord& b) { return key(a) < key(b); });
  if (it != records_.end() && key(*it) == key(rec)) {
    it->duration_s += rec.duration_s;
    it->distance_m = std::min(it->distance_m, rec.distance_m);
    return;
  }
  records_.insert(it, rec);
}

std::span<const ContactRecord> ContactList::on_day(Day day) const noexcept {
  const auto lo = std::partition_point(records_.begin(), records_.end(),
                                       [day](const ContactRecord& r) { return r.date_of_contact < day; });
  const auto hi = std::partition_point(lo, records_.end(),
                                       [day](const ContactRecord& r) { return r.date_of_contact == day; });
  return {lo, hi};
}

void ContactList::prune_before(Day first_kept_day) {
  const auto keep = std::partition_point(
      records_.begin(), records_.end(),
      [first_kept_day](const ContactRecord& r) { return r.date_of_contact < first_kept_day; });
  records_.erase(records_.begin(), keep);
}

ContactList record_contact(ContactList list, const ContactRecord& rec, const SimClock& clock) {
  list.record(rec, clock);
  return list;
}

void record_encounter(ContactGraph& graph, const DeviceId& a, const DeviceId& b, double distance_m,
                      double duration_s, const SimClock& clock, double max_range_m) {
  const ContactRecord ab{b, clock.current_day(), distance_m, duration_s};
  const ContactRecord ba{a, clock.current_day(), distance_m, duration_s};
  check_record(a, ab, clock, max_range_m);

  graph.try_emplace(a, a).first->second.restore(ab);
  graph.try_emplace(b, b).first->second.restore(ba);
}

std::vector<DeviceId> sorted_owners(const ContactGraph& graph) {
  std::vector<DeviceId> owners;
  owners.reserve(graph.size());
  for (const auto& [owner, list] : graph) owners.push_back(owner);
  std::sort(owners.begin(), owners.end());
  return owners;
}

namespace {

void write_rows(std::ostream& out, const ContactList& list) {
  const std::string owner = list.owner().hex();
  for (const auto& r : list.records()) {
    fmt::print(out, "{},{},{},{},{}\n", owner, r.peer.hex(), r.date_of_contact, r.distance_m,
               r.duration_s);
  }
}

constexpr std::string_view kHeader = "owner,peer,day,distance_m,duration_s";

}  // namespace

void write_contact_csv(std::ostream& out, const ContactGraph& graph) {
  out << kHeader << '\n';
  for (const auto& owner : sorted_owners(graph)) write_rows(out, graph.at(owner));
}

void write_contact_csv(std::ostream& out, const ContactList& list) {
  out << kHeader << '\n';
  write_rows(out, list);
}

ContactGraph read_contact_csv(std::istream& in) {
  ContactGraph graph;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (line_no == 1 && text == kHeader) continue;
    const auto fields = detail::split(text, ',');
    auto fail = [&](std::string_view why) {
      return Error(Errc::parse, fmt::format("line {}: {}", line_no, why));
    };
    if (fields.size() != 5) throw fail("expected 5 fields");
    ContactRecord rec;
    DeviceId owner;
    try {
      owner = DeviceId::from_hex(fields[0]);
      rec.peer = DeviceId::from_hex(fields[1]);
    } catch (const Error& e) {
      throw fail(e.what());
    }
    const auto day = detail::parse_number<Day>(fields[2]);
    const auto dist = detail::parse_number<double>(fields[3]);
    const auto dur = detail::parse_number<double>(fields[4]);
    if (!day || !dist || !dur) throw fail("malformed numeric field");
    if (!(*dist > 0.0)) throw fail("distance must be > 0");
    if (!(*dur >= 0.0)) throw fail("duration must be >= 0");
    if (owner == rec.peer) throw fail("self-contact");
    rec.date_of_contact = *day;
    rec.distance_m = *dist;
    rec.duration_s = *dur;
    graph.try_emplace(owner, owner).first->second.restore(rec);
  }
  return graph;
}

}  // namespace proxtrace

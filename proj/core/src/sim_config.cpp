#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <sstream>

#include "proxtrace/error.hpp"
#include "proxtrace/sim.hpp"
#include "text.hpp"

namespace proxtrace {

namespace {

Error field_error(std::string_view field, std::string_view why) {
  return Error(Errc::validation, fmt::format("{}: {}", field, why));
}

template <typename T>
void assign_number(T& target, std::string_view key, std::string_view value) {
  const auto v = detail::parse_number<T>(value);
  if (!v) throw field_error(key, fmt::format("cannot parse '{}'", value));
  target = *v;
}

void assign_bool(bool& target, std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    target = true;
  } else if (value == "false" || value == "0" || value == "no" || value == "off") {
    target = false;
  } else {
    throw field_error(key, fmt::format("expected a boolean, got '{}'", value));
  }
}

using Setter = std::function<void(SimConfig&, std::string_view, std::string_view)>;

const std::vector<std::pair<std::string_view, Setter>>& setters() {
  static const std::vector<std::pair<std::string_view, Setter>> table = {
      {"population", [](SimConfig& c, auto k, auto v) { assign_number(c.population, k, v); }},
      {"initial_infected", [](SimConfig& c, auto k, auto v) { assign_number(c.initial_infected, k, v); }},
      {"arena_side_m", [](SimConfig& c, auto k, auto v) { assign_number(c.arena_side_m, k, v); }},
      {"bluetooth_range_m", [](SimConfig& c, auto k, auto v) { assign_number(c.bluetooth_range_m, k, v); }},
      {"infection_radius_m", [](SimConfig& c, auto k, auto v) { assign_number(c.infection_radius_m, k, v); }},
      {"infection_probability", [](SimConfig& c, auto k, auto v) { assign_number(c.infection_probability, k, v); }},
      {"symptom_onset_delay", [](SimConfig& c, auto k, auto v) { assign_number(c.symptom_onset_delay, k, v); }},
      {"detection_delay", [](SimConfig& c, auto k, auto v) { assign_number(c.detection_delay, k, v); }},
      {"quarantine_duration", [](SimConfig& c, auto k, auto v) { assign_number(c.quarantine_duration, k, v); }},
      {"infectious_period", [](SimConfig& c, auto k, auto v) { assign_number(c.infectious_period, k, v); }},
      {"app_enabled", [](SimConfig& c, auto k, auto v) { assign_bool(c.app_enabled, k, v); }},
      {"seed", [](SimConfig& c, auto k, auto v) { assign_number(c.seed, k, v); }},
      {"max_days", [](SimConfig& c, auto k, auto v) { assign_number(c.max_days, k, v); }},
      {"trace_min_duration_s", [](SimConfig& c, auto k, auto v) { assign_number(c.trace_min_duration_s, k, v); }},
      {"encounter_duration_s", [](SimConfig& c, auto k, auto v) { assign_number(c.encounter_duration_s, k, v); }},
      {"threads", [](SimConfig& c, auto k, auto v) { assign_number(c.threads, k, v); }},
  };
  return table;
}

}  // namespace

void SimConfig::validate() const {
  if (population == 0) throw field_error("population", "must be >= 1");
  if (initial_infected > population) throw field_error("initial_infected", "exceeds population");
  if (!(arena_side_m >= 0.0) || !std::isfinite(arena_side_m)) {
    throw field_error("arena_side_m", "must be >= 0 (0 = default density)");
  }
  if (!(bluetooth_range_m > 0.0)) throw field_error("bluetooth_range_m", "must be > 0");
  if (!(infection_radius_m > 0.0)) throw field_error("infection_radius_m", "must be > 0");
  if (!(infection_probability >= 0.0 && infection_probability <= 1.0)) {
    throw field_error("infection_probability", "must lie in [0, 1]");
  }
  if (symptom_onset_delay < 0) throw field_error("symptom_onset_delay", "must be >= 0");
  if (detection_delay < 0) throw field_error("detection_delay", "must be >= 0");
  if (quarantine_duration < 0) throw field_error("quarantine_duration", "must be >= 0");
  if (infectious_period < 1) throw field_error("infectious_period", "must be >= 1");
  if (max_days < 0) throw field_error("max_days", "must be >= 0");
  if (!(trace_min_duration_s >= 0.0)) throw field_error("trace_min_duration_s", "must be >= 0");
  if (!(encounter_duration_s >= 0.0)) throw field_error("encounter_duration_s", "must be >= 0");
  if (threads == 0) throw field_error("threads", "must be >= 1");
}

double SimConfig::effective_arena_side() const {
  if (arena_side_m > 0.0) return arena_side_m;
  // 20 individuals per 100 m^2.
  return std::sqrt(static_cast<double>(population) * 5.0);
}

SimConfig SimConfig::parse(std::istream& in) {
  SimConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::validation, fmt::format("line {}: expected key = value", line_no));
    }
    const auto key = detail::trim(text.substr(0, eq));
    const auto value = detail::trim(text.substr(eq + 1));
    const auto& table = setters();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& entry) { return entry.first == key; });
    if (it == table.end()) {
      throw Error(Errc::validation, fmt::format("line {}: unknown key '{}'", line_no, key));
    }
    try {
      it->second(config, key, value);
    } catch (const Error& e) {
      throw Error(Errc::validation, fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  config.validate();
  return config;
}

SimConfig SimConfig::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

std::string SimConfig::to_text() const {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  line("population", population);
  line("initial_infected", initial_infected);
  line("arena_side_m", arena_side_m);
  line("bluetooth_range_m", bluetooth_range_m);
  line("infection_radius_m", infection_radius_m);
  line("infection_probability", infection_probability);
  line("symptom_onset_delay", symptom_onset_delay);
  line("detection_delay", detection_delay);
  line("quarantine_duration", quarantine_duration);
  line("infectious_period", infectious_period);
  line("app_enabled", app_enabled ? "true" : "false");
  line("seed", seed);
  line("max_days", max_days);
  line("trace_min_duration_s", trace_min_duration_s);
  line("encounter_duration_s", encounter_duration_s);
  line("threads", threads);
  return out;
}

}  // namespace proxtrace

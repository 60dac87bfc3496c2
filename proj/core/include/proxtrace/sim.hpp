#pragma once

// Discrete-time spatial epidemic engine with an optional contact-tracing app.
//
// One step is one day:
//   1. every agent not in quarantine relocates uniformly in the arena;
//   2. with the app on, every pair of free agents within Bluetooth range
//      records a mutual encounter;
//   3. every free susceptible within infection radius of a free infectious
//      agent is infected with the configured probability, one independent
//      draw per infectious neighbour;
//   4. with the app on, agents reaching symptom onset (+ detection delay) are
//      reported infected through the registry, which quarantines them and
//      their traced co-contacts;
//   5. recoveries are applied and contacts older than the tracing window are
//      dropped.
//
// All random draws are keyed by (seed, day, agent or pair), never by call
// order, so the baseline and app arms share one event stream (common random
// numbers) and thread count never changes the outcome.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "proxtrace/health.hpp"
#include "proxtrace/protocol.hpp"

namespace proxtrace {

struct SimConfig {
  std::uint32_t population = 2000;
  std::uint32_t initial_infected = 1;
  /// Side of the square arena in metres; 0 selects the default density of
  /// 20 individuals per 100 m^2 (side = sqrt(population * 5)).
  double arena_side_m = 0.0;
  double bluetooth_range_m = 10.0;
  double infection_radius_m = 2.0;
  double infection_probability = 0.3;
  Day symptom_onset_delay = 2;
  /// Days between symptom onset and the positive report.
  Day detection_delay = 0;
  Day quarantine_duration = kDefaultQuarantineDays;
  Day infectious_period = 14;
  bool app_enabled = false;
  std::uint64_t seed = 1;
  Day max_days = 60;
  /// Minimum cumulative encounter duration for a contact to be traced.
  double trace_min_duration_s = 0.0;
  /// Duration credited to one daily in-range encounter.
  double encounter_duration_s = 900.0;
  /// Worker threads for pair detection; results do not depend on it.
  std::size_t threads = 1;

  /// Throws Error(validation) naming the offending field.
  void validate() const;
  double effective_arena_side() const;

  /// Parses `key = value` lines; '#' starts a comment. Unknown keys and bad
  /// values raise Error(validation) naming the key and line.
  static SimConfig parse(std::istream& in);
  static SimConfig parse(std::string_view text);
  /// Canonical `key = value` rendering of every field (round-trips through parse).
  std::string to_text() const;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct Agent {
  DeviceId device;
  Position position;
  Health status = Health::susceptible;
  std::optional<Day> infection_day;
  /// First day on which the agent is free again.
  std::optional<Day> quarantined_until;
  bool reported = false;

  bool quarantined_on(Day day) const noexcept { return quarantined_until && day < *quarantined_until; }
};

struct DayStats {
  Day day = 0;
  std::uint32_t new_infections = 0;
  std::uint32_t cumulative_infections = 0;
  std::uint32_t quarantined_count = 0;
  std::uint32_t susceptible_count = 0;
  std::uint32_t infected_count = 0;
  std::uint32_t recovered_count = 0;
  /// Positive reports processed this day, and how many of them traced at least one contact.
  std::uint32_t reports = 0;
  std::uint32_t tracing_events = 0;

  friend bool operator==(const DayStats&, const DayStats&) = default;
};

class World {
 public:
  /// Validates the config, places agents, seeds the initial infections
  /// (infection day 0) and, with the app on, registers every agent. When
  /// `log` is given the registry audits every operation into it.
  explicit World(SimConfig config, EventLog* log = nullptr);

  World(World&&) noexcept = default;
  World& operator=(World&&) noexcept = default;

  /// Simulates the current day and advances to the next one.
  DayStats step();

  Day day() const noexcept { return day_; }
  const SimConfig& config() const noexcept { return config_; }
  std::span<const Agent> agents() const noexcept { return agents_; }
  std::uint32_t cumulative_infections() const noexcept { return cumulative_; }
  bool has_active_infections() const noexcept;
  /// The app backend; null when the app is disabled.
  const Registry* registry() const noexcept { return registry_.get(); }

 private:
  struct Pair {
    std::uint32_t a;
    std::uint32_t b;
    double distance;
  };

  void relocate(std::uint32_t agent, Day day);
  std::vector<Pair> pairs_within(double radius, Day day) const;
  void report_positive(std::uint32_t agent, DayStats& stats);
  void report_recovered(std::uint32_t agent);
  void sync_quarantine(const DeviceId& id);
  std::string issue_code();

  SimConfig config_;
  double side_ = 0.0;
  Day day_ = 0;
  std::uint32_t cumulative_ = 0;
  std::vector<Agent> agents_;
  std::unique_ptr<Registry> registry_;
  std::unordered_map<DeviceId, std::uint32_t> index_of_;
  SimClock clock_;
};

struct RunResult {
  std::vector<DayStats> series;
  /// First day on which a positive report traced at least one contact.
  std::optional<Day> first_tracing_day;
  /// Registry state digest at the end of an app-arm run with an event log.
  std::optional<std::string> registry_digest;

  std::uint32_t final_size() const noexcept;
  /// Day with the most new infections (earliest on ties).
  Day peak_day() const noexcept;
};

/// Steps until max_days have been simulated or no infection remains active.
RunResult run(const SimConfig& config, EventLog* log = nullptr);

struct ArmSummary {
  double attack_rate = 0.0;
  Day peak_day = 0;
  std::uint32_t final_size = 0;
};

struct Comparison {
  RunResult baseline;
  RunResult app;
  ArmSummary baseline_summary;
  ArmSummary app_summary;
};

/// Runs the config with the app off and on under the same seed.
Comparison compare(const SimConfig& config);

/// Columns: day,new_infections,cumulative,quarantined,susceptible,arm.
void write_series_header(std::ostream& out);
void write_series_csv(std::ostream& out, std::span<const DayStats> series, std::string_view arm);

/// Element-wise mean of several runs (shorter runs are padded with their
/// final state). Columns as above with fractional values.
struct MeanDayStats {
  Day day = 0;
  double new_infections = 0.0;
  double cumulative_infections = 0.0;
  double quarantined_count = 0.0;
  double susceptible_count = 0.0;
};
std::vector<MeanDayStats> average_series(std::span<const RunResult> runs);
void write_mean_series_csv(std::ostream& out, std::span<const MeanDayStats> series,
                           std::string_view arm);

/// Trailing three-day moving sum of new infections (the first two entries sum fewer days).
std::vector<std::uint64_t> moving_sum3(std::span<const DayStats> series);

}  // namespace proxtrace

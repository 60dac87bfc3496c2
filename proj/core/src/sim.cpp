#include "proxtrace/sim.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "proxtrace/error.hpp"
#include "proxtrace/rng.hpp"

namespace proxtrace {

namespace {

// Stream tags for keyed draws.
constexpr std::uint64_t kMoveStream = 1;
constexpr std::uint64_t kInfectStream = 2;
constexpr std::uint64_t kSeedStream = 3;

// Encounters closer than this are recorded at this distance (distances must be > 0).
constexpr double kMinRecordedDistance = 1e-3;

}  // namespace

World::World(SimConfig config, EventLog* log) : config_(std::move(config)) {
  config_.validate();
  side_ = config_.effective_arena_side();

  agents_.resize(config_.population);
  for (std::uint32_t i = 0; i < config_.population; ++i) {
    agents_[i].device = hash_identifier(fmt::format("agent-{}", i));
    index_of_.emplace(agents_[i].device, i);
  }

  // Partial Fisher-Yates over a seed-derived stream picks the index cases.
  std::vector<std::uint32_t> order(config_.population);
  for (std::uint32_t i = 0; i < config_.population; ++i) order[i] = i;
  Rng rng(hash_keys(config_.seed, {kSeedStream}));
  for (std::uint32_t i = 0; i < config_.initial_infected; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.below(config_.population - i));
    std::swap(order[i], order[j]);
    Agent& a = agents_[order[i]];
    a.status = Health::infected;
    a.infection_day = 0;
  }
  cumulative_ = config_.initial_infected;

  if (config_.app_enabled) {
    ProtocolPolicy policy;
    policy.quarantine_days = config_.quarantine_duration;
    policy.category_window_days = kTraceOffsetDays;
    policy.min_trace_duration_s = config_.trace_min_duration_s;
    policy.bluetooth_range_m = config_.bluetooth_range_m;
    policy.otc_seed = config_.seed;
    registry_ = std::make_unique<Registry>(std::move(policy), log);
    for (const auto& agent : agents_) {
      registry_->register_device(issue_code(), agent.device, Health::susceptible, clock_);
    }
  }
}

std::string World::issue_code() {
  return registry_->issue_otc(StaffCredential{registry_->policy().staff_token}, clock_).code;
}

bool World::has_active_infections() const noexcept {
  return std::any_of(agents_.begin(), agents_.end(),
                     [](const Agent& a) { return a.status == Health::infected; });
}

void World::relocate(std::uint32_t agent, Day day) {
  const auto d = static_cast<std::uint64_t>(day);
  agents_[agent].position = {
      side_ * keyed_uniform(config_.seed, {kMoveStream, d, 2ULL * agent}),
      side_ * keyed_uniform(config_.seed, {kMoveStream, d, 2ULL * agent + 1}),
  };
}

std::vector<World::Pair> World::pairs_within(double radius, Day day) const {
  const auto cells_per_side = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(side_ / radius)));
  auto cell_of = [&](double v) {
    return std::min(cells_per_side - 1, static_cast<std::size_t>(v / radius));
  };
  std::vector<std::vector<std::uint32_t>> grid(cells_per_side * cells_per_side);
  for (std::uint32_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].quarantined_on(day)) continue;
    const auto& p = agents_[i].position;
    grid[cell_of(p.y) * cells_per_side + cell_of(p.x)].push_back(i);
  }

  const double r2 = radius * radius;
  auto scan = [&](std::uint32_t lo, std::uint32_t hi, std::vector<Pair>& out) {
    for (std::uint32_t i = lo; i < hi; ++i) {
      if (agents_[i].quarantined_on(day)) continue;
      const auto& p = agents_[i].position;
      const auto cx = cell_of(p.x);
      const auto cy = cell_of(p.y);
      for (std::size_t y = cy == 0 ? 0 : cy - 1; y <= std::min(cells_per_side - 1, cy + 1); ++y) {
        for (std::size_t x = cx == 0 ? 0 : cx - 1; x <= std::min(cells_per_side - 1, cx + 1); ++x) {
          for (auto j : grid[y * cells_per_side + x]) {
            if (j <= i) continue;
            const double dx = agents_[j].position.x - p.x;
            const double dy = agents_[j].position.y - p.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 <= r2) out.push_back({i, j, std::sqrt(d2)});
          }
        }
      }
    }
  };

  const auto n = static_cast<std::uint32_t>(agents_.size());
  const auto threads = static_cast<std::uint32_t>(std::max<std::size_t>(1, std::min<std::size_t>(config_.threads, n)));
  std::vector<std::vector<Pair>> parts(threads);
  if (threads == 1) {
    scan(0, n, parts[0]);
  } else {
    const std::uint32_t chunk = (n + threads - 1) / threads;
    std::vector<std::jthread> workers;
    for (std::uint32_t t = 0; t < threads; ++t) {
      const std::uint32_t lo = std::min(n, t * chunk);
      const std::uint32_t hi = std::min(n, lo + chunk);
      workers.emplace_back([&, lo, hi, t] { scan(lo, hi, parts[t]); });
    }
  }
  std::vector<Pair> pairs;
  for (auto& part : parts) pairs.insert(pairs.end(), part.begin(), part.end());
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& x, const Pair& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  return pairs;
}

void World::sync_quarantine(const DeviceId& id) {
  const auto* rec = registry_->find(id);
  if (!rec || !rec->status.quarantine) return;
  Agent& agent = agents_[index_of_.at(id)];
  const Day until = rec->status.quarantine->end_day;
  if (!agent.quarantined_until || *agent.quarantined_until < until) agent.quarantined_until = until;
}

void World::report_positive(std::uint32_t agent, DayStats& stats) {
  Agent& a = agents_[agent];
  const auto delivered = registry_->update_status(issue_code(), a.device, Health::infected, clock_);
  a.reported = true;
  ++stats.reports;
  bool traced = false;
  for (const auto& n : delivered) {
    sync_quarantine(n.recipient);
    traced = traced || n.kind == NotificationKind::contact_at_risk;
  }
  sync_quarantine(a.device);
  if (traced) ++stats.tracing_events;
}

void World::report_recovered(std::uint32_t agent) {
  registry_->update_status(issue_code(), agents_[agent].device, Health::recovered, clock_);
}

DayStats World::step() {
  const Day today = day_;
  DayStats stats;
  stats.day = today;
  const auto n = static_cast<std::uint32_t>(agents_.size());

  for (std::uint32_t i = 0; i < n; ++i) {
    if (!agents_[i].quarantined_on(today)) relocate(i, today);
  }

  const bool app = registry_ != nullptr;
  const double radius = app ? std::max(config_.bluetooth_range_m, config_.infection_radius_m)
                            : config_.infection_radius_m;
  const auto pairs = pairs_within(radius, today);

  // The app scans all day, so today's encounters are on file before any
  // report is processed; co-contact tracing needs them.
  if (app) {
    for (const auto& p : pairs) {
      if (p.distance > config_.bluetooth_range_m) continue;
      registry_->record_encounter(agents_[p.a].device, agents_[p.b].device,
                                  std::max(p.distance, kMinRecordedDistance),
                                  config_.encounter_duration_s, clock_);
    }
  }

  auto infectious = [&](const Agent& a) {
    return a.status == Health::infected && a.infection_day && *a.infection_day < today;
  };
  std::vector<std::uint8_t> newly(n, 0);
  const auto d = static_cast<std::uint64_t>(today);
  for (const auto& p : pairs) {
    if (p.distance > config_.infection_radius_m) continue;
    const Agent& a = agents_[p.a];
    const Agent& b = agents_[p.b];
    if (infectious(a) && b.status == Health::susceptible &&
        keyed_uniform(config_.seed, {kInfectStream, d, p.a, p.b}) < config_.infection_probability) {
      newly[p.b] = 1;
    }
    if (infectious(b) && a.status == Health::susceptible &&
        keyed_uniform(config_.seed, {kInfectStream, d, p.b, p.a}) < config_.infection_probability) {
      newly[p.a] = 1;
    }
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!newly[i]) continue;
    agents_[i].status = Health::infected;
    agents_[i].infection_day = today;
    ++stats.new_infections;
  }
  cumulative_ += stats.new_infections;

  if (app) {
    const Day report_after = config_.symptom_onset_delay + config_.detection_delay;
    for (std::uint32_t i = 0; i < n; ++i) {
      const Agent& a = agents_[i];
      if (a.status == Health::infected && !a.reported && *a.infection_day + report_after == today) {
        report_positive(i, stats);
      }
    }
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    Agent& a = agents_[i];
    if (a.status == Health::infected && *a.infection_day + config_.infectious_period <= today) {
      a.status = Health::recovered;
      if (app && a.reported) report_recovered(i);
    }
  }

  if (app) registry_->prune_contacts(today - kTraceOffsetDays + 1, clock_);

  for (const auto& a : agents_) {
    // Quarantine state as it stands for tomorrow's movement.
    if (a.quarantined_on(today + 1)) ++stats.quarantined_count;
    switch (a.status) {
      case Health::susceptible: ++stats.susceptible_count; break;
      case Health::infected: ++stats.infected_count; break;
      case Health::recovered: ++stats.recovered_count; break;
    }
  }
  stats.cumulative_infections = cumulative_;

  ++day_;
  clock_.tick();
  return stats;
}

std::uint32_t RunResult::final_size() const noexcept {
  return series.empty() ? 0 : series.back().cumulative_infections;
}

Day RunResult::peak_day() const noexcept {
  Day best = 0;
  std::uint32_t best_count = 0;
  for (const auto& s : series) {
    if (s.new_infections > best_count) {
      best_count = s.new_infections;
      best = s.day;
    }
  }
  return best;
}

RunResult run(const SimConfig& config, EventLog* log) {
  World world(config, log);
  RunResult result;
  while (world.day() < config.max_days) {
    const auto stats = world.step();
    if (stats.tracing_events > 0 && !result.first_tracing_day) result.first_tracing_day = stats.day;
    result.series.push_back(stats);
    if (!world.has_active_infections()) break;
  }
  if (log && world.registry()) result.registry_digest = world.registry()->state_digest();
  return result;
}

namespace {

ArmSummary summarize(const RunResult& r, std::uint32_t population) {
  return {static_cast<double>(r.final_size()) / population, r.peak_day(), r.final_size()};
}

}  // namespace

Comparison compare(const SimConfig& config) {
  SimConfig baseline = config;
  baseline.app_enabled = false;
  SimConfig app = config;
  app.app_enabled = true;
  Comparison c;
  c.baseline = run(baseline);
  c.app = run(app);
  c.baseline_summary = summarize(c.baseline, config.population);
  c.app_summary = summarize(c.app, config.population);
  return c;
}

void write_series_header(std::ostream& out) {
  out << "day,new_infections,cumulative,quarantined,susceptible,arm\n";
}

void write_series_csv(std::ostream& out, std::span<const DayStats> series, std::string_view arm) {
  for (const auto& s : series) {
    fmt::print(out, "{},{},{},{},{},{}\n", s.day, s.new_infections, s.cumulative_infections,
               s.quarantined_count, s.susceptible_count, arm);
  }
}

std::vector<MeanDayStats> average_series(std::span<const RunResult> runs) {
  std::size_t length = 0;
  for (const auto& r : runs) length = std::max(length, r.series.size());
  std::vector<MeanDayStats> mean(length);
  if (runs.empty()) return mean;
  for (std::size_t t = 0; t < length; ++t) {
    mean[t].day = static_cast<Day>(t);
    for (const auto& r : runs) {
      if (r.series.empty()) continue;
      if (t < r.series.size()) {
        const auto& s = r.series[t];
        mean[t].new_infections += s.new_infections;
        mean[t].cumulative_infections += s.cumulative_infections;
        mean[t].quarantined_count += s.quarantined_count;
        mean[t].susceptible_count += s.susceptible_count;
      } else {
        const auto& s = r.series.back();
        mean[t].cumulative_infections += s.cumulative_infections;
        mean[t].susceptible_count += s.susceptible_count;
      }
    }
    const auto k = static_cast<double>(runs.size());
    mean[t].new_infections /= k;
    mean[t].cumulative_infections /= k;
    mean[t].quarantined_count /= k;
    mean[t].susceptible_count /= k;
  }
  return mean;
}

void write_mean_series_csv(std::ostream& out, std::span<const MeanDayStats> series,
                           std::string_view arm) {
  for (const auto& s : series) {
    fmt::print(out, "{},{},{},{},{},{}\n", s.day, s.new_infections, s.cumulative_infections,
               s.quarantined_count, s.susceptible_count, arm);
  }
}

std::vector<std::uint64_t> moving_sum3(std::span<const DayStats> series) {
  std::vector<std::uint64_t> out(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    std::uint64_t sum = 0;
    for (std::size_t k = (t >= 2 ? t - 2 : 0); k <= t; ++k) sum += series[k].new_infections;
    out[t] = sum;
  }
  return out;
}

}  // namespace proxtrace

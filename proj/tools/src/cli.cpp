#include "proxtrace_cli/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "proxtrace/device_id.hpp"
#include "proxtrace/distributions.hpp"
#include "proxtrace/error.hpp"
#include "proxtrace/event_log.hpp"
#include "proxtrace/protocol.hpp"
#include "proxtrace/risk.hpp"
#include "proxtrace/risk_curve.hpp"
#include "proxtrace/sim.hpp"
#include "proxtrace/tracing.hpp"
#include "proxtrace_cli/manifest.hpp"

namespace proxtrace::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = PROXTRACE_VERSION;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

WeightConfig parse_weights(const std::string& text) {
  if (text.empty()) return WeightConfig::defaults();
  std::vector<double> w;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    const auto v = to_double(item);
    if (!v) throw Error(Errc::validation, fmt::format("--weights: cannot parse '{}'", item));
    w.push_back(*v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return WeightConfig(std::move(w));
}

std::string render_weights(const WeightConfig& w) {
  std::string s;
  for (const double v : w.values()) s += (s.empty() ? "" : ",") + fmt::format("{}", v);
  return s;
}

// Output goes to a file when a path is given, else to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(Errc::validation, "cannot open " + path + " for writing");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }
  bool to_file() const { return !path_.empty(); }
  void close() {
    if (file_.is_open()) file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* out_;
};

void emit_manifest(RunManifest manifest, const std::string& primary) {
  manifest.tool_version = kVersion;
  manifest.write(primary + ".manifest.json");
}

// ---- risk ----------------------------------------------------------------

struct RiskArgs {
  std::string observations;
  std::string weights;
  double radius = 10.0;
  std::string out;
  std::uint64_t seed = 0;
};

AreaObservation read_observations(std::istream& in, double radius, const WeightConfig& weights) {
  AreaObservation area;
  area.radius_m = radius;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (area.observations.empty() && text.rfind("category", 0) == 0) continue;  // header
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
      throw Error(Errc::validation, fmt::format("line {}: expected 'category,distance'", line_no));
    }
    const auto cat = trim(text.substr(0, comma));
    if (cat.size() != 1) throw Error(Errc::validation, fmt::format("line {}: bad category '{}'", line_no, cat));
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(cat.front())));
    const auto k = static_cast<std::size_t>(c - 'A');
    if (c < 'A' || k >= weights.size()) {
      throw Error(Errc::validation, fmt::format("line {}: bad category '{}'", line_no, cat));
    }
    const auto d = to_double(text.substr(comma + 1));
    if (!d || !(*d > 0.0) || *d > radius) {
      throw Error(Errc::validation,
                  fmt::format("line {}: distance must be a number in (0, {}]", line_no, radius));
    }
    area.observations.push_back({k, *d, {}});
  }
  return area;
}

int cmd_risk(const RiskArgs& a, std::ostream& out) {
  const auto weights = parse_weights(a.weights);
  std::ifstream in(a.observations);
  if (!in) throw Error(Errc::validation, "cannot read " + a.observations);
  const auto area = read_observations(in, a.radius, weights);
  const auto score = assess_area(area, weights);
  const auto line = fmt::format("{:.6f} {}\n", score.value, letter(classify(score)));
  Sink sink(a.out, out);
  sink.stream() << line;
  if (sink.to_file()) {
    sink.close();
    emit_manifest({"risk",
                   {{"observations", file_digest(a.observations)},
                    {"radius_m", fmt::format("{}", a.radius)},
                    {"weights", render_weights(weights)}},
                   a.seed, {}, {a.out}},
                  a.out);
  }
  return kExitOk;
}

// ---- curve / surface -----------------------------------------------------

struct SamplingArgs {
  std::string weights;
  std::string placement = "uniform";
  double radius = 10.0;
  double min_distance = 0.5;
  double distance = 5.0;
  std::size_t repetitions = 100;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  std::string out;
};

Placement make_placement(const SamplingArgs& a) {
  if (a.placement == "uniform") return Placement::uniform(a.radius, a.min_distance);
  if (a.placement == "fixed") return Placement::fixed(a.distance, a.radius);
  throw Error(Errc::validation, "--placement must be 'uniform' or 'fixed'");
}

std::map<std::string, std::string> sampling_parameters(const SamplingArgs& a, const WeightConfig& w) {
  std::map<std::string, std::string> p{
      {"weights", render_weights(w)},
      {"placement", a.placement},
      {"radius_m", fmt::format("{}", a.radius)},
      {"repetitions", std::to_string(a.repetitions)},
  };
  if (a.placement == "uniform") p["min_distance_m"] = fmt::format("{}", a.min_distance);
  else p["distance_m"] = fmt::format("{}", a.distance);
  return p;
}

int cmd_curve(const SamplingArgs& a, std::uint32_t population, std::ostream& out) {
  const auto weights = parse_weights(a.weights);
  const auto points =
      risk_curve(population, weights, make_placement(a), {a.seed, a.repetitions, a.threads});
  Sink sink(a.out, out);
  write_curve_csv(sink.stream(), points, weights.size());
  if (sink.to_file()) {
    sink.close();
    auto params = sampling_parameters(a, weights);
    params["population"] = std::to_string(population);
    emit_manifest({"curve", params, a.seed, {}, {a.out}}, a.out);
  }
  return kExitOk;
}

int cmd_surface(const SamplingArgs& a, std::uint32_t n_max, std::ostream& out) {
  const auto weights = parse_weights(a.weights);
  const auto cells = risk_surface(n_max, weights, make_placement(a), {a.seed, a.repetitions, a.threads});
  Sink sink(a.out, out);
  write_surface_csv(sink.stream(), cells);
  if (sink.to_file()) {
    sink.close();
    auto params = sampling_parameters(a, weights);
    params["n_max"] = std::to_string(n_max);
    emit_manifest({"surface", params, a.seed, {}, {a.out}}, a.out);
  }
  return kExitOk;
}

// ---- trace ---------------------------------------------------------------

struct TraceArgs {
  std::string graph;
  std::string index_case;
  Day day = 0;
  double min_duration = 0.0;
  std::string out;
  std::uint64_t seed = 0;
};

int cmd_trace(const TraceArgs& a, std::ostream& out) {
  std::ifstream in(a.graph);
  if (!in) throw Error(Errc::validation, "cannot read " + a.graph);
  const auto graph = read_contact_csv(in);
  const auto index = DeviceId::from_hex(a.index_case);
  const auto traced = trace_co_contacts(index, graph, SimClock(a.day), {a.min_duration});
  Sink sink(a.out, out);
  sink.stream() << "device\n";
  for (const auto& id : traced.ids()) sink.stream() << id.hex() << '\n';
  if (sink.to_file()) {
    sink.close();
    emit_manifest({"trace",
                   {{"graph", file_digest(a.graph)},
                    {"case", a.index_case},
                    {"day", std::to_string(a.day)},
                    {"min_duration_s", fmt::format("{}", a.min_duration)}},
                   a.seed, {}, {a.out}},
                  a.out);
  }
  return kExitOk;
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> population;
  std::optional<Day> days;
  std::optional<std::size_t> threads;
  std::string arm = "both";
  std::size_t replicates = 1;
  std::string event_log;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  SimConfig config;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw Error(Errc::validation, "cannot read " + a.config);
    config = SimConfig::parse(in);
  }
  if (a.seed) config.seed = *a.seed;
  if (a.population) config.population = *a.population;
  if (a.days) config.max_days = *a.days;
  if (a.threads) config.threads = *a.threads;
  if (a.arm != "baseline" && a.arm != "app" && a.arm != "both") {
    throw Error(Errc::validation, "--arm must be baseline, app or both");
  }
  if (a.replicates == 0) throw Error(Errc::validation, "--replicates must be >= 1");
  if (!a.event_log.empty() && (a.arm == "baseline" || a.replicates != 1)) {
    throw Error(Errc::validation, "--event-log needs the app arm and a single replicate");
  }
  config.validate();

  std::vector<std::pair<std::string, bool>> arms;
  if (a.arm != "app") arms.emplace_back("baseline", false);
  if (a.arm != "baseline") arms.emplace_back("app", true);

  struct ArmRuns {
    std::string name;
    std::vector<RunResult> runs;
  };
  std::vector<ArmRuns> results;
  EventLog log;
  std::optional<std::string> live_digest;
  for (const auto& [name, app] : arms) {
    ArmRuns arm{name, {}};
    for (std::size_t r = 0; r < a.replicates; ++r) {
      SimConfig c = config;
      c.app_enabled = app;
      c.seed = config.seed + r;
      const bool logged = app && !a.event_log.empty();
      arm.runs.push_back(run(c, logged ? &log : nullptr));
      if (logged) live_digest = arm.runs.back().registry_digest;
    }
    results.push_back(std::move(arm));
  }

  Sink sink(a.out, out);
  write_series_header(sink.stream());
  for (const auto& arm : results) {
    if (a.replicates == 1) {
      write_series_csv(sink.stream(), arm.runs.front().series, arm.name);
    } else {
      write_mean_series_csv(sink.stream(), average_series(arm.runs), arm.name);
    }
  }
  if (!sink.to_file()) return kExitOk;
  sink.close();

  std::vector<fs::path> outputs{a.out};
  const std::string summary_path = a.out + ".summary.csv";
  {
    std::ofstream summary(summary_path, std::ios::binary);
    summary << "seed,arm,attack_rate,peak_day,final_size,first_tracing_day\n";
    for (const auto& arm : results) {
      for (std::size_t r = 0; r < arm.runs.size(); ++r) {
        const auto& run = arm.runs[r];
        fmt::print(summary, "{},{},{:.6f},{},{},{}\n", config.seed + r, arm.name,
                   static_cast<double>(run.final_size()) / config.population, run.peak_day(),
                   run.final_size(),
                   run.first_tracing_day ? std::to_string(*run.first_tracing_day) : "-");
      }
    }
  }
  outputs.emplace_back(summary_path);
  if (!a.event_log.empty()) {
    std::ofstream log_out(a.event_log, std::ios::binary);
    if (!log_out) throw Error(Errc::validation, "cannot open " + a.event_log + " for writing");
    log.write_csv(log_out);
    log_out.close();
    outputs.emplace_back(a.event_log);
  }

  std::map<std::string, std::string> params;
  // Threads never change the output, so they stay out of the digest.
  SimConfig canonical = config;
  canonical.threads = 1;
  params["config"] = canonical.to_text();
  params["arm"] = a.arm;
  params["replicates"] = std::to_string(a.replicates);
  if (live_digest) params["registry_digest"] = *live_digest;
  emit_manifest({"simulate", params, config.seed, {}, outputs}, a.out);
  return kExitOk;
}

// ---- protocol replay -----------------------------------------------------

struct ReplayArgs {
  std::string log;
  std::string expect;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.log);
  if (!in) throw Error(Errc::validation, "cannot read " + a.log);
  const auto log = EventLog::read_csv(in);
  const auto registry = Registry::replay(log.events());
  const auto digest = registry.state_digest();
  fmt::print(out, "events {}\ndevices {}\nstate_digest {}\n", log.size(), registry.device_count(), digest);
  if (!a.expect.empty() && a.expect != digest) {
    fmt::print(err, "error: state digest differs from expected {}\n", a.expect);
    return kExitValidation;
  }
  return kExitOk;
}

void add_sampling_options(CLI::App* cmd, SamplingArgs& a) {
  cmd->add_option("--weights", a.weights, "Category weights wA,wB,wC,wD (strictly descending)");
  cmd->add_option("--placement", a.placement, "uniform | fixed")->capture_default_str();
  cmd->add_option("--radius", a.radius, "Assessment radius in metres")->capture_default_str();
  cmd->add_option("--min-distance", a.min_distance, "Lower bound of uniform distances")->capture_default_str();
  cmd->add_option("--distance", a.distance, "Distance used by fixed placement")->capture_default_str();
  cmd->add_option("--repetitions", a.repetitions, "Placements averaged per point")->capture_default_str();
  cmd->add_option("--threads", a.threads, "Worker threads (output does not depend on it)")
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--out", a.out, "Output CSV (stdout when omitted)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contact-tracing risk, tracing and epidemic simulation tool", "proxtrace"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RiskArgs risk_args;
  auto* risk = app.add_subcommand("risk", "Score an area from a category,distance CSV");
  risk->add_option("observations", risk_args.observations, "CSV of category,distance rows")->required();
  risk->add_option("--weights", risk_args.weights, "Category weights wA,wB,wC,wD");
  risk->add_option("--radius", risk_args.radius, "Assessment radius in metres")->capture_default_str();
  risk->add_option("--out", risk_args.out, "Write the result here instead of stdout");
  risk->add_option("--seed", risk_args.seed, "Recorded in the manifest only");

  SamplingArgs curve_args;
  std::uint32_t curve_population = 20;
  auto* curve = app.add_subcommand("curve", "Mean score of every category distribution");
  curve->add_option("--population", curve_population, "Population bound N")->capture_default_str();
  add_sampling_options(curve, curve_args);

  SamplingArgs surface_args;
  std::uint32_t surface_max = 20;
  auto* surface = app.add_subcommand("surface", "Mean score over (n_A, n_B) with no C/D individuals");
  surface->add_option("--n-max", surface_max, "Largest n_A and n_B")->capture_default_str();
  add_sampling_options(surface, surface_args);

  TraceArgs trace_args;
  auto* trace = app.add_subcommand("trace", "Co-contacts of an index case");
  trace->add_option("--graph", trace_args.graph, "Contact CSV (owner,peer,day,distance_m,duration_s)")
      ->required();
  trace->add_option("--case", trace_args.index_case, "Hex device id of the index case")->required();
  trace->add_option("--day", trace_args.day, "Current day")->required();
  trace->add_option("--min-duration", trace_args.min_duration, "Minimum contact duration in seconds");
  trace->add_option("--out", trace_args.out, "Output file (stdout when omitted)");
  trace->add_option("--seed", trace_args.seed, "Recorded in the manifest only");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run the epidemic with and/or without the app");
  simulate->add_option("--config", sim_args.config, "key = value config file");
  simulate->add_option("--out", sim_args.out, "Series CSV (stdout when omitted)");
  simulate->add_option("--seed", sim_args.seed, "Overrides the config seed");
  simulate->add_option("--population", sim_args.population, "Overrides the config population");
  simulate->add_option("--days", sim_args.days, "Overrides max_days");
  simulate->add_option("--threads", sim_args.threads, "Worker threads (output does not depend on it)");
  simulate->add_option("--arm", sim_args.arm, "baseline | app | both")->capture_default_str();
  simulate->add_option("--replicates", sim_args.replicates, "Seeds seed..seed+n-1, series averaged")
      ->capture_default_str();
  simulate->add_option("--event-log", sim_args.event_log, "Write the app arm's protocol event log");

  ReplayArgs replay_args;
  auto* protocol = app.add_subcommand("protocol", "Protocol utilities");
  protocol->require_subcommand(1);
  auto* replay = protocol->add_subcommand("replay", "Re-execute an event log and print the state digest");
  replay->add_option("log", replay_args.log, "Event log CSV")->required();
  replay->add_option("--expect", replay_args.expect, "Fail unless the digest matches");
  auto* replay_alias = app.add_subcommand("replay", "Same as 'protocol replay'");
  replay_alias->add_option("log", replay_args.log, "Event log CSV")->required();
  replay_alias->add_option("--expect", replay_args.expect, "Fail unless the digest matches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (*risk) return cmd_risk(risk_args, out);
    if (*curve) return cmd_curve(curve_args, curve_population, out);
    if (*surface) return cmd_surface(surface_args, surface_max, out);
    if (*trace) return cmd_trace(trace_args, out);
    if (*simulate) return cmd_simulate(sim_args, out);
    if (*replay || *replay_alias) return cmd_replay(replay_args, out, err);
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return e.code() == Errc::no_data ? kExitNoData : kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("proxtrace");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace proxtrace::cli

#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace oracle {

using namespace proxtrace;

double area_score(const std::vector<std::size_t>& categories, const std::vector<double>& distances,
                  const std::vector<double>& weights) {
  double num = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    num += weights[categories[i]] * distances[i];
    total += distances[i];
  }
  const double n = static_cast<double>(distances.size());
  const double mean = total / n;
  return num / (n * weights[0] * mean);
}

std::vector<std::vector<std::uint32_t>> all_distributions(std::uint32_t n, std::size_t k) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> v(k, 0);
  // odometer over [0, n]^k
  while (true) {
    std::uint64_t sum = 0;
    for (auto x : v) sum += x;
    if (sum <= n) out.push_back(v);
    std::size_t i = 0;
    while (i < k && v[i] == n) v[i++] = 0;
    if (i == k) break;
    ++v[i];
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::uint64_t i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (std::uint64_t j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c[n][k];
}

std::set<DeviceId> co_contacts(const DeviceId& index_case, const ContactGraph& graph, Day today,
                               double min_duration_s) {
  std::set<DeviceId> out;
  for (const auto& [owner, list] : graph) {
    if (owner != index_case) continue;
    for (const auto& c : list.records()) {
      if (today - c.date_of_contact != 2 || c.duration_s < min_duration_s) continue;
      out.insert(c.peer);
      for (const auto& [owner2, list2] : graph) {
        if (owner2 != c.peer) continue;
        for (const auto& c2 : list2.records()) {
          if (c2.date_of_contact == today) out.insert(c2.peer);
        }
      }
    }
  }
  out.erase(index_case);
  return out;
}

std::vector<DeviceId> node_ids(std::size_t n) {
  std::vector<DeviceId> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(hash_identifier("node-" + std::to_string(i)));
  return ids;
}

ContactGraph random_graph(std::mt19937_64& rng, const GraphShape& shape, Day today) {
  const auto ids = node_ids(shape.nodes);
  ContactGraph graph;
  for (const auto& id : ids) graph.emplace(id, ContactList(id));
  std::uniform_int_distribution<std::size_t> pick(0, shape.nodes - 1);
  std::uniform_int_distribution<std::size_t> how_many(0, shape.max_contacts_per_day / 2);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  std::uniform_real_distribution<double> dur(0.0, 1800.0);
  const SimClock clock(today);
  for (Day day = today - shape.days + 1; day <= today; ++day) {
    // Each mutual encounter adds one record to both sides, so half the cap
    // per initiator keeps every list near the per-day bound.
    std::vector<std::size_t> load(shape.nodes, 0);
    for (std::size_t a = 0; a < shape.nodes; ++a) {
      const auto k = how_many(rng);
      for (std::size_t j = 0; j < k; ++j) {
        const auto b = pick(rng);
        if (b == a || load[a] >= shape.max_contacts_per_day || load[b] >= shape.max_contacts_per_day) {
          continue;
        }
        const bool fresh = std::none_of(graph.at(ids[a]).on_day(day).begin(),
                                        graph.at(ids[a]).on_day(day).end(),
                                        [&](const ContactRecord& r) { return r.peer == ids[b]; });
        record_encounter(graph, ids[a], ids[b], dist(rng), dur(rng), clock);
        if (fresh) {
          ++load[a];
          ++load[b];
        }
      }
    }
  }
  return graph;
}

}  // namespace oracle

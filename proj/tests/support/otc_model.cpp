#include "otc_model.hpp"

#include <fmt/format.h>

#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "proxtrace/error.hpp"
#include "proxtrace/protocol.hpp"

namespace oracle {

using namespace proxtrace;

namespace {

struct Model {
  std::set<std::string> fresh;
  std::set<std::string> consumed;
  std::map<DeviceId, Health> devices;
  std::size_t consumptions = 0;
};

}  // namespace

ModelCheckResult check_otc_linearity(std::uint64_t seed, std::size_t operations) {
  std::mt19937_64 rng(seed);
  ProtocolPolicy policy;
  policy.otc_seed = seed;
  EventLog log;
  Registry reg(policy, &log);
  Model model;
  SimClock clock(0);
  ModelCheckResult result;

  std::vector<DeviceId> pool;
  for (int i = 0; i < 64; ++i) pool.push_back(hash_identifier(fmt::format("phone-{}", i)));
  std::vector<std::string> unknown_codes{"0000000000000000", "not-a-code", ""};

  auto pick = [&](auto& container) -> auto& {
    std::uniform_int_distribution<std::size_t> u(0, container.size() - 1);
    return container[u(rng)];
  };
  auto any_code = [&]() -> std::string {
    std::uniform_int_distribution<int> which(0, 9);
    const int w = which(rng);
    if (w < 5 && !model.fresh.empty()) {
      auto it = model.fresh.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, model.fresh.size() - 1)(rng));
      return *it;
    }
    if (w < 8 && !model.consumed.empty()) {
      auto it = model.consumed.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, model.consumed.size() - 1)(rng));
      return *it;
    }
    return pick(unknown_codes);
  };
  auto fail = [&](std::string why) {
    result.ok = false;
    result.failure = fmt::format("op {}: {}", result.operations, why);
  };
  auto expected_code_error = [&](const std::string& code) -> std::optional<Errc> {
    if (model.consumed.contains(code)) return Errc::otc_replay;
    if (!model.fresh.contains(code)) return Errc::invalid_otc;
    return std::nullopt;
  };

  std::uniform_int_distribution<int> op_kind(0, 99);
  for (; result.operations < operations && result.ok; ++result.operations) {
    if (result.operations % 500 == 499) clock.tick();
    const int k = op_kind(rng);
    std::optional<Errc> got;
    std::optional<Errc> want;
    std::string used_code;
    bool consumes = false;
    try {
      if (k < 25) {
        const bool valid = k < 22;
        want = valid ? std::nullopt : std::optional<Errc>(Errc::authorization);
        const auto otc = reg.issue_otc(StaffCredential{valid ? policy.staff_token : "intruder"}, clock);
        if (model.fresh.contains(otc.code) || model.consumed.contains(otc.code)) fail("duplicate code issued");
        model.fresh.insert(otc.code);
      } else if (k < 55) {
        used_code = any_code();
        const auto& dev = pick(pool);
        want = expected_code_error(used_code);
        if (!want && model.devices.contains(dev)) want = Errc::already_registered;
        reg.register_device(used_code, dev, Health::susceptible, clock);
        consumes = true;
        model.devices[dev] = Health::susceptible;
      } else if (k < 80) {
        used_code = any_code();
        const auto& dev = pick(pool);
        const Health target = k < 70 ? Health::infected : Health::recovered;
        want = expected_code_error(used_code);
        if (!want && !model.devices.contains(dev)) want = Errc::lookup;
        if (!want && !is_valid_transition(model.devices.at(dev), target)) want = Errc::invalid_transition;
        reg.update_status(used_code, dev, target, clock);
        consumes = true;
        model.devices[dev] = target;
      } else if (k < 92) {
        const auto& scanner = pick(pool);
        std::vector<ScanPeer> peers;
        for (int i = 0; i < 5; ++i) peers.push_back({pick(pool), 1.0 + i, 60.0});
        if (!model.devices.contains(scanner)) want = Errc::lookup;
        reg.scan_handshake(scanner, peers, WeightConfig::defaults(), clock);
      } else {
        const auto& dev = pick(pool);
        if (!model.devices.contains(dev)) want = Errc::lookup;
        reg.status_checker_tick(dev, clock);
      }
    } catch (const Error& e) {
      got = e.code();
      consumes = false;
    }
    if (got != want) {
      fail(fmt::format("expected {} got {}", want ? to_string(*want) : "ok", got ? to_string(*got) : "ok"));
      break;
    }
    got ? ++result.rejected : ++result.accepted;
    if (consumes) {
      model.fresh.erase(used_code);
      model.consumed.insert(used_code);
      ++model.consumptions;
    }

    // Registry and model must agree on every code and every device.
    std::size_t consumed = 0;
    std::set<std::string> trails;
    for (const auto& [code, otc] : reg.otcs()) {
      trails.insert(otc.consumed_by);
      if (otc.consumed != model.consumed.contains(code)) fail("consumed flag diverged for " + code);
      if (otc.consumed) {
        ++consumed;
        if (otc.consumed_by.empty()) fail("consumed code without audit trail");
      }
    }
    if (consumed != model.consumptions) fail("consumptions do not match successful operations");
    if (reg.device_count() != model.devices.size()) fail("device created without an OTC");
    for (const auto& [id, rec] : reg.devices()) {
      const auto it = model.devices.find(id);
      if (it == model.devices.end() || it->second != rec.status.state) fail("device state diverged");
      if (!trails.contains("register:" + id.hex())) fail("device without a registration code");
    }
  }

  if (result.ok) {
    const auto replayed = Registry::replay(log.events());
    if (replayed.state_digest() != reg.state_digest()) fail("replay diverged from live state");
  }
  return result;
}

}  // namespace oracle

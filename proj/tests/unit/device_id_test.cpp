#include <gtest/gtest.h>

#include <string>
#include <unordered_set>

#include "proxtrace/device_id.hpp"
#include "proxtrace/error.hpp"
#include "proxtrace/health.hpp"

using namespace proxtrace;

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(to_hex(sha256("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(sha256("")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(HashIdentifier, Deterministic) {
  EXPECT_EQ(hash_identifier("AA:BB:CC:DD:EE:FF"), hash_identifier("AA:BB:CC:DD:EE:FF"));
  EXPECT_NE(hash_identifier("AA:BB:CC:DD:EE:FF"), hash_identifier("AA:BB:CC:DD:EE:FE"));
}

TEST(HashIdentifier, EmptyRejected) {
  try {
    hash_identifier("");
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::validation);
  }
}

TEST(HashIdentifier, NoCollisionsOnTenThousandIds) {
  std::unordered_set<DeviceId> seen;
  for (int i = 0; i < 10000; ++i) {
    EXPECT_TRUE(seen.insert(hash_identifier("uuid-" + std::to_string(i))).second) << i;
  }
}

TEST(HashIdentifier, PluggableHasher) {
  const IdentifierHasher constant = [](std::span<const std::uint8_t>) {
    Digest d{};
    d[0] = 0x42;
    return d;
  };
  const auto id = hash_identifier("anything", constant);
  EXPECT_EQ(id.digest()[0], 0x42);
  EXPECT_EQ(id, hash_identifier("something else", constant));
  EXPECT_THROW(hash_identifier("", constant), Error);
}

TEST(DeviceId, HexRoundTrip) {
  const auto id = hash_identifier("device");
  EXPECT_EQ(id.hex().size(), 64u);
  EXPECT_EQ(DeviceId::from_hex(id.hex()), id);
  EXPECT_THROW(DeviceId::from_hex("abc"), Error);
  EXPECT_THROW(DeviceId::from_hex(std::string(64, 'g')), Error);
}

TEST(DeviceId, HexDoesNotLeakPreimage) {
  const std::string raw = "secret-bluetooth-uuid";
  EXPECT_EQ(hash_identifier(raw).hex().find("secret"), std::string::npos);
}

TEST(Health, Transitions) {
  EXPECT_TRUE(is_valid_transition(Health::susceptible, Health::infected));
  EXPECT_TRUE(is_valid_transition(Health::infected, Health::recovered));
  EXPECT_FALSE(is_valid_transition(Health::susceptible, Health::recovered));
  EXPECT_FALSE(is_valid_transition(Health::recovered, Health::infected));
  EXPECT_FALSE(is_valid_transition(Health::infected, Health::susceptible));
  EXPECT_FALSE(is_valid_transition(Health::infected, Health::infected));
}

TEST(Health, ParseRoundTrip) {
  for (auto h : {Health::susceptible, Health::infected, Health::recovered}) {
    EXPECT_EQ(parse_health(to_string(h)), h);
  }
  EXPECT_EQ(parse_health("I"), Health::infected);
  EXPECT_THROW(parse_health("zombie"), Error);
}

TEST(Quarantine, HalfOpenWindow) {
  const Quarantine q{5, 15};
  EXPECT_FALSE(q.active_on(4));
  EXPECT_TRUE(q.active_on(5));
  EXPECT_TRUE(q.active_on(14));
  EXPECT_FALSE(q.active_on(15));
  EXPECT_EQ(q.end_day - q.start_day, kDefaultQuarantineDays);
}

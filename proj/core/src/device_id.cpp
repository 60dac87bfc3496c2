#include "proxtrace/device_id.hpp"

#include <openssl/evp.h>

#include "proxtrace/error.hpp"

namespace proxtrace {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::validation: return "validation";
    case Errc::no_data: return "no_data";
    case Errc::out_of_range: return "out_of_range";
    case Errc::lookup: return "lookup";
    case Errc::authorization: return "authorization";
    case Errc::invalid_otc: return "invalid_otc";
    case Errc::otc_replay: return "otc_replay";
    case Errc::already_registered: return "already_registered";
    case Errc::invalid_transition: return "invalid_transition";
    case Errc::parse: return "parse";
    case Errc::replay_mismatch: return "replay_mismatch";
  }
  return "unknown";
}

Digest sha256(std::span<const std::uint8_t> bytes) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != kDigestSize) {
    throw std::runtime_error("EVP_Digest(sha256) failed");
  }
  return out;
}

Digest sha256(std::string_view text) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

DeviceId DeviceId::from_hex(std::string_view hex) {
  if (hex.size() != kDigestSize * 2) {
    throw Error(Errc::parse, "device digest must be 64 hex characters, got " +
                                 std::to_string(hex.size()));
  }
  Digest d{};
  for (std::size_t i = 0; i < kDigestSize; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(Errc::parse, "invalid hex character in device digest");
    }
    d[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return DeviceId(d);
}

std::string DeviceId::hex() const { return to_hex(digest_); }

DeviceId hash_identifier(std::string_view raw_id) {
  return hash_identifier(raw_id, [](std::span<const std::uint8_t> b) { return sha256(b); });
}

DeviceId hash_identifier(std::string_view raw_id, const IdentifierHasher& hasher) {
  if (raw_id.empty()) {
    throw Error(Errc::validation, "raw device identifier must be non-empty");
  }
  return DeviceId::from_digest(
      hasher(std::span(reinterpret_cast<const std::uint8_t*>(raw_id.data()), raw_id.size())));
}

}  // namespace proxtrace

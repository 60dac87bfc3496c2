#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace proxtrace {

inline constexpr std::size_t kDigestSize = 32;
using Digest = std::array<std::uint8_t, kDigestSize>;

/// Maps a raw Bluetooth identifier to a fixed-width digest.
using IdentifierHasher = std::function<Digest(std::span<const std::uint8_t>)>;

/// SHA-256 of `bytes`.
Digest sha256(std::span<const std::uint8_t> bytes);
Digest sha256(std::string_view text);

/// Opaque device identity. Only the digest of the raw identifier is kept;
/// there is no way back to the pre-image.
class DeviceId {
 public:
  DeviceId() = default;

  static DeviceId from_digest(const Digest& digest) { return DeviceId(digest); }
  /// Parses 64 lowercase or uppercase hex characters. Throws Error(parse).
  static DeviceId from_hex(std::string_view hex);

  const Digest& digest() const noexcept { return digest_; }
  std::string hex() const;

  friend bool operator==(const DeviceId&, const DeviceId&) = default;
  friend std::strong_ordering operator<=>(const DeviceId&, const DeviceId&) = default;

 private:
  explicit DeviceId(const Digest& digest) : digest_(digest) {}

  Digest digest_{};
};

/// Hashes a raw device identifier. Throws Error(validation) on empty input.
DeviceId hash_identifier(std::string_view raw_id);
DeviceId hash_identifier(std::string_view raw_id, const IdentifierHasher& hasher);

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace proxtrace

template <>
struct std::hash<proxtrace::DeviceId> {
  std::size_t operator()(const proxtrace::DeviceId& id) const noexcept {
    std::size_t h = 0;
    std::memcpy(&h, id.digest().data(), sizeof(h));
    return h;
  }
};

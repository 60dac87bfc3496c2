#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace proxtrace {

/// Whole-day simulation index.
using Day = std::int32_t;

inline constexpr Day kDefaultQuarantineDays = 10;

enum class Health : std::uint8_t { susceptible, infected, recovered };

std::string_view to_string(Health h) noexcept;
/// Accepts "susceptible"/"infected"/"recovered" (or S/I/R). Throws Error(parse).
Health parse_health(std::string_view text);

/// Only S -> I and I -> R are allowed.
constexpr bool is_valid_transition(Health from, Health to) noexcept {
  return (from == Health::susceptible && to == Health::infected) ||
         (from == Health::infected && to == Health::recovered);
}

/// Half-open quarantine window: the device is isolated on days [start_day, end_day).
struct Quarantine {
  Day start_day = 0;
  Day end_day = 0;

  constexpr bool active_on(Day day) const noexcept { return start_day <= day && day < end_day; }
  friend bool operator==(const Quarantine&, const Quarantine&) = default;
};

struct HealthStatus {
  Health state = Health::susceptible;
  std::optional<Quarantine> quarantine;

  bool quarantined_on(Day day) const noexcept { return quarantine && quarantine->active_on(day); }
  friend bool operator==(const HealthStatus&, const HealthStatus&) = default;
};

/// Risk categories of nearby individuals, highest risk first.
enum class Category : std::uint8_t {
  A = 0,  // infected
  B = 1,  // contact of an infected individual
  C = 2,  // contact of a contact
  D = 3,  // random
};

inline constexpr std::size_t kDefaultCategoryCount = 4;

/// Zero-based position in a weight vector; the generalised form admits K categories.
using CategoryIndex = std::size_t;

constexpr CategoryIndex index_of(Category c) noexcept { return static_cast<CategoryIndex>(c); }

}  // namespace proxtrace

#include "proxtrace/health.hpp"

#include <string>

#include "proxtrace/error.hpp"

namespace proxtrace {

std::string_view to_string(Health h) noexcept {
  switch (h) {
    case Health::susceptible: return "susceptible";
    case Health::infected: return "infected";
    case Health::recovered: return "recovered";
  }
  return "unknown";
}

Health parse_health(std::string_view text) {
  if (text == "susceptible" || text == "S") return Health::susceptible;
  if (text == "infected" || text == "I") return Health::infected;
  if (text == "recovered" || text == "R") return Health::recovered;
  throw Error(Errc::parse, "unknown health status '" + std::string(text) + "'");
}

}  // namespace proxtrace

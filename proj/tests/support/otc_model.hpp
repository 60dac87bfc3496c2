#pragma once

// Randomised model check of one-time-code linearity against a plain set model.

#include <cstdint>
#include <string>

namespace oracle {

struct ModelCheckResult {
  bool ok = true;
  std::string failure;
  std::size_t operations = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

ModelCheckResult check_otc_linearity(std::uint64_t seed, std::size_t operations);

}  // namespace oracle

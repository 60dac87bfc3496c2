#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proxtrace {

enum class Errc {
  validation,
  no_data,
  out_of_range,
  lookup,
  authorization,
  invalid_otc,
  otc_replay,
  already_registered,
  invalid_transition,
  parse,
  replay_mismatch,
};

/// Stable lowercase name, used in event logs and CLI diagnostics.
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace proxtrace

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordapprox/exactnum.hpp"

namespace ordapprox {

struct Config {
  unsigned precision_digits = 200;
  std::size_t decay_window = 5;
  std::optional<BigRat> decay_tolerance;
  std::size_t digit_budget = 100000;
  BigInt seed_bound{1000};
  BigInt orbit_search_bound{1000000};

  friend bool operator==(const Config&, const Config&) = default;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// key=value lines, '#' comments. Throws UsageError on unknown keys or bad values.
Config parse_config(const std::string& text, Config base = {});
std::string config_text(const Config& c);

inline constexpr const char* kConfigEnv = "ORDAPPROX_CONFIG";

/// Runs one command; returns the process exit code (0 ok, 1 domain error, 2 usage error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordapprox

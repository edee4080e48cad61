#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gradkit/harness.hpp"

namespace gradkit {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain-text key = value document with [problem], [run], and one
// [optimizer.<name>] block per algorithm to compare. Unknown sections, keys,
// and malformed values are rejected naming the offender; missing keys fall
// back to the library defaults.
struct CliConfig {
  ProblemSpec problem;
  Schedule schedule;
  std::int64_t epochs = 50;
  std::int64_t batch_size = 128;
  std::uint64_t seed = 42;
  Granularity granularity = Granularity::per_step;
  double loss_threshold = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<Algo, HyperParams>> optimizers;  // in file order
};

CliConfig parse_config_text(const std::string& text);
CliConfig load_config(const std::string& path);  // I/O failures are not ConfigError

std::vector<RunConfig> to_run_configs(const CliConfig& cfg);

}  // namespace gradkit

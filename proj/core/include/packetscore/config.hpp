#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "packetscore/generator.hpp"
#include "packetscore/pipeline.hpp"

namespace packetscore {

/// Flat `key = value` text config. `#` starts a comment; blank lines are
/// ignored; duplicate keys are an error. See configs/example.cfg for the
/// documented key set.
class KeyValueConfig {
public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_text(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;
  std::optional<std::string> raw(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;

  /// Throwing variants for keys that must be present.
  std::string require_string(const std::string& key) const;
  double require_double(const std::string& key) const;

  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

private:
  std::string origin_;  // for error messages
  std::map<std::string, std::string> values_;
};

/// Engine settings shared by all commands: bucketing, floor, CDF bins,
/// period rule, capacity.
struct RunSettings {
  PipelineConfig pipeline;
  PeriodConfig period;
  double target_capacity_pps = 1000.0;
  double max_utilization = 1.0;
  std::uint64_t seed = 1;
};

RunSettings parse_run_settings(const KeyValueConfig& cfg);

/// One synthetic-traffic experiment: a legitimate model plus attack
/// streams over a fixed horizon.
struct Scenario {
  LegitModel legit;
  std::vector<AttackModel> attacks;
  double duration_seconds = 0.0;
};

/// Reads legit.* and attack.<n>.* keys. `master_seed` (the `seed` key, or
/// the --seed override) fills any stream seed not given explicitly:
/// legit.seed defaults to it, attack.<n>.seed to master_seed + n + 1.
Scenario parse_scenario(const KeyValueConfig& cfg, std::uint64_t master_seed);

}  // namespace packetscore

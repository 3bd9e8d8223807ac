#pragma once

// Seeded verification campaigns. A config fully determines a report (up to
// timing fields): trial i draws from its own stream derive_seed(seed, i), so
// serial and threaded runs agree.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace knaster::lab {

using nlohmann::json;

struct ExperimentConfig {
  std::string suite;
  std::string primes = "all2";
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  json params = json::object();
  std::string output;
  std::optional<std::uint64_t> replay_trial_seed;  ///< run one trial with exactly this seed
  std::uint64_t replay_index = 0;                  ///< trial index reported for a replay
  unsigned jobs = 1;

  /// KNASTER_LAB_SEED, when set, overrides the seed.
  static ExperimentConfig from_json(const json& j, bool apply_env = true);
  json to_json() const;
};

struct TrialRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  bool passed = false;
  std::string verdict;  ///< short outcome label
  json detail = json::object();
  double millis = 0;
};

struct CampaignReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  double seconds = 0;

  bool all_passed() const { return failed == 0 && !trials.empty(); }
  json to_json(bool timing = true) const;
  std::string table() const;
  /// Standalone configs reproducing each failed trial.
  std::vector<std::pair<std::uint64_t, json>> replays() const;
};

const std::vector<std::string>& suite_names();
CampaignReport run_campaign(const ExperimentConfig& config);

}  // namespace knaster::lab

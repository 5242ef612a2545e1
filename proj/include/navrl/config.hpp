#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "navrl/agents.hpp"
#include "navrl/reward.hpp"
#include "navrl/sim_env.hpp"

namespace navrl {

struct RunConfig {
  StageSpec stage = stage_build("stageA");
  Algo algo = Algo::Td3;
  int episodes = 4000;
  std::uint64_t seed = 0;
  AgentConfig agent;
  std::optional<ObjectiveWeights> morl_weights;
  std::filesystem::path output_dir = "runs";
  int eval_episodes = 100;
  int checkpoint_every = 500;
  // Weight sweeps train each cell for sweep_episodes instead of `episodes`.
  int sweep_episodes = 800;
  int sweep_workers = 1;

  /// Throws ValidationError naming the offending key.
  void validate() const;
};

/// Flat key=value format: one entry per line, '#' starts a comment, dotted keys
/// (agent.gamma=0.99). Missing keys keep their defaults; unknown keys throw
/// UnknownKey; malformed values throw ParseError with the line number.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");

/// Canonical text that parse_config_text reads back to an equal configuration.
std::string to_config_text(const RunConfig& config);

}  // namespace navrl

#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "navrl/config.hpp"
#include "navrl/pareto.hpp"

namespace navrl {

struct EpisodeRecord {
  int episode = 0;
  double total_reward = 0.0;
  RewardVector total_reward_vector{0.0, 0.0, 0.0, 0.0};
  int steps = 0;
  EpisodeStatus status = EpisodeStatus::Ongoing;
  double mean_critic_loss = 0.0;  // NaN when the episode ran no updates
  double mean_actor_loss = 0.0;   // NaN when no actor step happened
  double explore = 0.0;           // epsilon (DQN) or sigma
};

struct EvalReport {
  double success_rate = 0.0;
  double collision_rate = 0.0;
  double timeout_rate = 0.0;
  double mean_total_reward = 0.0;
  Eigen::Vector4d mean_objective_vector = Eigen::Vector4d::Zero();
  int episodes = 0;
};

inline constexpr const char* kMetricsHeader =
    "episode,total_reward,r_goal,r_safety,r_motion,r_time,steps,status,critic_loss,actor_loss,explore";
inline constexpr const char* kArchiveHeader =
    "weight_1,weight_2,weight_3,weight_4,seed,obj_1,obj_2,obj_3,obj_4,on_front,checkpoint_path";
inline constexpr std::uint64_t kEvalSeedOffset = 1'000'000;

std::string format_metrics_row(const EpisodeRecord& r);
/// Throws ParseError with path and line on malformed input.
std::vector<EpisodeRecord> read_metrics_csv(const std::filesystem::path& path);

/// Trains config.episodes episodes, writing output_dir/metrics.csv (flushed per
/// episode), output_dir/checkpoint_epNNNNN.ckpt every checkpoint_every episodes
/// and output_dir/checkpoint_final.ckpt.
std::vector<EpisodeRecord> run_training(const RunConfig& config);

std::filesystem::path final_checkpoint_path(const RunConfig& config);

/// Greedy, noise-free evaluation on seeds seed + 10^6 + i. Throws
/// IncompatibleCheckpoint when the checkpoint kind does not match config.algo.
EvalReport run_eval(const RunConfig& config, const std::filesystem::path& checkpoint);

using Policy = std::function<Action(const World&, const Observation&)>;
EvalReport run_eval_policy(const RunConfig& config, const Policy& policy);

/// Turns toward the goal and drives when roughly aligned. Reference policy for
/// obstacle-free arenas.
Action drive_to_goal_policy(const World& world, const Observation& obs);

struct SweepCell {
  ObjectiveWeights weights = ObjectiveWeights::Ones();
  std::uint64_t seed = 0;
  std::optional<Eigen::Vector4d> objectives;
  bool on_front = false;
  std::filesystem::path checkpoint;
  std::string error;
};

struct SweepResult {
  ParetoArchive archive{4};
  std::vector<SweepCell> cells;
  std::filesystem::path csv_path;
};

/// One MO-TD3 run per weight vector (seed = base seed + index, sweep_episodes
/// episodes, output under output_dir/cell_NNN), each evaluated and inserted
/// into a Pareto archive; writes output_dir/archive.csv. Failed cells are
/// recorded in the CSV and skipped.
SweepResult run_weight_sweep(const RunConfig& base, const std::vector<ObjectiveWeights>& grid);
/// Same, with an explicit seed per cell (used to replicate a cell exactly).
SweepResult run_weight_sweep(const RunConfig& base, const std::vector<ObjectiveWeights>& grid,
                             const std::vector<std::uint64_t>& seeds);

/// {0, 0.5, 1}^4 without the zero vector: 80 weight vectors.
std::vector<ObjectiveWeights> default_weight_grid();
/// One comma-separated weight vector per line; '#' comments allowed.
std::vector<ObjectiveWeights> read_weight_grid(const std::filesystem::path& path);

}  // namespace navrl

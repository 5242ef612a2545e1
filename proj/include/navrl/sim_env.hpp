#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "navrl/reward.hpp"

namespace navrl {

using Vec2 = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
};

namespace action_limits {
inline constexpr double kMaxLinear = 0.22;
inline constexpr double kMaxAngular = 2.0;
}  // namespace action_limits

struct Action {
  double linear = 0.0;
  double angular = 0.0;

  /// Clamps into [0, 0.22] x [-2, 2]; throws InvalidInput on non-finite values.
  Action clamped() const;
  bool operator==(const Action&) const = default;
};

struct StaticMotion {};

struct OscillatingMotion {
  Vec2 axis = Vec2::UnitX();  // unit vector
  double amplitude = 0.0;
  double period = 1.0;
  double phase = 0.0;
};

struct Obstacle {
  Vec2 center = Vec2::Zero();  // base position
  double radius = 0.1;
  std::variant<StaticMotion, OscillatingMotion> motion = StaticMotion{};

  bool is_static() const { return std::holds_alternative<StaticMotion>(motion); }
  Vec2 center_at(double t) const;
};

struct LidarSpec {
  int beams = 24;
  double max_range = 3.5;
};

struct StageSpec {
  std::string name;
  double arena_half_extent = 2.5;
  double wall_thickness = 0.05;
  std::vector<Obstacle> obstacles;
  double robot_radius = 0.105;
  double goal_radius = 0.20;
  int time_limit = 500;
  double dt = 0.1;
  LidarSpec lidar;

  /// Coordinate of the inner wall faces: the free region is |x|, |y| < inner_extent().
  double inner_extent() const { return arena_half_extent - wall_thickness; }

  /// Throws ValidationError when a field invariant is violated.
  void validate() const;
};

/// Presets: stage0 (empty), stageA (3 static + 4 moving), stageB (6 moving).
/// Throws NotFound for any other name.
StageSpec stage_build(const std::string& name);

struct Observation {
  std::vector<double> lidar_ranges;
  double goal_dist = 0.0;
  double goal_angle = 0.0;
  Action prev_action;
};

struct StepInfo {
  RewardInput reward_input;
  EpisodeStatus status = EpisodeStatus::Ongoing;
  bool done = false;
};

struct StepResult {
  Observation observation;
  StepInfo info;
};

struct GoalPolar {
  double distance = 0.0;
  double angle = 0.0;
};

GoalPolar goal_polar(const Pose& robot, const Vec2& goal);

/// Distance along a ray from `origin` in direction `dir` (unit) to the first
/// obstacle circle or wall face, clamped to max_range. Zero when the origin
/// already lies inside an obstacle or outside the free region.
double cast_ray(const StageSpec& spec, double sim_time, const Vec2& origin, const Vec2& dir,
                double max_range);

/// Surface distance from `p` to the nearest obstacle or wall face, clamped at 0.
double min_obstacle_distance(const StageSpec& spec, double sim_time, const Vec2& p);

/// Surface distance to the nearest wall face only, clamped at 0.
double wall_distance(const StageSpec& spec, const Vec2& p);

/// Deterministic kinematic navigation environment. Copyable value type.
class World {
 public:
  explicit World(StageSpec spec);

  /// Samples a collision-free start pose and goal from `seed`. Throws
  /// PlacementFailed after 1000 rejected samples.
  Observation reset(std::uint64_t seed);

  /// Places robot and goal explicitly (tests, scripted scenarios) and starts an episode.
  Observation place(const Pose& robot, const Vec2& goal);

  /// Advances obstacles and robot by one dt. Throws EpisodeFinished when done.
  StepResult step(const Action& action);

  Observation observe() const;

  const StageSpec& spec() const { return spec_; }
  const Pose& robot() const { return robot_; }
  const Vec2& goal() const { return goal_; }
  double goal_dist_initial() const { return goal_dist_initial_; }
  double sim_time() const { return sim_time_; }
  int step_count() const { return step_count_; }
  EpisodeStatus status() const { return status_; }
  bool done() const { return status_ != EpisodeStatus::Ongoing; }

 private:
  EpisodeStatus classify() const;

  StageSpec spec_;
  Pose robot_;
  Vec2 goal_ = Vec2::Zero();
  double goal_dist_initial_ = 0.0;
  double sim_time_ = 0.0;
  int step_count_ = 0;
  std::mt19937_64 rng_;
  EpisodeStatus status_ = EpisodeStatus::Timeout;  // no episode started yet
  Action prev_action_;
};

std::vector<double> lidar_scan(const World& world);
double min_obstacle_distance(const World& world);

/// Normalised feature vector fed to the agents: lidar / max_range, goal distance
/// over the arena diagonal, goal angle / pi, previous action scaled to [-1, 1].
Eigen::VectorXd observation_features(const Observation& obs, const StageSpec& spec);
int observation_size(const StageSpec& spec);

}  // namespace navrl

#pragma once

#include <Eigen/Core>
#include <string_view>

namespace navrl {

enum class EpisodeStatus { Ongoing, Success, CollisionObstacle, CollisionWall, Timeout };

std::string_view to_string(EpisodeStatus status);
EpisodeStatus parse_status(std::string_view name);

inline bool is_collision(EpisodeStatus s) {
  return s == EpisodeStatus::CollisionObstacle || s == EpisodeStatus::CollisionWall;
}
inline bool is_terminal(EpisodeStatus s) { return s != EpisodeStatus::Ongoing; }

namespace reward_constants {
inline constexpr double kSpeedReference = 0.22;     // m/s, step 5 constant
inline constexpr double kObstacleThreshold = 0.22;  // m, step 4 constant
inline constexpr double kObstaclePenalty = -20.0;
inline constexpr double kSuccessBonus = 2500.0;
inline constexpr double kCollisionPenalty = -2000.0;
inline constexpr double kStepPenalty = -1.0;
}  // namespace reward_constants

struct RewardInput {
  double action_linear = 0.0;
  double action_angular = 0.0;
  double goal_dist = 0.0;
  double goal_angle = 0.0;
  double goal_dist_initial = 1.0;
  double min_obstacle_dist = 0.0;
};

struct RewardTerms {
  double r_yaw = 0.0;
  double r_vangular = 0.0;
  double r_distance = 0.0;
  double r_obstacle = 0.0;
  double r_vlinear = 0.0;
};

/// Four objectives regrouping the scalar reward terms; unit weights recover
/// scalar_reward exactly.
struct RewardVector {
  double goal_seeking = 0.0;
  double safety = 0.0;
  double motion_efficiency = 0.0;
  double time = 0.0;

  Eigen::Vector4d values() const { return {goal_seeking, safety, motion_efficiency, time}; }
  static RewardVector from_values(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
  bool operator==(const RewardVector&) const = default;
};

using ObjectiveWeights = Eigen::Vector4d;

/// Throws InvalidInput on non-finite fields or violated input invariants.
RewardTerms reward_terms(const RewardInput& input);

double scalar_reward(const RewardTerms& terms, EpisodeStatus status);

RewardVector vector_reward(const RewardInput& input, EpisodeStatus status);

/// Throws InvalidWeights unless weights are finite, nonnegative, and not all zero.
void validate_weights(const ObjectiveWeights& weights);

/// Ordered dot product w0*v0 + w1*v1 + w2*v2 + w3*v3, accumulated left to right.
double scalarize(const RewardVector& vec, const ObjectiveWeights& weights);

}  // namespace navrl

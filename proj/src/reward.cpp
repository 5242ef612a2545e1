#include "navrl/reward.hpp"

#include <cmath>
#include <string>

#include "navrl/error.hpp"

namespace navrl {

namespace rc = reward_constants;

std::string_view to_string(EpisodeStatus status) {
  switch (status) {
    case EpisodeStatus::Ongoing: return "ONGOING";
    case EpisodeStatus::Success: return "SUCCESS";
    case EpisodeStatus::CollisionObstacle: return "COLLISION_OBSTACLE";
    case EpisodeStatus::CollisionWall: return "COLLISION_WALL";
    case EpisodeStatus::Timeout: return "TIMEOUT";
  }
  return "ONGOING";
}

EpisodeStatus parse_status(std::string_view name) {
  for (auto s : {EpisodeStatus::Ongoing, EpisodeStatus::Success, EpisodeStatus::CollisionObstacle,
                 EpisodeStatus::CollisionWall, EpisodeStatus::Timeout}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::ParseError, "unknown episode status '" + std::string(name) + "'");
}

namespace {

void check_input(const RewardInput& in) {
  const double fields[] = {in.action_linear, in.action_angular,    in.goal_dist,
                           in.goal_angle,    in.goal_dist_initial, in.min_obstacle_dist};
  for (double f : fields) {
    if (!std::isfinite(f)) throw Error(ErrorCode::InvalidInput, "non-finite reward input");
  }
  if (!(in.goal_dist_initial > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "goal_dist_initial must be > 0");
  }
  if (in.goal_dist < 0.0 || in.min_obstacle_dist < 0.0) {
    throw Error(ErrorCode::InvalidInput, "distances must be >= 0");
  }
}

double terminal_bonus(EpisodeStatus status) {
  if (status == EpisodeStatus::Success) return rc::kSuccessBonus;
  if (is_collision(status)) return rc::kCollisionPenalty;
  return 0.0;
}

}  // namespace

RewardTerms reward_terms(const RewardInput& in) {
  check_input(in);
  RewardTerms t;
  t.r_yaw = -1.0 * std::abs(in.goal_angle);
  t.r_vangular = -1.0 * (in.action_angular * in.action_angular);
  t.r_distance =
      0.5 * (2.0 * in.goal_dist_initial / (in.goal_dist_initial + in.goal_dist) - 1.0);
  t.r_obstacle = in.min_obstacle_dist < rc::kObstacleThreshold ? rc::kObstaclePenalty : 0.0;
  const double speed_gap = (rc::kSpeedReference - in.action_linear) * 10.0;
  t.r_vlinear = -2.0 * (speed_gap * speed_gap);
  return t;
}

// Summation is grouped by objective (goal, safety, motion, time) so that the
// unit-weight scalarization of vector_reward reproduces this value bit for bit.
double scalar_reward(const RewardTerms& t, EpisodeStatus status) {
  double goal = t.r_yaw + t.r_distance;
  double safety = t.r_obstacle;
  if (status == EpisodeStatus::Success) goal += rc::kSuccessBonus;
  if (is_collision(status)) safety += rc::kCollisionPenalty;
  const double motion = t.r_vlinear + t.r_vangular;
  return ((goal + safety) + motion) + rc::kStepPenalty;
}

RewardVector vector_reward(const RewardInput& input, EpisodeStatus status) {
  const RewardTerms t = reward_terms(input);
  RewardVector v;
  v.goal_seeking = t.r_yaw + t.r_distance;
  v.safety = t.r_obstacle;
  if (status == EpisodeStatus::Success) v.goal_seeking += terminal_bonus(status);
  if (is_collision(status)) v.safety += terminal_bonus(status);
  v.motion_efficiency = t.r_vlinear + t.r_vangular;
  v.time = rc::kStepPenalty;
  return v;
}

void validate_weights(const ObjectiveWeights& w) {
  bool any_positive = false;
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0) {
      throw Error(ErrorCode::InvalidWeights, "weights must be finite and nonnegative");
    }
    any_positive = any_positive || w[i] > 0.0;
  }
  if (!any_positive) throw Error(ErrorCode::InvalidWeights, "weights must not all be zero");
}

double scalarize(const RewardVector& vec, const ObjectiveWeights& w) {
  validate_weights(w);
  // Explicit left-to-right accumulation; Eigen's dot may reassociate.
  double acc = w[0] * vec.goal_seeking;
  acc += w[1] * vec.safety;
  acc += w[2] * vec.motion_efficiency;
  acc += w[3] * vec.time;
  return acc;
}

}  // namespace navrl

#include "navrl/sim_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "navrl/error.hpp"

namespace navrl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxPlacementTries = 1000;
constexpr double kRobotClearanceSlack = 0.05;
constexpr double kMinStartGoalSeparation = 1.0;
// Start and goal keep this distance from the wall faces.
constexpr double kPlacementWallMargin = 0.3;

Obstacle fixed(double x, double y, double r) { return Obstacle{{x, y}, r, StaticMotion{}}; }

Obstacle oscillating(double x, double y, double r, Vec2 axis, double phase) {
  return Obstacle{{x, y}, r, OscillatingMotion{axis.normalized(), 0.8, 8.0, phase}};
}

}  // namespace

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Action Action::clamped() const {
  if (!std::isfinite(linear) || !std::isfinite(angular)) {
    throw Error(ErrorCode::InvalidInput, "non-finite action");
  }
  return {std::clamp(linear, 0.0, action_limits::kMaxLinear),
          std::clamp(angular, -action_limits::kMaxAngular, action_limits::kMaxAngular)};
}

Vec2 Obstacle::center_at(double t) const {
  if (const auto* osc = std::get_if<OscillatingMotion>(&motion)) {
    return center + osc->axis * (osc->amplitude * std::sin(2.0 * kPi * t / osc->period + osc->phase));
  }
  return center;
}

void StageSpec::validate() const {
  auto fail = [this](const std::string& why) {
    throw Error(ErrorCode::ValidationError, "stage '" + name + "': " + why);
  };
  if (!(arena_half_extent > 0.0) || !(wall_thickness >= 0.0) || !(inner_extent() > 0.0)) {
    fail("arena extent must exceed wall thickness");
  }
  if (time_limit < 1) fail("time_limit must be >= 1");
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (lidar.beams < 3) fail("lidar beams must be >= 3");
  if (!(lidar.max_range > 0.0)) fail("lidar max_range must be > 0");
  if (!(goal_radius > 0.0)) fail("goal_radius must be > 0");
  if (!(robot_radius > 0.0)) fail("robot_radius must be > 0");
  const double inner = inner_extent();
  for (const auto& ob : obstacles) {
    if (!(ob.radius > 0.0)) fail("obstacle radius must be > 0");
    Vec2 reach = Vec2::Constant(ob.radius);
    if (const auto* osc = std::get_if<OscillatingMotion>(&ob.motion)) {
      if (!(osc->period > 0.0)) fail("oscillation period must be > 0");
      if (std::abs(osc->axis.norm() - 1.0) > 1e-9) fail("oscillation axis must be a unit vector");
      reach += osc->axis.cwiseAbs() * std::abs(osc->amplitude);
    }
    if (std::abs(ob.center.x()) + reach.x() > inner || std::abs(ob.center.y()) + reach.y() > inner) {
      fail("obstacle leaves the arena");
    }
  }
}

StageSpec stage_build(const std::string& name) {
  StageSpec spec;
  spec.name = name;
  if (name == "stage0") {
    // no obstacles
  } else if (name == "stageA") {
    spec.obstacles = {
        fixed(-1.2, 1.0, 0.3),
        fixed(1.2, 1.0, 0.3),
        fixed(0.0, -1.3, 0.3),
        oscillating(0.0, 1.0, 0.15, Vec2::UnitX(), 0.0),
        oscillating(-1.6, -0.6, 0.15, Vec2::UnitY(), 0.5 * kPi),
        oscillating(1.6, -0.6, 0.15, Vec2::UnitY(), kPi),
        oscillating(0.0, 0.0, 0.15, Vec2(1.0, 1.0), 1.5 * kPi),
    };
  } else if (name == "stageB") {
    spec.obstacles = {
        oscillating(-1.0, 1.5, 0.15, Vec2::UnitX(), 0.0),
        oscillating(1.0, 1.5, 0.15, Vec2::UnitX(), kPi),
        oscillating(-1.0, -1.5, 0.15, Vec2::UnitX(), 0.5 * kPi),
        oscillating(1.0, -1.5, 0.15, Vec2::UnitX(), 1.5 * kPi),
        oscillating(-1.5, 0.0, 0.15, Vec2::UnitY(), kPi / 3.0),
        oscillating(1.5, 0.0, 0.15, Vec2::UnitY(), 4.0 * kPi / 3.0),
    };
  } else {
    throw Error(ErrorCode::NotFound, "unknown stage '" + name + "'");
  }
  spec.validate();
  return spec;
}

GoalPolar goal_polar(const Pose& robot, const Vec2& goal) {
  const double dx = goal.x() - robot.x;
  const double dy = goal.y() - robot.y;
  return {std::hypot(dx, dy), wrap_angle(std::atan2(dy, dx) - robot.theta)};
}

double wall_distance(const StageSpec& spec, const Vec2& p) {
  const double inner = spec.inner_extent();
  return std::max(0.0, std::min(inner - std::abs(p.x()), inner - std::abs(p.y())));
}

double min_obstacle_distance(const StageSpec& spec, double sim_time, const Vec2& p) {
  double best = wall_distance(spec, p);
  for (const auto& ob : spec.obstacles) {
    best = std::min(best, std::max(0.0, (p - ob.center_at(sim_time)).norm() - ob.radius));
  }
  return best;
}

double cast_ray(const StageSpec& spec, double sim_time, const Vec2& origin, const Vec2& dir,
                double max_range) {
  const double inner = spec.inner_extent();
  if (std::abs(origin.x()) >= inner || std::abs(origin.y()) >= inner) return 0.0;

  // Exit through the wall faces; the free region is convex so the first face
  // crossed is the nearest wall segment hit.
  double best = max_range;
  if (dir.x() > 0.0) best = std::min(best, (inner - origin.x()) / dir.x());
  if (dir.x() < 0.0) best = std::min(best, (-inner - origin.x()) / dir.x());
  if (dir.y() > 0.0) best = std::min(best, (inner - origin.y()) / dir.y());
  if (dir.y() < 0.0) best = std::min(best, (-inner - origin.y()) / dir.y());

  for (const auto& ob : spec.obstacles) {
    const Vec2 oc = origin - ob.center_at(sim_time);
    const double c = oc.squaredNorm() - ob.radius * ob.radius;
    if (c <= 0.0) return 0.0;
    const double b = oc.dot(dir);
    if (b >= 0.0) continue;  // circle is behind or beside the origin
    const double disc = b * b - c;
    if (disc < 0.0) continue;
    const double t = -b - std::sqrt(disc);
    best = std::min(best, t);
  }
  return std::clamp(best, 0.0, max_range);
}

World::World(StageSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Observation World::reset(std::uint64_t seed) {
  rng_.seed(seed);
  const double half = spec_.inner_extent() - kPlacementWallMargin;
  if (!(half > 0.0)) throw Error(ErrorCode::PlacementFailed, "arena too small for placement");
  std::uniform_real_distribution<double> coord(-half, half);
  std::uniform_real_distribution<double> heading(-kPi, kPi);

  auto clearance = [this](const Vec2& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ob : spec_.obstacles) {
      best = std::min(best, (p - ob.center_at(0.0)).norm() - ob.radius);
    }
    return best;
  };

  for (int attempt = 0; attempt < kMaxPlacementTries; ++attempt) {
    const Vec2 start(coord(rng_), coord(rng_));
    const double theta = heading(rng_);
    const Vec2 goal(coord(rng_), coord(rng_));
    if (clearance(start) < spec_.robot_radius + kRobotClearanceSlack) continue;
    if (clearance(goal) < spec_.goal_radius) continue;
    if ((start - goal).norm() < kMinStartGoalSeparation) continue;
    return place({start.x(), start.y(), wrap_angle(theta)}, goal);
  }
  throw Error(ErrorCode::PlacementFailed,
              "no valid placement after " + std::to_string(kMaxPlacementTries) + " samples");
}

Observation World::place(const Pose& robot, const Vec2& goal) {
  robot_ = robot;
  robot_.theta = wrap_angle(robot.theta);
  goal_ = goal;
  goal_dist_initial_ = (robot_.position() - goal_).norm();
  sim_time_ = 0.0;
  step_count_ = 0;
  status_ = EpisodeStatus::Ongoing;
  prev_action_ = Action{};
  return observe();
}

EpisodeStatus World::classify() const {
  const Vec2 p = robot_.position();
  for (const auto& ob : spec_.obstacles) {
    if ((p - ob.center_at(sim_time_)).norm() - ob.radius < spec_.robot_radius) {
      return EpisodeStatus::CollisionObstacle;
    }
  }
  if (wall_distance(spec_, p) < spec_.robot_radius) return EpisodeStatus::CollisionWall;
  if ((p - goal_).norm() < spec_.goal_radius) return EpisodeStatus::Success;
  if (step_count_ >= spec_.time_limit) return EpisodeStatus::Timeout;
  return EpisodeStatus::Ongoing;
}

StepResult World::step(const Action& action) {
  if (done()) throw Error(ErrorCode::EpisodeFinished, "step called on a finished episode");
  const Action a = action.clamped();

  // Obstacles are evaluated at sim_time, so advancing the clock moves them.
  robot_.x += a.linear * std::cos(robot_.theta) * spec_.dt;
  robot_.y += a.linear * std::sin(robot_.theta) * spec_.dt;
  robot_.theta = wrap_angle(robot_.theta + a.angular * spec_.dt);
  sim_time_ += spec_.dt;
  step_count_ += 1;
  prev_action_ = a;
  status_ = classify();

  StepResult out;
  out.observation = observe();
  out.info.status = status_;
  out.info.done = done();
  out.info.reward_input = RewardInput{a.linear,
                                      a.angular,
                                      out.observation.goal_dist,
                                      out.observation.goal_angle,
                                      goal_dist_initial_,
                                      min_obstacle_distance(*this)};
  return out;
}

Observation World::observe() const {
  Observation obs;
  obs.lidar_ranges = lidar_scan(*this);
  const GoalPolar gp = goal_polar(robot_, goal_);
  obs.goal_dist = gp.distance;
  obs.goal_angle = gp.angle;
  obs.prev_action = prev_action_;
  return obs;
}

std::vector<double> lidar_scan(const World& world) {
  const StageSpec& spec = world.spec();
  const Pose& pose = world.robot();
  std::vector<double> ranges(static_cast<std::size_t>(spec.lidar.beams));
  for (int i = 0; i < spec.lidar.beams; ++i) {
    const double angle = pose.theta + 2.0 * kPi * i / spec.lidar.beams;
    ranges[static_cast<std::size_t>(i)] =
        cast_ray(spec, world.sim_time(), pose.position(), Vec2(std::cos(angle), std::sin(angle)),
                 spec.lidar.max_range);
  }
  return ranges;
}

double min_obstacle_distance(const World& world) {
  return min_obstacle_distance(world.spec(), world.sim_time(), world.robot().position());
}

int observation_size(const StageSpec& spec) { return spec.lidar.beams + 4; }

Eigen::VectorXd observation_features(const Observation& obs, const StageSpec& spec) {
  const int beams = spec.lidar.beams;
  Eigen::VectorXd f(observation_size(spec));
  for (int i = 0; i < beams; ++i) {
    f[i] = obs.lidar_ranges[static_cast<std::size_t>(i)] / spec.lidar.max_range;
  }
  f[beams] = obs.goal_dist / (2.0 * std::sqrt(2.0) * spec.arena_half_extent);
  f[beams + 1] = obs.goal_angle / kPi;
  f[beams + 2] = 2.0 * obs.prev_action.linear / action_limits::kMaxLinear - 1.0;
  f[beams + 3] = obs.prev_action.angular / action_limits::kMaxAngular;
  return f;
}

}  // namespace navrl

#pragma once

// Synthetic replay data shared by agent tests and the acceptance suite.

#include <Eigen/Core>
#include <random>

#include "navrl/agents.hpp"
#include "navrl/replay_buffer.hpp"
#include "navrl/reward.hpp"

namespace navrl::fixture {

struct RandomStep {
  RewardInput input;
  EpisodeStatus status = EpisodeStatus::Ongoing;
};

inline RandomStep random_step(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomStep s;
  s.input = RewardInput{0.22 * u(rng), 4 * u(rng) - 2, 5 * u(rng), 6.2 * u(rng) - 3.1,
                        0.2 + 5 * u(rng), u(rng)};
  const double roll = u(rng);
  s.status = roll < 0.85   ? EpisodeStatus::Ongoing
             : roll < 0.9  ? EpisodeStatus::Success
             : roll < 0.94 ? EpisodeStatus::CollisionObstacle
             : roll < 0.97 ? EpisodeStatus::CollisionWall
                           : EpisodeStatus::Timeout;
  return s;
}

/// Fills two buffers from the same random stream: one with scalar rewards and
/// one with the matching vector rewards. States and actions lie in [-1, 1].
inline void fill_twin_buffers(int observation_size, std::size_t count, std::mt19937_64& rng,
                              ReplayBuffer& scalar, ReplayBuffer& vector) {
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    Transition t;
    t.state = Eigen::VectorXd::NullaryExpr(observation_size, [&] { return sym(rng); });
    t.action = Eigen::VectorXd::NullaryExpr(2, [&] { return sym(rng); });
    t.next_state = Eigen::VectorXd::NullaryExpr(observation_size, [&] { return sym(rng); });
    const RandomStep s = random_step(rng);
    t.status = s.status;
    t.done = is_terminal(s.status);
    Transition v = t;
    t.reward = scalar_reward(reward_terms(s.input), s.status);
    v.reward = vector_reward(s.input, s.status);
    scalar.push(std::move(t));
    vector.push(std::move(v));
  }
}

inline ReplayBuffer scalar_buffer(int observation_size, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ReplayBuffer s(count);
  ReplayBuffer v(count);
  fill_twin_buffers(observation_size, count, rng, s, v);
  return s;
}

/// Small agent settings so unit tests stay fast.
inline AgentConfig small_config() {
  AgentConfig c;
  c.hidden = {16, 16};
  c.batch_size = 16;
  c.buffer_capacity = 1000;
  return c;
}

}  // namespace navrl::fixture

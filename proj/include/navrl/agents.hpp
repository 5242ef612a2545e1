#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "navrl/checkpoint.hpp"
#include "navrl/mlp.hpp"
#include "navrl/replay_buffer.hpp"
#include "navrl/reward.hpp"
#include "navrl/sim_env.hpp"

namespace navrl {

enum class Algo { Dqn, Ddpg, Td3, MoTd3 };

std::string_view to_string(Algo algo);
Algo parse_algo(std::string_view name);

struct Td3Settings {
  double policy_noise = 0.2;
  double noise_clip = 0.5;
  int policy_delay = 2;
};

struct AgentConfig {
  double gamma = 0.99;
  double tau = 0.005;
  std::size_t batch_size = 64;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  std::vector<int> hidden{64, 64};
  std::size_t buffer_capacity = 100000;
  std::size_t warmup_steps = 1000;
  // DQN epsilon schedule: linear from start to end over the first fraction of episodes.
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.2;
  // Gaussian exploration noise for DDPG/TD3, in normalised action units.
  double sigma = 0.1;
  Td3Settings td3;
  double dqn_linear = 0.22;
  std::vector<double> dqn_angular{-1.5, -0.75, 0.0, 0.75, 1.5};

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Discrete actions for DQN: fixed linear speed, one entry per angular bin.
std::vector<Action> discrete_actions(const AgentConfig& config);

/// Actor outputs live in [-1, 1]^2; this maps them onto the action box.
Action action_from_normalized(const Eigen::Vector2d& u);
Eigen::Vector2d normalized_from_action(const Action& a);

/// Hidden layers ReLU. Actor: Tanh head of width 2. Critic: (obs + 2) -> 1,
/// Identity head. Q-network: obs -> |actions|, Identity head.
Network make_actor_network(int observation_size, const std::vector<int>& hidden, std::uint64_t seed);
Network make_critic_network(int observation_size, const std::vector<int>& hidden, std::uint64_t seed);
Network make_q_network(int observation_size, int action_count, const std::vector<int>& hidden,
                       std::uint64_t seed);

// ---------------------------------------------------------------- DQN

struct DqnAgent {
  AgentConfig config;
  std::vector<Action> actions;
  Network q;
  Network q_target;
  Adam optimizer;
  Rng rng;
  std::int64_t update_counter = 0;

  static DqnAgent create(int observation_size, const AgentConfig& config, std::uint64_t seed);
};

/// Lowest index among the maxima.
std::size_t greedy_index(const Eigen::VectorXd& q_values);

std::size_t dqn_select_action(const Network& q, const Eigen::VectorXd& state, double epsilon,
                              Rng& rng);

/// y_i = r_i if done_i else r_i + gamma * max_a q_target(s'_i)(a). Scalar batches only.
Eigen::VectorXd dqn_td_target(const Batch& batch, const Network& q_target, double gamma);

/// One Adam step on the MSE between q(s)(a_taken) and the TD targets; returns the
/// loss before the step. Targets track the online net by soft_update(tau).
double dqn_update(DqnAgent& agent, const ReplayBuffer& buffer);
double dqn_update_batch(DqnAgent& agent, const Batch& batch);

// ---------------------------------------------------------------- DDPG

struct DdpgAgent {
  AgentConfig config;
  Network actor;
  Network actor_target;
  Network critic;
  Network critic_target;
  Adam actor_optimizer;
  Adam critic_optimizer;
  Rng rng;
  std::int64_t update_counter = 0;

  static DdpgAgent create(int observation_size, const AgentConfig& config, std::uint64_t seed);
};

struct ActorCriticLosses {
  double critic_loss = 0.0;
  std::optional<double> actor_loss;
};

/// Deterministic actor output plus N(0, sigma) noise per dimension, clamped to
/// [-1, 1]. Returned in normalised units.
Eigen::Vector2d actor_act(const Network& actor, const Eigen::VectorXd& state, double sigma,
                          Rng& rng);
Action ddpg_act(const DdpgAgent& agent, const Eigen::VectorXd& state, double sigma, Rng& rng);

/// Stacks states over actions as critic input.
Eigen::MatrixXd critic_input(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions);

/// Loss -mean critic(s, actor(s)) and its gradient w.r.t. the actor parameters
/// (the critic is held fixed).
struct ActorObjective {
  double loss = 0.0;
  Gradients actor_grads;
};
ActorObjective actor_objective(const Network& actor, const Network& critic,
                               const Eigen::MatrixXd& states);

/// MSE regression of `critic` onto `targets`; one Adam step, returns pre-step loss.
double critic_regression_step(Network& critic, Adam& optimizer, const Eigen::MatrixXd& inputs,
                              const Eigen::VectorXd& targets);

Eigen::VectorXd ddpg_td_target(const DdpgAgent& agent, const Batch& batch);
ActorCriticLosses ddpg_update(DdpgAgent& agent, const ReplayBuffer& buffer);
ActorCriticLosses ddpg_update_batch(DdpgAgent& agent, const Batch& batch);

// ---------------------------------------------------------------- TD3 / MO-TD3

struct Td3Agent {
  AgentConfig config;
  Network actor;
  Network actor_target;
  Network critic1;
  Network critic2;
  Network critic1_target;
  Network critic2_target;
  Adam actor_optimizer;
  Adam critic1_optimizer;
  Adam critic2_optimizer;
  Rng rng;
  std::int64_t update_counter = 0;

  static Td3Agent create(int observation_size, const AgentConfig& config, std::uint64_t seed);
};

struct Td3Targets {
  Eigen::VectorXd targets;     // with the min over twin critics
  Eigen::VectorXd critic1_only;
  Eigen::VectorXd critic2_only;
  Eigen::MatrixXd smoothed_actions;
};

/// Target-policy smoothing plus clipped double-Q targets. `rewards` are the
/// (already scalarised) per-sample rewards.
Td3Targets td3_td_target(const Td3Agent& agent, const Batch& batch,
                         const Eigen::VectorXd& rewards, double gamma, double policy_noise,
                         double noise_clip, Rng& rng);

/// Both critics regress every call; actor and all targets update when the
/// post-increment counter is a multiple of policy_delay.
ActorCriticLosses td3_update(Td3Agent& agent, const ReplayBuffer& buffer);
ActorCriticLosses td3_update_batch(Td3Agent& agent, const Batch& batch,
                                   const Eigen::VectorXd& rewards);

/// TD3 on a vector-reward buffer, scalarising with `weights` at update time.
/// Throws TagMismatch for scalar buffers, InvalidWeights for bad weights.
ActorCriticLosses motd3_update(Td3Agent& agent, const ReplayBuffer& buffer,
                               const ObjectiveWeights& weights);

// ---------------------------------------------------------------- checkpoints

Checkpoint to_checkpoint(const DqnAgent& agent);
Checkpoint to_checkpoint(const DdpgAgent& agent);
Checkpoint to_checkpoint(const Td3Agent& agent, Algo kind);

void put_config(Checkpoint& ckpt, const AgentConfig& config);
AgentConfig config_from_checkpoint(const Checkpoint& ckpt);

/// Throws IncompatibleCheckpoint when the stored kind differs from `expected`.
void require_kind(const Checkpoint& ckpt, Algo expected);

}  // namespace navrl

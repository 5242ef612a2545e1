#include <algorithm>

#include "navrl/agents.hpp"
#include "navrl/error.hpp"

namespace navrl {

Td3Agent Td3Agent::create(int observation_size, const AgentConfig& config, std::uint64_t seed) {
  config.validate();
  Td3Agent agent;
  agent.config = config;
  agent.actor = make_actor_network(observation_size, config.hidden, seed);
  agent.critic1 = make_critic_network(observation_size, config.hidden, seed + 1);
  agent.critic2 = make_critic_network(observation_size, config.hidden, seed + 2);
  agent.actor_target = agent.actor;
  agent.critic1_target = agent.critic1;
  agent.critic2_target = agent.critic2;
  agent.actor_optimizer = adam_init(agent.actor, config.actor_lr);
  agent.critic1_optimizer = adam_init(agent.critic1, config.critic_lr);
  agent.critic2_optimizer = adam_init(agent.critic2, config.critic_lr);
  agent.rng.seed(seed ^ 0x9e3779b97f4a7c15ULL);
  return agent;
}

Td3Targets td3_td_target(const Td3Agent& agent, const Batch& batch,
                         const Eigen::VectorXd& rewards, double gamma, double policy_noise,
                         double noise_clip, Rng& rng) {
  if (!(noise_clip >= 0.0)) throw Error(ErrorCode::InvalidInput, "noise_clip must be >= 0");
  if (!(policy_noise >= 0.0)) throw Error(ErrorCode::InvalidInput, "policy_noise must be >= 0");
  if (rewards.size() != batch.size()) throw Error(ErrorCode::ShapeError, "reward count mismatch");

  Td3Targets out;
  out.smoothed_actions = forward(agent.actor_target, batch.next_states);
  if (policy_noise > 0.0) {
    std::normal_distribution<double> noise(0.0, policy_noise);
    for (Eigen::Index c = 0; c < out.smoothed_actions.cols(); ++c) {
      for (Eigen::Index r = 0; r < out.smoothed_actions.rows(); ++r) {
        out.smoothed_actions(r, c) += std::clamp(noise(rng), -noise_clip, noise_clip);
      }
    }
  }
  out.smoothed_actions = out.smoothed_actions.cwiseMax(-1.0).cwiseMin(1.0);

  const Eigen::MatrixXd sa = critic_input(batch.next_states, out.smoothed_actions);
  const Eigen::VectorXd q1 = forward(agent.critic1_target, sa).row(0).transpose();
  const Eigen::VectorXd q2 = forward(agent.critic2_target, sa).row(0).transpose();
  const Eigen::VectorXd discount = gamma * (Eigen::VectorXd::Ones(batch.size()) - batch.done);
  out.targets = rewards + discount.cwiseProduct(q1.cwiseMin(q2));
  out.critic1_only = rewards + discount.cwiseProduct(q1);
  out.critic2_only = rewards + discount.cwiseProduct(q2);
  return out;
}

ActorCriticLosses td3_update_batch(Td3Agent& agent, const Batch& batch,
                                   const Eigen::VectorXd& rewards) {
  const AgentConfig& cfg = agent.config;
  const Td3Targets t = td3_td_target(agent, batch, rewards, cfg.gamma, cfg.td3.policy_noise,
                                     cfg.td3.noise_clip, agent.rng);
  const Eigen::MatrixXd sa = critic_input(batch.states, batch.actions);
  ActorCriticLosses out;
  const double l1 = critic_regression_step(agent.critic1, agent.critic1_optimizer, sa, t.targets);
  const double l2 = critic_regression_step(agent.critic2, agent.critic2_optimizer, sa, t.targets);
  out.critic_loss = 0.5 * (l1 + l2);

  agent.update_counter += 1;
  if (agent.update_counter % cfg.td3.policy_delay == 0) {
    const ActorObjective obj = actor_objective(agent.actor, agent.critic1, batch.states);
    adam_step(agent.actor_optimizer, agent.actor, obj.actor_grads);
    out.actor_loss = obj.loss;
    soft_update(agent.actor_target, agent.actor, cfg.tau);
    soft_update(agent.critic1_target, agent.critic1, cfg.tau);
    soft_update(agent.critic2_target, agent.critic2, cfg.tau);
  }
  return out;
}

ActorCriticLosses td3_update(Td3Agent& agent, const ReplayBuffer& buffer) {
  const Batch batch = buffer.sample_batch(agent.config.batch_size, agent.rng);
  return td3_update_batch(agent, batch, batch.scalar_rewards());
}

ActorCriticLosses motd3_update(Td3Agent& agent, const ReplayBuffer& buffer,
                               const ObjectiveWeights& weights) {
  validate_weights(weights);
  if (buffer.kind() == RewardKind::Scalar) {
    throw Error(ErrorCode::TagMismatch, "MO-TD3 needs a vector-reward buffer");
  }
  const Batch batch = buffer.sample_batch(agent.config.batch_size, agent.rng);
  return td3_update_batch(agent, batch, batch.scalar_rewards(&weights));
}

}  // namespace navrl

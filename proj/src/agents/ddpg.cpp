#include "navrl/agents.hpp"

namespace navrl {

DdpgAgent DdpgAgent::create(int observation_size, const AgentConfig& config, std::uint64_t seed) {
  config.validate();
  DdpgAgent agent;
  agent.config = config;
  agent.actor = make_actor_network(observation_size, config.hidden, seed);
  agent.critic = make_critic_network(observation_size, config.hidden, seed + 1);
  agent.actor_target = agent.actor;
  agent.critic_target = agent.critic;
  agent.actor_optimizer = adam_init(agent.actor, config.actor_lr);
  agent.critic_optimizer = adam_init(agent.critic, config.critic_lr);
  agent.rng.seed(seed ^ 0x9e3779b97f4a7c15ULL);
  return agent;
}

Action ddpg_act(const DdpgAgent& agent, const Eigen::VectorXd& state, double sigma, Rng& rng) {
  return action_from_normalized(actor_act(agent.actor, state, sigma, rng));
}

Eigen::VectorXd ddpg_td_target(const DdpgAgent& agent, const Batch& batch) {
  const Eigen::VectorXd r = batch.scalar_rewards();
  const Eigen::MatrixXd next_a = forward(agent.actor_target, batch.next_states);
  const Eigen::MatrixXd next_q = forward(agent.critic_target, critic_input(batch.next_states, next_a));
  const Eigen::VectorXd not_done = Eigen::VectorXd::Ones(batch.size()) - batch.done;
  return r + agent.config.gamma * not_done.cwiseProduct(next_q.row(0).transpose());
}

ActorCriticLosses ddpg_update_batch(DdpgAgent& agent, const Batch& batch) {
  ActorCriticLosses out;
  const Eigen::VectorXd y = ddpg_td_target(agent, batch);
  out.critic_loss = critic_regression_step(agent.critic, agent.critic_optimizer,
                                           critic_input(batch.states, batch.actions), y);
  const ActorObjective obj = actor_objective(agent.actor, agent.critic, batch.states);
  adam_step(agent.actor_optimizer, agent.actor, obj.actor_grads);
  out.actor_loss = obj.loss;
  soft_update(agent.actor_target, agent.actor, agent.config.tau);
  soft_update(agent.critic_target, agent.critic, agent.config.tau);
  agent.update_counter += 1;
  return out;
}

ActorCriticLosses ddpg_update(DdpgAgent& agent, const ReplayBuffer& buffer) {
  return ddpg_update_batch(agent, buffer.sample_batch(agent.config.batch_size, agent.rng));
}

}  // namespace navrl

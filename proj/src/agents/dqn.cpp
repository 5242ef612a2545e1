#include <cmath>

#include "navrl/agents.hpp"
#include "navrl/error.hpp"

namespace navrl {

DqnAgent DqnAgent::create(int observation_size, const AgentConfig& config, std::uint64_t seed) {
  config.validate();
  DqnAgent agent;
  agent.config = config;
  agent.actions = discrete_actions(config);
  agent.q = make_q_network(observation_size, static_cast<int>(agent.actions.size()), config.hidden,
                           seed);
  agent.q_target = agent.q;
  agent.optimizer = adam_init(agent.q, config.critic_lr);
  agent.rng.seed(seed ^ 0x9e3779b97f4a7c15ULL);
  return agent;
}

std::size_t greedy_index(const Eigen::VectorXd& q_values) {
  if (q_values.size() == 0) throw Error(ErrorCode::EmptyInput, "no Q-values");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < q_values.size(); ++i) {
    if (q_values[i] > q_values[best]) best = i;
  }
  return static_cast<std::size_t>(best);
}

std::size_t dqn_select_action(const Network& q, const Eigen::VectorXd& state, double epsilon,
                              Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "epsilon must lie in [0,1]");
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(q.output_size()) - 1);
    return pick(rng);
  }
  return greedy_index(forward(q, state));
}

Eigen::VectorXd dqn_td_target(const Batch& batch, const Network& q_target, double gamma) {
  if (batch.size() == 0) throw Error(ErrorCode::EmptyInput, "empty batch");
  const Eigen::VectorXd r = batch.scalar_rewards();
  const Eigen::MatrixXd next_q = forward(q_target, batch.next_states);
  Eigen::VectorXd y(batch.size());
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    y[i] = batch.done[i] != 0.0 ? r[i] : r[i] + gamma * next_q.col(i).maxCoeff();
  }
  return y;
}

double dqn_update_batch(DqnAgent& agent, const Batch& batch) {
  const Eigen::VectorXd y = dqn_td_target(batch, agent.q_target, agent.config.gamma);
  Cache cache;
  const Eigen::MatrixXd q = forward(agent.q, batch.states, &cache);
  const double n = static_cast<double>(batch.size());
  Eigen::MatrixXd upstream = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    const auto a = static_cast<Eigen::Index>(std::llround(batch.actions(0, i)));
    if (a < 0 || a >= q.rows()) throw Error(ErrorCode::ShapeError, "action index out of range");
    const double err = q(a, i) - y[i];
    loss += err * err;
    upstream(a, i) = 2.0 * err / n;
  }
  adam_step(agent.optimizer, agent.q, backward(agent.q, cache, upstream, false).grads);
  soft_update(agent.q_target, agent.q, agent.config.tau);
  agent.update_counter += 1;
  return loss / n;
}

double dqn_update(DqnAgent& agent, const ReplayBuffer& buffer) {
  return dqn_update_batch(agent, buffer.sample_batch(agent.config.batch_size, agent.rng));
}

}  // namespace navrl

#include <algorithm>
#include <cmath>
#include <sstream>

#include "navrl/agents.hpp"
#include "navrl/error.hpp"

namespace navrl {

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::Dqn: return "dqn";
    case Algo::Ddpg: return "ddpg";
    case Algo::Td3: return "td3";
    case Algo::MoTd3: return "motd3";
  }
  return "td3";
}

Algo parse_algo(std::string_view name) {
  for (auto a : {Algo::Dqn, Algo::Ddpg, Algo::Td3, Algo::MoTd3}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorCode::ParseError, "unknown algo '" + std::string(name) + "'");
}

void AgentConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ValidationError, why); };
  if (!(gamma > 0.0 && gamma < 1.0)) fail("agent.gamma must lie in (0,1)");
  if (!(tau >= 0.0 && tau <= 1.0)) fail("agent.tau must lie in [0,1]");
  if (batch_size < 1) fail("agent.batch_size must be >= 1");
  if (!(actor_lr > 0.0)) fail("agent.actor_lr must be > 0");
  if (!(critic_lr > 0.0)) fail("agent.critic_lr must be > 0");
  if (hidden.empty()) fail("agent.hidden must list at least one layer");
  for (int h : hidden) {
    if (h < 1) fail("agent.hidden sizes must be positive");
  }
  if (buffer_capacity < batch_size) fail("agent.buffer_capacity must be >= agent.batch_size");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
    fail("agent.epsilon_start and agent.epsilon_end must lie in [0,1]");
  }
  if (!(epsilon_decay_fraction > 0.0 && epsilon_decay_fraction <= 1.0)) {
    fail("agent.epsilon_decay_fraction must lie in (0,1]");
  }
  if (!(sigma >= 0.0)) fail("agent.sigma must be >= 0");
  if (!(td3.policy_noise >= 0.0)) fail("agent.td3.policy_noise must be >= 0");
  if (!(td3.noise_clip >= 0.0)) fail("agent.td3.noise_clip must be >= 0");
  if (td3.policy_delay < 1) fail("agent.td3.policy_delay must be >= 1");
  if (dqn_angular.empty()) fail("agent.dqn.angular must not be empty");
  if (!(dqn_linear >= 0.0 && dqn_linear <= action_limits::kMaxLinear)) {
    fail("agent.dqn.linear must lie in [0, 0.22]");
  }
  for (double w : dqn_angular) {
    if (!(std::abs(w) <= action_limits::kMaxAngular)) fail("agent.dqn.angular entries must lie in [-2, 2]");
  }
}

std::vector<Action> discrete_actions(const AgentConfig& config) {
  std::vector<Action> out;
  for (double w : config.dqn_angular) out.push_back(Action{config.dqn_linear, w}.clamped());
  return out;
}

Action action_from_normalized(const Eigen::Vector2d& u) {
  return Action{0.5 * (u[0] + 1.0) * action_limits::kMaxLinear, u[1] * action_limits::kMaxAngular}
      .clamped();
}

Eigen::Vector2d normalized_from_action(const Action& a) {
  return {2.0 * a.linear / action_limits::kMaxLinear - 1.0, a.angular / action_limits::kMaxAngular};
}

Eigen::MatrixXd critic_input(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) {
  if (states.cols() != actions.cols()) throw Error(ErrorCode::ShapeError, "batch size mismatch");
  Eigen::MatrixXd sa(states.rows() + actions.rows(), states.cols());
  sa.topRows(states.rows()) = states;
  sa.bottomRows(actions.rows()) = actions;
  return sa;
}

double critic_regression_step(Network& critic, Adam& optimizer, const Eigen::MatrixXd& inputs,
                              const Eigen::VectorXd& targets) {
  Cache cache;
  const Eigen::MatrixXd q = forward(critic, inputs, &cache);
  const Eigen::RowVectorXd err = q.row(0) - targets.transpose();
  const double n = static_cast<double>(targets.size());
  const double loss = err.squaredNorm() / n;
  const Eigen::MatrixXd upstream = (2.0 / n) * err;
  adam_step(optimizer, critic, backward(critic, cache, upstream, false).grads);
  return loss;
}

ActorObjective actor_objective(const Network& actor, const Network& critic,
                               const Eigen::MatrixXd& states) {
  Cache actor_cache;
  Cache critic_cache;
  const Eigen::MatrixXd actions = forward(actor, states, &actor_cache);
  const Eigen::MatrixXd q = forward(critic, critic_input(states, actions), &critic_cache);
  const double n = static_cast<double>(states.cols());
  ActorObjective out;
  out.loss = -q.sum() / n;
  const Eigen::MatrixXd upstream = Eigen::MatrixXd::Constant(1, states.cols(), -1.0 / n);
  const Eigen::MatrixXd action_grad =
      input_gradient(critic, critic_cache, upstream).bottomRows(actions.rows());
  out.actor_grads = backward(actor, actor_cache, action_grad, false).grads;
  return out;
}

Eigen::Vector2d actor_act(const Network& actor, const Eigen::VectorXd& state, double sigma,
                          Rng& rng) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidInput, "sigma must be >= 0");
  const Eigen::VectorXd raw = forward(actor, state);
  if (raw.size() != 2) throw Error(ErrorCode::ShapeError, "actor must output 2 values");
  Eigen::Vector2d u = raw;
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    u[0] += noise(rng);
    u[1] += noise(rng);
  }
  return u.cwiseMax(-1.0).cwiseMin(1.0);
}

void put_config(Checkpoint& ckpt, const AgentConfig& c) {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  auto list = [&](const auto& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ",") + num(static_cast<double>(x));
    return s;
  };
  ckpt.header["config.gamma"] = num(c.gamma);
  ckpt.header["config.tau"] = num(c.tau);
  ckpt.header["config.batch_size"] = std::to_string(c.batch_size);
  ckpt.header["config.actor_lr"] = num(c.actor_lr);
  ckpt.header["config.critic_lr"] = num(c.critic_lr);
  ckpt.header["config.hidden"] = list(c.hidden);
  ckpt.header["config.sigma"] = num(c.sigma);
  ckpt.header["config.td3.policy_noise"] = num(c.td3.policy_noise);
  ckpt.header["config.td3.noise_clip"] = num(c.td3.noise_clip);
  ckpt.header["config.td3.policy_delay"] = std::to_string(c.td3.policy_delay);
  ckpt.header["config.dqn.linear"] = num(c.dqn_linear);
  ckpt.header["config.dqn.angular"] = list(c.dqn_angular);
}

AgentConfig config_from_checkpoint(const Checkpoint& ckpt) {
  auto num = [&](const std::string& k) { return std::stod(ckpt.header_value(k)); };
  auto list = [&](const std::string& k) {
    std::vector<double> out;
    std::istringstream is(ckpt.header_value(k));
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stod(item));
    return out;
  };
  AgentConfig c;
  c.gamma = num("config.gamma");
  c.tau = num("config.tau");
  c.batch_size = static_cast<std::size_t>(num("config.batch_size"));
  c.actor_lr = num("config.actor_lr");
  c.critic_lr = num("config.critic_lr");
  c.hidden.clear();
  for (double h : list("config.hidden")) c.hidden.push_back(static_cast<int>(h));
  c.sigma = num("config.sigma");
  c.td3.policy_noise = num("config.td3.policy_noise");
  c.td3.noise_clip = num("config.td3.noise_clip");
  c.td3.policy_delay = static_cast<int>(num("config.td3.policy_delay"));
  c.dqn_linear = num("config.dqn.linear");
  c.dqn_angular = list("config.dqn.angular");
  return c;
}

void require_kind(const Checkpoint& ckpt, Algo expected) {
  auto it = ckpt.header.find("kind");
  if (it == ckpt.header.end() || it->second != to_string(expected)) {
    throw Error(ErrorCode::IncompatibleCheckpoint,
                "checkpoint kind '" + (it == ckpt.header.end() ? std::string("?") : it->second) +
                    "' does not match algo '" + std::string(to_string(expected)) + "'");
  }
}

Checkpoint to_checkpoint(const DqnAgent& agent) {
  Checkpoint c;
  c.header["kind"] = std::string(to_string(Algo::Dqn));
  put_config(c, agent.config);
  c.put_network("q", agent.q);
  c.put_network("q_target", agent.q_target);
  return c;
}

Checkpoint to_checkpoint(const DdpgAgent& agent) {
  Checkpoint c;
  c.header["kind"] = std::string(to_string(Algo::Ddpg));
  put_config(c, agent.config);
  c.put_network("actor", agent.actor);
  c.put_network("actor_target", agent.actor_target);
  c.put_network("critic", agent.critic);
  c.put_network("critic_target", agent.critic_target);
  return c;
}

Checkpoint to_checkpoint(const Td3Agent& agent, Algo kind) {
  if (kind != Algo::Td3 && kind != Algo::MoTd3) {
    throw Error(ErrorCode::InvalidInput, "TD3 agents checkpoint as td3 or motd3");
  }
  Checkpoint c;
  c.header["kind"] = std::string(to_string(kind));
  put_config(c, agent.config);
  c.put_network("actor", agent.actor);
  c.put_network("actor_target", agent.actor_target);
  c.put_network("critic1", agent.critic1);
  c.put_network("critic2", agent.critic2);
  c.put_network("critic1_target", agent.critic1_target);
  c.put_network("critic2_target", agent.critic2_target);
  return c;
}

}  // namespace navrl

namespace navrl {

namespace {

Network make_mlp(int in, const std::vector<int>& hidden, int out, Activation head,
                 std::uint64_t seed) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  std::vector<Activation> acts(hidden.size(), Activation::ReLU);
  acts.push_back(head);
  return mlp_init<double>(sizes, acts, seed);
}

}  // namespace

Network make_actor_network(int observation_size, const std::vector<int>& hidden, std::uint64_t seed) {
  return make_mlp(observation_size, hidden, 2, Activation::Tanh, seed);
}

Network make_critic_network(int observation_size, const std::vector<int>& hidden, std::uint64_t seed) {
  return make_mlp(observation_size + 2, hidden, 1, Activation::Identity, seed);
}

Network make_q_network(int observation_size, int action_count, const std::vector<int>& hidden,
                       std::uint64_t seed) {
  return make_mlp(observation_size, hidden, action_count, Activation::Identity, seed);
}

}  // namespace navrl

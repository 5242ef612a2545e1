#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "navrl/agents.hpp"
#include "navrl/error.hpp"
#include "oracles.hpp"

using namespace navrl;

namespace {

constexpr int kObs = 6;

/// One Identity layer with zero weights: outputs the bias whatever the input.
Network constant_net(int in, const Eigen::VectorXd& out) {
  Network net;
  net.layers.push_back({Eigen::MatrixXd::Zero(out.size(), in), out, Activation::Identity});
  return net;
}

Batch one_sample_batch(double reward, bool done, int obs = kObs) {
  Transition t;
  t.state = Eigen::VectorXd::Constant(obs, 0.1);
  t.action = Eigen::VectorXd::Zero(2);
  t.reward = reward;
  t.next_state = Eigen::VectorXd::Constant(obs, -0.2);
  t.done = done;
  return make_batch({t});
}

}  // namespace

TEST(Actions, DiscreteSet) {
  const auto acts = discrete_actions(AgentConfig{});
  ASSERT_EQ(acts.size(), 5u);
  for (const auto& a : acts) {
    EXPECT_EQ(a.linear, 0.22);
    EXPECT_LE(std::abs(a.angular), 2.0);
  }
}

TEST(Actions, NormalisedMapping) {
  EXPECT_EQ(action_from_normalized({-1, -1}), (Action{0.0, -2.0}));
  EXPECT_EQ(action_from_normalized({1, 1}), (Action{0.22, 2.0}));
  const Action a{0.11, 0.5};
  const Action back = action_from_normalized(normalized_from_action(a));
  EXPECT_NEAR(back.linear, a.linear, 1e-15);
  EXPECT_NEAR(back.angular, a.angular, 1e-15);
}

TEST(AgentConfig, Validation) {
  AgentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = AgentConfig{};
  c.td3.policy_delay = 0;
  EXPECT_THROW(c.validate(), Error);
  c = AgentConfig{};
  c.td3.noise_clip = -0.1;
  EXPECT_THROW(c.validate(), Error);
  c = AgentConfig{};
  c.dqn_angular.clear();
  EXPECT_THROW(c.validate(), Error);
}

TEST(Networks, TargetsMirrorOnlineAndTwinCriticsDiffer) {
  const Td3Agent agent = Td3Agent::create(kObs, fixture::small_config(), 3);
  EXPECT_TRUE(agent.actor == agent.actor_target);
  EXPECT_TRUE(agent.critic1 == agent.critic1_target);
  EXPECT_TRUE(agent.critic2 == agent.critic2_target);
  EXPECT_FALSE(agent.critic1 == agent.critic2);
  EXPECT_EQ(agent.actor.output_size(), 2);
  EXPECT_EQ(agent.critic1.input_size(), kObs + 2);
  EXPECT_EQ(agent.actor.layers.back().activation, Activation::Tanh);
}

TEST(Dqn, GreedySelection) {
  Rng rng(0);
  const Eigen::VectorXd s = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd q(5);
  q << 1, 3, 2, 3, 0;
  EXPECT_EQ(dqn_select_action(constant_net(3, q), s, 0.0, rng), 1u);
  q << 5, 0, 0, 0, 0;
  EXPECT_EQ(dqn_select_action(constant_net(3, q), s, 0.0, rng), 0u);
}

TEST(Dqn, PureExplorationIsUniform) {
  Rng rng(8);
  const Network net = constant_net(3, Eigen::VectorXd::LinSpaced(5, 0, 4));
  const Eigen::VectorXd s = Eigen::VectorXd::Zero(3);
  const int draws = 10000;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < draws; ++i) ++counts[dqn_select_action(net, s, 1.0, rng)];
  const double sigma = std::sqrt(draws * 0.2 * 0.8);
  for (int c : counts) EXPECT_LT(std::abs(c - draws * 0.2), 3 * sigma);
}

TEST(Dqn, TdTargets) {
  const Network target = constant_net(kObs, Eigen::VectorXd::LinSpaced(5, 6, 10));
  EXPECT_EQ(dqn_td_target(one_sample_batch(-2021, true), target, 0.99)[0], -2021.0);
  EXPECT_NEAR(dqn_td_target(one_sample_batch(-1, false), target, 0.99)[0], 8.9, 1e-12);
  EXPECT_EQ(dqn_td_target(one_sample_batch(-7.5, false), target, 0.0)[0], -7.5);
}

TEST(Dqn, FixedPointHasZeroLoss) {
  DqnAgent agent = DqnAgent::create(kObs, fixture::small_config(), 1);
  agent.q = constant_net(kObs, Eigen::VectorXd::Constant(5, 4.0));
  agent.q_target = agent.q;
  agent.optimizer = adam_init(agent.q, 1e-3);
  const Network before = agent.q;
  EXPECT_EQ(dqn_update_batch(agent, one_sample_batch(4.0, true)), 0.0);
  EXPECT_TRUE(agent.q == before);
}

TEST(Dqn, SingleTransitionHandLoss) {
  DqnAgent agent = DqnAgent::create(2, fixture::small_config(), 1);
  Network net;
  Eigen::MatrixXd w(5, 2);
  w << 1, 0, 0, 1, 1, 1, -1, 0, 0.5, 0.5;
  net.layers.push_back({w, Eigen::VectorXd::Constant(5, 0.25), Activation::Identity});
  agent.q = net;
  agent.q_target = net;
  agent.optimizer = adam_init(agent.q, 1e-3);
  Transition t;
  t.state = Eigen::Vector2d(2.0, -1.0);
  t.action = Eigen::VectorXd::Constant(1, 2.0);
  t.reward = 3.0;
  t.next_state = Eigen::Vector2d(0.0, 0.0);
  t.done = false;
  // q(s)[2] = 2 - 1 + 0.25; target = 3 + 0.99 * max(q(0)) = 3 + 0.99 * 0.25.
  const double q = 1.25;
  const double y = 3.0 + 0.99 * 0.25;
  EXPECT_NEAR(dqn_update_batch(agent, make_batch({t})), (q - y) * (q - y), 1e-12);
}

TEST(Dqn, UpdatesAreDeterministic) {
  const ReplayBuffer buffer = fixture::scalar_buffer(kObs, 200, 4);
  DqnAgent a = DqnAgent::create(kObs, fixture::small_config(), 9);
  DqnAgent b = DqnAgent::create(kObs, fixture::small_config(), 9);
  // Scalar buffer actions are continuous; map them onto indices for DQN.
  ReplayBuffer discrete(200);
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    Transition t = buffer.at(i);
    t.action = Eigen::VectorXd::Constant(1, static_cast<double>(i % 5));
    discrete.push(t);
  }
  for (int i = 0; i < 20; ++i) EXPECT_EQ(dqn_update(a, discrete), dqn_update(b, discrete));
  EXPECT_TRUE(a.q == b.q);
  EXPECT_TRUE(a.q_target == b.q_target);
}

TEST(Ddpg, NoiseFreeActionsAreDeterministic) {
  const DdpgAgent agent = DdpgAgent::create(kObs, fixture::small_config(), 2);
  const Eigen::VectorXd s = Eigen::VectorXd::Constant(kObs, 0.3);
  Rng r1(1), r2(2);
  const Action a = ddpg_act(agent, s, 0.0, r1);
  EXPECT_EQ(a, ddpg_act(agent, s, 0.0, r2));
  Rng r3(5), r4(5);
  EXPECT_EQ(ddpg_act(agent, s, 0.1, r3), ddpg_act(agent, s, 0.1, r4));
}

TEST(Ddpg, NoisyActionsAreClamped) {
  DdpgAgent agent = DdpgAgent::create(kObs, fixture::small_config(), 2);
  agent.actor.layers.back().biases = Eigen::Vector2d(50.0, -50.0);
  const Eigen::VectorXd s = Eigen::VectorXd::Constant(kObs, 0.3);
  Rng rng(3);
  int at_bounds = 0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d u = actor_act(agent.actor, s, 5.0, rng);
    EXPECT_LE(u.cwiseAbs().maxCoeff(), 1.0);
    at_bounds += (u[0] == 1.0) + (u[1] == -1.0);
    const Action a = action_from_normalized(u);
    EXPECT_GE(a.linear, 0.0);
    EXPECT_LE(a.linear, 0.22);
    EXPECT_LE(std::abs(a.angular), 2.0);
  }
  EXPECT_GT(at_bounds, 100);
}

TEST(Ddpg, TerminalTargetsAreRewards) {
  const DdpgAgent agent = DdpgAgent::create(kObs, fixture::small_config(), 2);
  EXPECT_EQ(ddpg_td_target(agent, one_sample_batch(-2021.0, true))[0], -2021.0);
}

TEST(Ddpg, MyopicCriticOverfitsFixedBatch) {
  DdpgAgent agent = DdpgAgent::create(kObs, fixture::small_config(), 2);
  agent.config.gamma = 0.0;
  Rng rng(11);
  const Batch batch = fixture::scalar_buffer(kObs, 16, 12).sample_batch(16, rng);
  EXPECT_EQ(ddpg_td_target(agent, batch), batch.scalar_rewards());
  const double first = ddpg_update_batch(agent, batch).critic_loss;
  double last = first;
  for (int i = 0; i < 100; ++i) last = ddpg_update_batch(agent, batch).critic_loss;
  EXPECT_LT(last, first);
}

TEST(Ddpg, ActorGradientMatchesFiniteDifferences) {
  const DdpgAgent agent = DdpgAgent::create(kObs, fixture::small_config(), 21);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  const Eigen::MatrixXd states = Eigen::MatrixXd::NullaryExpr(kObs, 8, [&] { return u(rng); });
  const ActorObjective obj = actor_objective(agent.actor, agent.critic, states);
  const Gradients fd = oracle::finite_difference_gradients(
      agent.actor, [&](const Network& a) { return actor_objective(a, agent.critic, states).loss; });
  EXPECT_LT(oracle::max_relative_error(obj.actor_grads, fd), 1e-3);
}

TEST(Td3, TwinMinimumTarget) {
  Td3Agent agent = Td3Agent::create(kObs, fixture::small_config(), 5);
  agent.critic1_target = constant_net(kObs + 2, Eigen::VectorXd::Constant(1, 1.0));
  agent.critic2_target = constant_net(kObs + 2, Eigen::VectorXd::Constant(1, 2.0));
  Rng rng(0);
  const Batch live = one_sample_batch(0.0, false);
  const Td3Targets t = td3_td_target(agent, live, live.scalar_rewards(), 0.99, 0.0, 0.0, rng);
  EXPECT_NEAR(t.targets[0], 0.99, 1e-15);
  const Batch done = one_sample_batch(-3.0, true);
  EXPECT_EQ(td3_td_target(agent, done, done.scalar_rewards(), 0.99, 0.2, 0.5, rng).targets[0], -3.0);
}

TEST(Td3, FullyClippedNoiseLeavesTargetAction) {
  const Td3Agent agent = Td3Agent::create(kObs, fixture::small_config(), 5);
  Rng rng(0);
  const Batch b = fixture::scalar_buffer(kObs, 32, 6).sample_batch(32, rng);
  const Td3Targets t = td3_td_target(agent, b, b.scalar_rewards(), 0.99, 0.2, 0.0, rng);
  const Eigen::MatrixXd expected = forward(agent.actor_target, b.next_states).cwiseMax(-1.0).cwiseMin(1.0);
  EXPECT_EQ(t.smoothed_actions, expected);
}

TEST(Td3, MinDominance) {
  const Td3Agent agent = Td3Agent::create(kObs, fixture::small_config(), 5);
  Rng rng(1);
  const Batch b = fixture::scalar_buffer(kObs, 64, 7).sample_batch(64, rng);
  const Td3Targets t = td3_td_target(agent, b, b.scalar_rewards(), 0.99, 0.2, 0.5, rng);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    EXPECT_LE(t.targets[i], t.critic1_only[i]);
    EXPECT_LE(t.targets[i], t.critic2_only[i]);
  }
}

TEST(Td3, DelayedActorUpdates) {
  for (int delay : {1, 2, 3}) {
    AgentConfig cfg = fixture::small_config();
    cfg.td3.policy_delay = delay;
    Td3Agent agent = Td3Agent::create(kObs, cfg, 8);
    const ReplayBuffer buffer = fixture::scalar_buffer(kObs, 200, 9);
    for (int call = 1; call <= 12; ++call) {
      const Network actor_before = agent.actor;
      const Network target_before = agent.critic1_target;
      const ActorCriticLosses l = td3_update(agent, buffer);
      const bool due = call % delay == 0;
      EXPECT_EQ(!(agent.actor == actor_before), due) << "delay " << delay << " call " << call;
      EXPECT_EQ(!(agent.critic1_target == target_before), due);
      EXPECT_EQ(l.actor_loss.has_value(), due);
    }
  }
}

TEST(MoTd3, UnitWeightsMatchScalarTd3) {
  std::mt19937_64 rng(10);
  ReplayBuffer scalar(300), vector(300);
  fixture::fill_twin_buffers(kObs, 300, rng, scalar, vector);
  Td3Agent a = Td3Agent::create(kObs, fixture::small_config(), 12);
  Td3Agent b = Td3Agent::create(kObs, fixture::small_config(), 12);
  for (int i = 0; i < 30; ++i) {
    const ActorCriticLosses la = td3_update(a, scalar);
    const ActorCriticLosses lb = motd3_update(b, vector, ObjectiveWeights::Ones());
    EXPECT_EQ(la.critic_loss, lb.critic_loss);
    EXPECT_EQ(la.actor_loss, lb.actor_loss);
  }
  EXPECT_TRUE(a.actor == b.actor);
  EXPECT_TRUE(a.critic1 == b.critic1);
  EXPECT_TRUE(a.critic2 == b.critic2);
  EXPECT_TRUE(a.critic2_target == b.critic2_target);
}

TEST(MoTd3, TimeBasisWeightTargets) {
  std::mt19937_64 rng(10);
  ReplayBuffer scalar(50), vector(50);
  fixture::fill_twin_buffers(kObs, 50, rng, scalar, vector);
  std::vector<Transition> terminal;
  for (std::size_t i = 0; i < vector.size(); ++i) {
    Transition t = vector.at(i);
    t.done = true;
    terminal.push_back(t);
  }
  const Batch b = make_batch(terminal);
  const ObjectiveWeights w(0, 0, 0, 1);
  const Td3Agent agent = Td3Agent::create(kObs, fixture::small_config(), 1);
  Rng noise(2);
  const Td3Targets t = td3_td_target(agent, b, b.scalar_rewards(&w), 0.99, 0.2, 0.5, noise);
  EXPECT_TRUE((t.targets.array() == -1.0).all());
}

TEST(MoTd3, Preconditions) {
  std::mt19937_64 rng(10);
  ReplayBuffer scalar(50), vector(50);
  fixture::fill_twin_buffers(kObs, 50, rng, scalar, vector);
  Td3Agent agent = Td3Agent::create(kObs, fixture::small_config(), 1);
  try {
    motd3_update(agent, vector, ObjectiveWeights::Zero());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidWeights);
  }
  try {
    motd3_update(agent, scalar, ObjectiveWeights::Ones());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TagMismatch);
  }
}

TEST(AgentCheckpoint, KindAndConfigRoundTrip) {
  AgentConfig cfg = fixture::small_config();
  cfg.gamma = 0.95;
  cfg.dqn_angular = {-1.0, 0.0, 1.0};
  const Td3Agent td3 = Td3Agent::create(kObs, cfg, 3);
  const Checkpoint c = to_checkpoint(td3, Algo::MoTd3);
  EXPECT_NO_THROW(require_kind(c, Algo::MoTd3));
  try {
    require_kind(c, Algo::Td3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompatibleCheckpoint);
  }
  const AgentConfig back = config_from_checkpoint(c);
  EXPECT_EQ(back.gamma, 0.95);
  EXPECT_EQ(back.hidden, cfg.hidden);
  EXPECT_EQ(back.dqn_angular, cfg.dqn_angular);
  EXPECT_TRUE(c.get_network("actor") == td3.actor);
  const DqnAgent dqn = DqnAgent::create(kObs, cfg, 3);
  EXPECT_NO_THROW(require_kind(to_checkpoint(dqn), Algo::Dqn));
}

TEST(AlgoNames, RoundTrip) {
  for (auto a : {Algo::Dqn, Algo::Ddpg, Algo::Td3, Algo::MoTd3}) EXPECT_EQ(parse_algo(to_string(a)), a);
  EXPECT_THROW(parse_algo("ppo"), Error);
}

TEST(Dqn, GreedyChoiceIgnoresPositiveScaling) {
  const DqnAgent agent = DqnAgent::create(kObs, fixture::small_config(), 14);
  Network scaled = agent.q;
  scaled.layers.back().weights *= 3.5;
  scaled.layers.back().biases *= 3.5;
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1, 1);
  Rng r1(0), r2(0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd s = Eigen::VectorXd::NullaryExpr(kObs, [&] { return u(rng); });
    EXPECT_EQ(dqn_select_action(agent.q, s, 0.0, r1), dqn_select_action(scaled, s, 0.0, r2));
  }
}

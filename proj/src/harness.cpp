#include "navrl/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "navrl/error.hpp"

namespace navrl {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Learner {
 public:
  virtual ~Learner() = default;
  /// Chooses an action; returns the vector stored in the replay buffer.
  virtual Eigen::VectorXd act(const Eigen::VectorXd& state, bool warmup, int episode, Rng& rng,
                              Action& action) = 0;
  virtual ActorCriticLosses update(const ReplayBuffer& buffer) = 0;
  virtual double explore_value(int episode) const = 0;
  virtual Checkpoint checkpoint() const = 0;
  virtual bool vector_rewards() const { return false; }
};

class DqnLearner final : public Learner {
 public:
  DqnLearner(int obs, const RunConfig& cfg)
      : agent_(DqnAgent::create(obs, cfg.agent, cfg.seed)), episodes_(cfg.episodes) {}

  Eigen::VectorXd act(const Eigen::VectorXd& state, bool warmup, int episode, Rng& rng,
                      Action& action) override {
    std::size_t idx = 0;
    if (warmup) {
      std::uniform_int_distribution<std::size_t> pick(0, agent_.actions.size() - 1);
      idx = pick(rng);
    } else {
      idx = dqn_select_action(agent_.q, state, explore_value(episode), rng);
    }
    action = agent_.actions[idx];
    return Eigen::VectorXd::Constant(1, static_cast<double>(idx));
  }

  ActorCriticLosses update(const ReplayBuffer& buffer) override {
    return ActorCriticLosses{dqn_update(agent_, buffer), std::nullopt};
  }

  double explore_value(int episode) const override {
    const AgentConfig& c = agent_.config;
    const double span = c.epsilon_decay_fraction * episodes_;
    const double frac = std::min(1.0, static_cast<double>(episode) / span);
    return c.epsilon_start + (c.epsilon_end - c.epsilon_start) * frac;
  }

  Checkpoint checkpoint() const override { return to_checkpoint(agent_); }

 private:
  DqnAgent agent_;
  int episodes_;
};

Eigen::VectorXd uniform_normalized(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng);
  const double b = u(rng);
  return Eigen::Vector2d(a, b);
}

class DdpgLearner final : public Learner {
 public:
  DdpgLearner(int obs, const RunConfig& cfg) : agent_(DdpgAgent::create(obs, cfg.agent, cfg.seed)) {}

  Eigen::VectorXd act(const Eigen::VectorXd& state, bool warmup, int, Rng& rng,
                      Action& action) override {
    const Eigen::VectorXd u =
        warmup ? uniform_normalized(rng) : Eigen::VectorXd(actor_act(agent_.actor, state, agent_.config.sigma, rng));
    action = action_from_normalized(u);
    return u;
  }

  ActorCriticLosses update(const ReplayBuffer& buffer) override { return ddpg_update(agent_, buffer); }
  double explore_value(int) const override { return agent_.config.sigma; }
  Checkpoint checkpoint() const override { return to_checkpoint(agent_); }

 private:
  DdpgAgent agent_;
};

class Td3Learner final : public Learner {
 public:
  Td3Learner(int obs, const RunConfig& cfg)
      : agent_(Td3Agent::create(obs, cfg.agent, cfg.seed)),
        weights_(cfg.algo == Algo::MoTd3 ? cfg.morl_weights : std::nullopt) {}

  Eigen::VectorXd act(const Eigen::VectorXd& state, bool warmup, int, Rng& rng,
                      Action& action) override {
    const Eigen::VectorXd u =
        warmup ? uniform_normalized(rng) : Eigen::VectorXd(actor_act(agent_.actor, state, agent_.config.sigma, rng));
    action = action_from_normalized(u);
    return u;
  }

  ActorCriticLosses update(const ReplayBuffer& buffer) override {
    return weights_ ? motd3_update(agent_, buffer, *weights_) : td3_update(agent_, buffer);
  }
  double explore_value(int) const override { return agent_.config.sigma; }
  Checkpoint checkpoint() const override {
    return to_checkpoint(agent_, weights_ ? Algo::MoTd3 : Algo::Td3);
  }
  bool vector_rewards() const override { return weights_.has_value(); }

 private:
  Td3Agent agent_;
  std::optional<ObjectiveWeights> weights_;
};

std::unique_ptr<Learner> make_learner(const RunConfig& cfg) {
  const int obs = observation_size(cfg.stage);
  switch (cfg.algo) {
    case Algo::Dqn: return std::make_unique<DqnLearner>(obs, cfg);
    case Algo::Ddpg: return std::make_unique<DdpgLearner>(obs, cfg);
    case Algo::Td3:
    case Algo::MoTd3: return std::make_unique<Td3Learner>(obs, cfg);
  }
  throw Error(ErrorCode::InvalidInput, "unknown algo");
}

void save_with_config(Checkpoint ckpt, const RunConfig& cfg, const fs::path& path) {
  ckpt.header["stage"] = cfg.stage.name;
  ckpt.header["seed"] = std::to_string(cfg.seed);
  if (cfg.morl_weights) {
    const auto& w = *cfg.morl_weights;
    ckpt.header["morl_weights"] = g17(w[0]) + "," + g17(w[1]) + "," + g17(w[2]) + "," + g17(w[3]);
  }
  save_checkpoint(ckpt, path);
}

std::string checkpoint_name(int episode) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "checkpoint_ep%05d.ckpt", episode);
  return buf;
}

}  // namespace

std::string format_metrics_row(const EpisodeRecord& r) {
  std::string row = std::to_string(r.episode);
  for (double v : {r.total_reward, r.total_reward_vector.goal_seeking, r.total_reward_vector.safety,
                   r.total_reward_vector.motion_efficiency, r.total_reward_vector.time}) {
    row += "," + g17(v);
  }
  row += "," + std::to_string(r.steps) + "," + std::string(to_string(r.status));
  for (double v : {r.mean_critic_loss, r.mean_actor_loss, r.explore}) row += "," + g17(v);
  return row;
}

std::vector<EpisodeRecord> read_metrics_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open metrics file " + path.string());
  auto fail = [&](int line, const std::string& why) -> Error {
    return Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": " + why);
  };
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || line != kMetricsHeader) throw fail(1, "unexpected header");
  std::vector<EpisodeRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw fail(lineno, "expected 11 fields, got " + std::to_string(f.size()));
    auto dbl = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || *end != '\0') throw fail(lineno, "bad number '" + s + "'");
      return v;
    };
    auto integer = [&](const std::string& s) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != s.size()) throw fail(lineno, "bad integer '" + s + "'");
      return v;
    };
    EpisodeRecord r;
    r.episode = integer(f[0]);
    r.total_reward = dbl(f[1]);
    r.total_reward_vector = {dbl(f[2]), dbl(f[3]), dbl(f[4]), dbl(f[5])};
    r.steps = integer(f[6]);
    try {
      r.status = parse_status(f[7]);
    } catch (const Error&) {
      throw fail(lineno, "bad status '" + f[7] + "'");
    }
    r.mean_critic_loss = dbl(f[8]);
    r.mean_actor_loss = dbl(f[9]);
    r.explore = dbl(f[10]);
    out.push_back(r);
  }
  return out;
}

fs::path final_checkpoint_path(const RunConfig& config) {
  return config.output_dir / "checkpoint_final.ckpt";
}

std::vector<EpisodeRecord> run_training(const RunConfig& config) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + config.output_dir.string() + ": " + ec.message());
  const fs::path metrics_path = config.output_dir / "metrics.csv";
  std::ofstream metrics(metrics_path, std::ios::trunc);
  if (!metrics) throw Error(ErrorCode::IoError, "cannot write " + metrics_path.string());
  metrics << kMetricsHeader << '\n' << std::flush;
  {
    std::ofstream snapshot(config.output_dir / "config.txt", std::ios::trunc);
    snapshot << to_config_text(config);
  }

  World world(config.stage);
  auto learner = make_learner(config);
  ReplayBuffer buffer(config.agent.buffer_capacity);
  Rng explore_rng(config.seed * 0x2545f4914f6cdd1dULL + 0x5eed);
  std::size_t total_steps = 0;
  std::vector<EpisodeRecord> records;
  records.reserve(static_cast<std::size_t>(config.episodes));

  for (int ep = 0; ep < config.episodes; ++ep) {
    Observation obs = world.reset(config.seed + static_cast<std::uint64_t>(ep));
    Eigen::VectorXd state = observation_features(obs, config.stage);
    EpisodeRecord rec;
    rec.episode = ep;
    rec.explore = learner->explore_value(ep);
    double critic_sum = 0.0;
    double actor_sum = 0.0;
    int critic_updates = 0;
    int actor_updates = 0;
    RewardVector totals{0.0, 0.0, 0.0, 0.0};

    while (!world.done()) {
      const bool warmup = total_steps < config.agent.warmup_steps;
      Action action;
      Eigen::VectorXd stored = learner->act(state, warmup, ep, explore_rng, action);
      const StepResult res = world.step(action);
      const RewardVector rv = vector_reward(res.info.reward_input, res.info.status);
      const double r = scalar_reward(reward_terms(res.info.reward_input), res.info.status);
      rec.total_reward += r;
      totals.goal_seeking += rv.goal_seeking;
      totals.safety += rv.safety;
      totals.motion_efficiency += rv.motion_efficiency;
      totals.time += rv.time;

      Eigen::VectorXd next_state = observation_features(res.observation, config.stage);
      Transition t;
      t.state = std::move(state);
      t.action = std::move(stored);
      t.reward = learner->vector_rewards() ? std::variant<double, RewardVector>(rv)
                                           : std::variant<double, RewardVector>(r);
      t.next_state = next_state;
      t.done = res.info.done;
      t.status = res.info.status;
      buffer.push(std::move(t));
      state = std::move(next_state);
      ++total_steps;

      if (total_steps >= config.agent.warmup_steps && buffer.size() >= config.agent.batch_size) {
        const ActorCriticLosses losses = learner->update(buffer);
        critic_sum += losses.critic_loss;
        ++critic_updates;
        if (losses.actor_loss) {
          actor_sum += *losses.actor_loss;
          ++actor_updates;
        }
      }
    }
    rec.steps = world.step_count();
    rec.status = world.status();
    rec.total_reward_vector = totals;
    rec.mean_critic_loss = critic_updates ? critic_sum / critic_updates : kNaN;
    rec.mean_actor_loss = actor_updates ? actor_sum / actor_updates : kNaN;
    metrics << format_metrics_row(rec) << '\n' << std::flush;
    if (!metrics) throw Error(ErrorCode::IoError, "write failed for " + metrics_path.string());
    records.push_back(rec);

    if (config.checkpoint_every > 0 && (ep + 1) % config.checkpoint_every == 0 &&
        ep + 1 < config.episodes) {
      save_with_config(learner->checkpoint(), config, config.output_dir / checkpoint_name(ep + 1));
    }
  }
  save_with_config(learner->checkpoint(), config, final_checkpoint_path(config));
  return records;
}

EvalReport run_eval_policy(const RunConfig& config, const Policy& policy) {
  config.validate();
  World world(config.stage);
  EvalReport report;
  report.episodes = config.eval_episodes;
  int successes = 0;
  int collisions = 0;
  int timeouts = 0;
  double reward_sum = 0.0;
  Eigen::Vector4d objective_sum = Eigen::Vector4d::Zero();
  for (int i = 0; i < config.eval_episodes; ++i) {
    Observation obs = world.reset(config.seed + kEvalSeedOffset + static_cast<std::uint64_t>(i));
    double total = 0.0;
    Eigen::Vector4d totals = Eigen::Vector4d::Zero();
    while (!world.done()) {
      const StepResult res = world.step(policy(world, obs));
      total += scalar_reward(reward_terms(res.info.reward_input), res.info.status);
      totals += vector_reward(res.info.reward_input, res.info.status).values();
      obs = res.observation;
    }
    successes += world.status() == EpisodeStatus::Success;
    collisions += is_collision(world.status());
    timeouts += world.status() == EpisodeStatus::Timeout;
    reward_sum += total;
    objective_sum += totals;
  }
  const double n = config.eval_episodes;
  report.success_rate = successes / n;
  report.collision_rate = collisions / n;
  report.timeout_rate = timeouts / n;
  report.mean_total_reward = reward_sum / n;
  report.mean_objective_vector = objective_sum / n;
  return report;
}

EvalReport run_eval(const RunConfig& config, const fs::path& checkpoint) {
  config.validate();
  const Checkpoint ckpt = load_checkpoint(checkpoint);
  require_kind(ckpt, config.algo);
  const StageSpec& stage = config.stage;
  const int obs = observation_size(stage);

  if (config.algo == Algo::Dqn) {
    const Network q = ckpt.get_network("q");
    const std::vector<Action> actions = discrete_actions(config_from_checkpoint(ckpt));
    if (q.input_size() != obs || q.output_size() != static_cast<Eigen::Index>(actions.size())) {
      throw Error(ErrorCode::IncompatibleCheckpoint, "Q-network shape does not match stage/actions");
    }
    return run_eval_policy(config, [&](const World&, const Observation& o) {
      return actions[greedy_index(forward(q, observation_features(o, stage)))];
    });
  }
  const Network actor = ckpt.get_network("actor");
  if (actor.input_size() != obs || actor.output_size() != 2) {
    throw Error(ErrorCode::IncompatibleCheckpoint, "actor shape does not match stage");
  }
  return run_eval_policy(config, [&](const World&, const Observation& o) {
    const Eigen::Vector2d u = forward(actor, observation_features(o, stage));
    return action_from_normalized(u.cwiseMax(-1.0).cwiseMin(1.0));
  });
}

Action drive_to_goal_policy(const World&, const Observation& obs) {
  const double heading_error = obs.goal_angle;
  const double angular = std::clamp(3.0 * heading_error, -action_limits::kMaxAngular,
                                    action_limits::kMaxAngular);
  const double linear = std::abs(heading_error) < 0.2 ? action_limits::kMaxLinear : 0.0;
  return Action{linear, angular};
}

std::vector<ObjectiveWeights> default_weight_grid() {
  const double levels[] = {0.0, 0.5, 1.0};
  std::vector<ObjectiveWeights> grid;
  for (double a : levels)
    for (double b : levels)
      for (double c : levels)
        for (double d : levels) {
          if (a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0) continue;
          grid.emplace_back(a, b, c, d);
        }
  return grid;
}

std::vector<ObjectiveWeights> read_weight_grid(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open weight grid " + path.string());
  std::vector<ObjectiveWeights> grid;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> w;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
      if (end == cell.c_str() || *end != '\0') {
        throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": bad weight '" + cell + "'");
      }
      w.push_back(v);
    }
    if (w.size() != 4) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": expected 4 weights");
    }
    grid.emplace_back(w[0], w[1], w[2], w[3]);
  }
  if (grid.empty()) throw Error(ErrorCode::EmptyInput, "weight grid " + path.string() + " is empty");
  return grid;
}

SweepResult run_weight_sweep(const RunConfig& base, const std::vector<ObjectiveWeights>& grid) {
  std::vector<std::uint64_t> seeds(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) seeds[i] = base.seed + i;
  return run_weight_sweep(base, grid, seeds);
}

SweepResult run_weight_sweep(const RunConfig& base, const std::vector<ObjectiveWeights>& grid,
                             const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() != grid.size()) throw Error(ErrorCode::ShapeError, "one seed per weight vector");
  if (base.algo != Algo::MoTd3) throw Error(ErrorCode::ValidationError, "sweeps require algo=motd3");
  if (grid.empty()) throw Error(ErrorCode::EmptyInput, "empty weight grid");
  std::error_code ec;
  fs::create_directories(base.output_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + base.output_dir.string() + ": " + ec.message());

  SweepResult result;
  result.cells.resize(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      SweepCell& cell = result.cells[i];
      cell.weights = grid[i];
      cell.seed = seeds[i];
      try {
        RunConfig cfg = base;
        cfg.morl_weights = grid[i];
        cfg.seed = cell.seed;
        cfg.episodes = base.sweep_episodes;
        char dir[32];
        std::snprintf(dir, sizeof dir, "cell_%03zu", i);
        cfg.output_dir = base.output_dir / dir;
        run_training(cfg);
        cell.checkpoint = final_checkpoint_path(cfg);
        cell.objectives = run_eval(cfg, cell.checkpoint).mean_objective_vector;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  const int workers = std::min<int>(base.sweep_workers, static_cast<int>(grid.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Insertion in grid order keeps the archive independent of worker timing.
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    if (result.cells[i].objectives) {
      result.archive.insert(ObjectivePoint{*result.cells[i].objectives, std::to_string(i)});
    }
  }
  for (const auto& p : result.archive.points()) result.cells[std::stoul(p.tag)].on_front = true;

  result.csv_path = base.output_dir / "archive.csv";
  std::ofstream csv(result.csv_path, std::ios::trunc);
  if (!csv) throw Error(ErrorCode::IoError, "cannot write " + result.csv_path.string());
  csv << kArchiveHeader << '\n';
  for (const auto& cell : result.cells) {
    for (int k = 0; k < 4; ++k) csv << g17(cell.weights[k]) << ',';
    csv << cell.seed << ',';
    for (int k = 0; k < 4; ++k) csv << (cell.objectives ? g17((*cell.objectives)[k]) : "nan") << ',';
    csv << (cell.on_front ? 1 : 0) << ',';
    if (cell.error.empty()) {
      csv << cell.checkpoint.string();
    } else {
      std::string msg = cell.error;
      for (char& ch : msg) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      csv << "error: " << msg;
    }
    csv << '\n';
  }
  if (!csv) throw Error(ErrorCode::IoError, "write failed for " + result.csv_path.string());
  return result;
}

}  // namespace navrl

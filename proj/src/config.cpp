#include "navrl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "navrl/error.hpp"

namespace navrl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  Reader(std::string source, std::map<std::string, Entry> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    throw Error(ErrorCode::ParseError,
                source_ + ":" + std::to_string(entries_.at(key).line) + ": " + key + ": " + why);
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& raw(const std::string& key) const { return entries_.at(key).value; }

  double to_double(const std::string& key, const std::string& text) const {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v)) fail(key, "expected a number, got '" + text + "'");
    return v;
  }

  long long to_int(const std::string& key, const std::string& text) const {
    long long v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(key, "expected an integer, got '" + text + "'");
    return v;
  }

  std::vector<double> doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split(raw(key), ',')) out.push_back(to_double(key, item));
    return out;
  }

  void read(const std::string& key, double& dst) const {
    if (has(key)) dst = to_double(key, raw(key));
  }
  void read(const std::string& key, int& dst) const {
    if (has(key)) dst = static_cast<int>(to_int(key, raw(key)));
  }
  // std::size_t and std::uint64_t coincide on the supported platforms.
  void read(const std::string& key, std::size_t& dst) const {
    if (!has(key)) return;
    const long long v = to_int(key, raw(key));
    if (v < 0) fail(key, "must be nonnegative");
    dst = static_cast<std::size_t>(v);
  }


 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "stage", "algo", "episodes", "seed", "morl_weights", "output_dir", "eval_episodes",
      "checkpoint_every", "sweep.episodes", "sweep.workers",
      "stage.half_extent", "stage.wall_thickness", "stage.robot_radius", "stage.goal_radius",
      "stage.time_limit", "stage.dt", "stage.lidar.beams", "stage.lidar.max_range",
      "stage.obstacles",
      "agent.gamma", "agent.tau", "agent.batch_size", "agent.actor_lr", "agent.critic_lr",
      "agent.hidden", "agent.buffer_capacity", "agent.warmup_steps", "agent.epsilon_start",
      "agent.epsilon_end", "agent.epsilon_decay_fraction", "agent.sigma",
      "agent.td3.policy_noise", "agent.td3.noise_clip", "agent.td3.policy_delay",
      "agent.dqn.linear", "agent.dqn.angular"};
  return keys;
}

// "static x y r" or "osc x y r axis_x axis_y amplitude period phase", ';'-separated.
std::vector<Obstacle> parse_obstacles(const Reader& r, const std::string& key) {
  std::vector<Obstacle> out;
  for (const auto& item : split(r.raw(key), ';')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    std::string kind;
    is >> kind;
    std::vector<double> nums;
    std::string tok;
    while (is >> tok) nums.push_back(r.to_double(key, tok));
    Obstacle ob;
    if (kind == "static" && nums.size() == 3) {
      ob = Obstacle{{nums[0], nums[1]}, nums[2], StaticMotion{}};
    } else if (kind == "osc" && nums.size() == 8) {
      const Vec2 axis(nums[3], nums[4]);
      if (!(axis.norm() > 0.0)) r.fail(key, "oscillation axis must be nonzero");
      ob = Obstacle{{nums[0], nums[1]}, nums[2],
                    OscillatingMotion{axis.normalized(), nums[5], nums[6], nums[7]}};
    } else {
      r.fail(key, "bad obstacle '" + item + "' (want 'static x y r' or 'osc x y r ax ay amp period phase')");
    }
    out.push_back(ob);
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename Seq>
std::string join(const Seq& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ",") + num(static_cast<double>(x));
  return s;
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ValidationError, why); };
  stage.validate();
  agent.validate();
  if (episodes < 1) fail("episodes must be >= 1");
  if (eval_episodes < 1) fail("eval_episodes must be >= 1");
  if (checkpoint_every < 0) fail("checkpoint_every must be >= 0");
  if (sweep_episodes < 1) fail("sweep.episodes must be >= 1");
  if (sweep_workers < 1) fail("sweep.workers must be >= 1");
  if (algo == Algo::MoTd3 && !morl_weights) fail("algo=motd3 requires morl_weights");
  if (morl_weights) {
    try {
      validate_weights(*morl_weights);
    } catch (const Error& e) {
      fail(std::string("morl_weights: ") + e.what());
    }
  }
  if (output_dir.empty()) fail("output_dir must not be empty");
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const auto& keys = known_keys();
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError,
                  source + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw Error(ErrorCode::UnknownKey, source + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    entries[key] = Entry{trim(line.substr(eq + 1)), lineno};
  }

  const Reader r(source, std::move(entries));
  RunConfig c;
  if (r.has("stage")) {
    const std::string& name = r.raw("stage");
    if (name == "custom") {
      c.stage = StageSpec{};
      c.stage.name = "custom";
    } else {
      try {
        c.stage = stage_build(name);
      } catch (const Error&) {
        r.fail("stage", "unknown stage '" + name + "' (stage0, stageA, stageB, custom)");
      }
    }
  }
  r.read("stage.half_extent", c.stage.arena_half_extent);
  r.read("stage.wall_thickness", c.stage.wall_thickness);
  r.read("stage.robot_radius", c.stage.robot_radius);
  r.read("stage.goal_radius", c.stage.goal_radius);
  r.read("stage.time_limit", c.stage.time_limit);
  r.read("stage.dt", c.stage.dt);
  r.read("stage.lidar.beams", c.stage.lidar.beams);
  r.read("stage.lidar.max_range", c.stage.lidar.max_range);
  if (r.has("stage.obstacles")) c.stage.obstacles = parse_obstacles(r, "stage.obstacles");

  if (r.has("algo")) {
    try {
      c.algo = parse_algo(r.raw("algo"));
    } catch (const Error&) {
      r.fail("algo", "expected one of dqn, ddpg, td3, motd3");
    }
  }
  r.read("episodes", c.episodes);
  r.read("seed", c.seed);
  if (r.has("morl_weights")) {
    const auto w = r.doubles("morl_weights");
    if (w.size() != 4) r.fail("morl_weights", "expected 4 comma-separated weights");
    c.morl_weights = ObjectiveWeights(w[0], w[1], w[2], w[3]);
  }
  if (r.has("output_dir")) c.output_dir = r.raw("output_dir");
  r.read("eval_episodes", c.eval_episodes);
  r.read("checkpoint_every", c.checkpoint_every);
  r.read("sweep.episodes", c.sweep_episodes);
  r.read("sweep.workers", c.sweep_workers);

  AgentConfig& a = c.agent;
  r.read("agent.gamma", a.gamma);
  r.read("agent.tau", a.tau);
  r.read("agent.batch_size", a.batch_size);
  r.read("agent.actor_lr", a.actor_lr);
  r.read("agent.critic_lr", a.critic_lr);
  if (r.has("agent.hidden")) {
    a.hidden.clear();
    for (const auto& item : split(r.raw("agent.hidden"), ',')) {
      a.hidden.push_back(static_cast<int>(r.to_int("agent.hidden", item)));
    }
  }
  r.read("agent.buffer_capacity", a.buffer_capacity);
  r.read("agent.warmup_steps", a.warmup_steps);
  r.read("agent.epsilon_start", a.epsilon_start);
  r.read("agent.epsilon_end", a.epsilon_end);
  r.read("agent.epsilon_decay_fraction", a.epsilon_decay_fraction);
  r.read("agent.sigma", a.sigma);
  r.read("agent.td3.policy_noise", a.td3.policy_noise);
  r.read("agent.td3.noise_clip", a.td3.noise_clip);
  r.read("agent.td3.policy_delay", a.td3.policy_delay);
  r.read("agent.dqn.linear", a.dqn_linear);
  if (r.has("agent.dqn.angular")) a.dqn_angular = r.doubles("agent.dqn.angular");

  c.validate();
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "config file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  const bool preset = c.stage.name == "stage0" || c.stage.name == "stageA" || c.stage.name == "stageB";
  os << "stage=" << (preset ? c.stage.name : std::string("custom")) << '\n';
  os << "stage.half_extent=" << num(c.stage.arena_half_extent) << '\n';
  os << "stage.wall_thickness=" << num(c.stage.wall_thickness) << '\n';
  os << "stage.robot_radius=" << num(c.stage.robot_radius) << '\n';
  os << "stage.goal_radius=" << num(c.stage.goal_radius) << '\n';
  os << "stage.time_limit=" << c.stage.time_limit << '\n';
  os << "stage.dt=" << num(c.stage.dt) << '\n';
  os << "stage.lidar.beams=" << c.stage.lidar.beams << '\n';
  os << "stage.lidar.max_range=" << num(c.stage.lidar.max_range) << '\n';
  os << "stage.obstacles=";
  for (std::size_t i = 0; i < c.stage.obstacles.size(); ++i) {
    const auto& ob = c.stage.obstacles[i];
    os << (i ? "; " : "");
    if (const auto* osc = std::get_if<OscillatingMotion>(&ob.motion)) {
      os << "osc " << num(ob.center.x()) << ' ' << num(ob.center.y()) << ' ' << num(ob.radius) << ' '
         << num(osc->axis.x()) << ' ' << num(osc->axis.y()) << ' ' << num(osc->amplitude) << ' '
         << num(osc->period) << ' ' << num(osc->phase);
    } else {
      os << "static " << num(ob.center.x()) << ' ' << num(ob.center.y()) << ' ' << num(ob.radius);
    }
  }
  os << '\n';
  os << "algo=" << to_string(c.algo) << '\n';
  os << "episodes=" << c.episodes << '\n';
  os << "seed=" << c.seed << '\n';
  if (c.morl_weights) {
    os << "morl_weights=" << join(std::vector<double>(c.morl_weights->begin(), c.morl_weights->end()))
       << '\n';
  }
  os << "output_dir=" << c.output_dir.string() << '\n';
  os << "eval_episodes=" << c.eval_episodes << '\n';
  os << "checkpoint_every=" << c.checkpoint_every << '\n';
  os << "sweep.episodes=" << c.sweep_episodes << '\n';
  os << "sweep.workers=" << c.sweep_workers << '\n';
  const AgentConfig& a = c.agent;
  os << "agent.gamma=" << num(a.gamma) << '\n';
  os << "agent.tau=" << num(a.tau) << '\n';
  os << "agent.batch_size=" << a.batch_size << '\n';
  os << "agent.actor_lr=" << num(a.actor_lr) << '\n';
  os << "agent.critic_lr=" << num(a.critic_lr) << '\n';
  os << "agent.hidden=" << join(a.hidden) << '\n';
  os << "agent.buffer_capacity=" << a.buffer_capacity << '\n';
  os << "agent.warmup_steps=" << a.warmup_steps << '\n';
  os << "agent.epsilon_start=" << num(a.epsilon_start) << '\n';
  os << "agent.epsilon_end=" << num(a.epsilon_end) << '\n';
  os << "agent.epsilon_decay_fraction=" << num(a.epsilon_decay_fraction) << '\n';
  os << "agent.sigma=" << num(a.sigma) << '\n';
  os << "agent.td3.policy_noise=" << num(a.td3.policy_noise) << '\n';
  os << "agent.td3.noise_clip=" << num(a.td3.noise_clip) << '\n';
  os << "agent.td3.policy_delay=" << a.td3.policy_delay << '\n';
  os << "agent.dqn.linear=" << num(a.dqn_linear) << '\n';
  os << "agent.dqn.angular=" << join(a.dqn_angular) << '\n';
  return os.str();
}

}  // namespace navrl

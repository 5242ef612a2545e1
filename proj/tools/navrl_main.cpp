#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <stdexcept>

#include "navrl/config.hpp"
#include "navrl/error.hpp"
#include "navrl/harness.hpp"
#include "navrl/svg_plot.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

void print_report(const navrl::EvalReport& r) {
  std::printf("episodes=%d\n", r.episodes);
  std::printf("success_rate=%.6f\n", r.success_rate);
  std::printf("collision_rate=%.6f\n", r.collision_rate);
  std::printf("timeout_rate=%.6f\n", r.timeout_rate);
  std::printf("mean_total_reward=%.6f\n", r.mean_total_reward);
  std::printf("mean_objective_vector=%.6f,%.6f,%.6f,%.6f\n", r.mean_objective_vector[0],
              r.mean_objective_vector[1], r.mean_objective_vector[2], r.mean_objective_vector[3]);
}

// Problems with user-supplied input files are usage errors, not runtime failures.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Load>
auto load_input(Load load) {
  try {
    return load();
  } catch (const navrl::Error& e) {
    throw UsageError(e.what());
  }
}

navrl::RunConfig load_config(const std::string& path) {
  return load_input([&] { return navrl::parse_config(path); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-D navigation RL workbench: train, evaluate, sweep, plot"};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint;
  std::string grid_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int window = 50;
  std::vector<std::string> metrics;

  auto* train = app.add_subcommand("train", "train one agent and write metrics.csv and checkpoints");
  train->add_option("--config", config_path, "key=value config file")->required();
  auto* seed_opt = train->add_option("--seed", seed, "override the config seed");
  auto* out_opt = train->add_option("--out", out_path, "override the output directory");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint without learning");
  eval->add_option("--config", config_path, "key=value config file")->required();
  eval->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

  auto* sweep = app.add_subcommand("sweep", "MO-TD3 weight sweep into a Pareto archive");
  sweep->add_option("--config", config_path, "key=value config file (algo=motd3)")->required();
  sweep->add_option("--grid", grid_path, "weight grid file, or 'default' for {0,0.5,1}^4 \\ 0")
      ->required();

  auto* plot = app.add_subcommand("plot", "render smoothed reward curves as SVG");
  plot->add_option("--out", out_path, "output SVG file")->required();
  plot->add_option("--window", window, "centered moving-average window")->check(CLI::PositiveNumber);
  plot->add_option("metrics", metrics, "metrics.csv files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) {
      navrl::RunConfig cfg = load_config(config_path);
      if (*seed_opt) cfg.seed = seed;
      if (*out_opt) cfg.output_dir = out_path;
      const auto records = navrl::run_training(cfg);
      int successes = 0;
      for (const auto& r : records) successes += r.status == navrl::EpisodeStatus::Success;
      std::printf("episodes=%zu successes=%d metrics=%s checkpoint=%s\n", records.size(), successes,
                  (cfg.output_dir / "metrics.csv").string().c_str(),
                  navrl::final_checkpoint_path(cfg).string().c_str());
    } else if (*eval) {
      print_report(navrl::run_eval(load_config(config_path), checkpoint));
    } else if (*sweep) {
      const navrl::RunConfig cfg = load_config(config_path);
      const auto grid = grid_path == "default"
                            ? navrl::default_weight_grid()
                            : load_input([&] { return navrl::read_weight_grid(grid_path); });
      const auto result = navrl::run_weight_sweep(cfg, grid);
      std::size_t failed = 0;
      for (const auto& c : result.cells) failed += !c.error.empty();
      std::printf("cells=%zu failed=%zu front=%zu archive=%s\n", result.cells.size(), failed,
                  result.archive.size(), result.csv_path.string().c_str());
    } else if (*plot) {
      std::vector<std::filesystem::path> paths(metrics.begin(), metrics.end());
      navrl::emit_reward_graph(paths, out_path, window);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

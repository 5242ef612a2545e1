#pragma once

// Independent reference implementations used only by tests. Each one takes
// the slow, obvious route so it can check the fast path in the library.

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "navrl/mlp.hpp"
#include "navrl/pareto.hpp"
#include "navrl/sim_env.hpp"

namespace navrl::oracle {

/// Marches along the ray in fixed increments until the sample point enters an
/// obstacle disc or leaves the free square. Overestimates by at most `step`.
inline double ray_march(const StageSpec& spec, double sim_time, const Vec2& origin, const Vec2& dir,
                        double max_range, double step = 1e-4) {
  const double inner = spec.inner_extent();
  std::vector<Vec2> centers;
  std::vector<double> radii;
  for (const auto& ob : spec.obstacles) {
    centers.push_back(ob.center_at(sim_time));
    radii.push_back(ob.radius);
  }
  const auto n = static_cast<long>(std::ceil(max_range / step));
  for (long k = 0; k <= n; ++k) {
    const double t = std::min(max_range, static_cast<double>(k) * step);
    const double px = origin.x() + t * dir.x();
    const double py = origin.y() + t * dir.y();
    if (std::abs(px) >= inner || std::abs(py) >= inner) return t;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double dx = px - centers[i].x();
      const double dy = py - centers[i].y();
      if (dx * dx + dy * dy <= radii[i] * radii[i]) return t;
    }
  }
  return max_range;
}

/// Random arena with a handful of static and oscillating obstacles, plus a
/// robot pose outside every obstacle and inside the walls.
struct Scene {
  StageSpec spec;
  Pose robot;
  double sim_time = 0.0;
};

inline Scene random_scene(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scene s;
  s.spec.name = "random";
  s.spec.arena_half_extent = 1.5 + 3.0 * u(rng);
  s.spec.wall_thickness = 0.05;
  s.spec.lidar.beams = 24;
  s.spec.lidar.max_range = 3.5;
  const double inner = s.spec.inner_extent();
  const int count = static_cast<int>(u(rng) * 8);
  for (int i = 0; i < count; ++i) {
    Obstacle ob;
    ob.radius = 0.05 + 0.4 * u(rng);
    const double room = inner - ob.radius - 0.01;
    if (u(rng) < 0.5) {
      ob.center = Vec2((2 * u(rng) - 1) * room, (2 * u(rng) - 1) * room);
    } else {
      const double angle = 2 * std::numbers::pi * u(rng);
      const Vec2 axis(std::cos(angle), std::sin(angle));
      const double amp = 0.5 * room * u(rng);
      const double rx = room - amp * std::abs(axis.x());
      const double ry = room - amp * std::abs(axis.y());
      ob.center = Vec2((2 * u(rng) - 1) * rx, (2 * u(rng) - 1) * ry);
      ob.motion = OscillatingMotion{axis, amp, 1.0 + 9.0 * u(rng), 2 * std::numbers::pi * u(rng)};
    }
    s.spec.obstacles.push_back(ob);
  }
  s.sim_time = 20.0 * u(rng);
  for (;;) {
    const Vec2 p((2 * u(rng) - 1) * inner * 0.999, (2 * u(rng) - 1) * inner * 0.999);
    bool clear = true;
    for (const auto& ob : s.spec.obstacles) {
      clear = clear && (p - ob.center_at(s.sim_time)).norm() > ob.radius + 1e-3;
    }
    if (clear) {
      s.robot = Pose{p.x(), p.y(), (2 * u(rng) - 1) * std::numbers::pi};
      return s;
    }
  }
}

/// O(n^2) nondominated filter written straight from the definition.
inline std::vector<ObjectivePoint> brute_force_front(const std::vector<ObjectivePoint>& pts) {
  auto better = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    bool all_ge = true;
    bool any_gt = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      all_ge = all_ge && a[i] >= b[i];
      any_gt = any_gt || a[i] > b[i];
    }
    return all_ge && any_gt;
  };
  std::vector<ObjectivePoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      dominated = j != i && better(pts[j].values, pts[i].values);
    }
    if (!dominated) out.push_back(pts[i]);
  }
  return out;
}

/// Inclusion-exclusion over all subsets: the union volume of boxes [ref, p].
/// Exponential, so only for small fronts.
inline double hypervolume_inclusion_exclusion(const std::vector<ObjectivePoint>& pts,
                                              const Eigen::VectorXd& ref) {
  const std::size_t n = pts.size();
  double total = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    Eigen::VectorXd corner = Eigen::VectorXd::Constant(ref.size(), std::numeric_limits<double>::infinity());
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        corner = corner.cwiseMin(pts[i].values);
        ++bits;
      }
    }
    const double vol = (corner - ref).cwiseMax(0.0).prod();
    total += (bits % 2 ? 1.0 : -1.0) * vol;
  }
  return total;
}

/// Central differences of a scalar loss over every network parameter.
inline Gradients finite_difference_gradients(const Network& net,
                                             const std::function<double(const Network&)>& loss,
                                             double h = 1e-5) {
  Gradients g = zero_gradients(net);
  Network probe = net;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < net.layers[l].weights.size(); ++i) {
      double& p = probe.layers[l].weights.data()[i];
      const double keep = p;
      p = keep + h;
      const double up = loss(probe);
      p = keep - h;
      const double down = loss(probe);
      p = keep;
      g[l].weights.data()[i] = (up - down) / (2 * h);
    }
    for (Eigen::Index i = 0; i < net.layers[l].biases.size(); ++i) {
      double& p = probe.layers[l].biases.data()[i];
      const double keep = p;
      p = keep + h;
      const double up = loss(probe);
      p = keep - h;
      const double down = loss(probe);
      p = keep;
      g[l].biases.data()[i] = (up - down) / (2 * h);
    }
  }
  return g;
}

/// max |a - b| / max(|a|, |b|, floor) over all entries.
inline double max_relative_error(const Gradients& a, const Gradients& b, double floor = 1e-6) {
  double worst = 0.0;
  auto visit = [&](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double denom = std::max({std::abs(x.data()[i]), std::abs(y.data()[i]), floor});
      worst = std::max(worst, std::abs(x.data()[i] - y.data()[i]) / denom);
    }
  };
  for (std::size_t l = 0; l < a.size(); ++l) {
    visit(a[l].weights, b[l].weights);
    visit(a[l].biases, b[l].biases);
  }
  return worst;
}

/// Random small network (1 to 3 layers, at most 16 units wide) with a random
/// batch and a loss sum(c .* y) + 0.5 * sum(y .^ 2). Returns the worst relative
/// error between backprop and central differences.
inline double gradient_check_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> depth(1, 3), width(1, 16), batch(1, 8), act(0, 2);
  std::vector<int> sizes{width(rng)};
  std::vector<Activation> acts;
  const int layers = depth(rng);
  for (int i = 0; i < layers; ++i) {
    sizes.push_back(width(rng));
    acts.push_back(static_cast<Activation>(act(rng)));
  }
  Network net = mlp_init<double>(sizes, acts, rng());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& l : net.layers) l.biases = l.biases.unaryExpr([&](double) { return 0.1 * normal(rng); });
  const int n = batch(rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(sizes.front(), n, [&] { return normal(rng); });
  const Eigen::MatrixXd c = Eigen::MatrixXd::NullaryExpr(sizes.back(), n, [&] { return normal(rng); });

  auto loss = [&](const Network& probe) {
    const Eigen::MatrixXd y = forward(probe, x);
    return (c.array() * y.array()).sum() + 0.5 * y.squaredNorm();
  };
  Cache cache;
  const Eigen::MatrixXd y = forward(net, x, &cache);
  const Gradients analytic = backward(net, cache, Eigen::MatrixXd(c + y)).grads;
  return max_relative_error(analytic, finite_difference_gradients(net, loss));
}

}  // namespace navrl::oracle

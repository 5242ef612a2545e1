#include "navrl/pareto.hpp"

#include <algorithm>
#include <cmath>

#include "navrl/error.hpp"

namespace navrl {

bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeError, "objective count mismatch");
  bool strict = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    strict = strict || a[i] > b[i];
  }
  return strict;
}

bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) { return dominates(a.values, b.values); }

std::vector<ObjectivePoint> pareto_front(const std::vector<ObjectivePoint>& points) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "pareto_front of empty set");
  const Eigen::Index k = points.front().values.size();
  for (const auto& p : points) {
    if (p.values.size() != k) throw Error(ErrorCode::ShapeError, "objective count mismatch");
  }
  // Sort indices lexicographically descending: a point can only be dominated
  // by points that precede it, and the running front stays small.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = points[a].values;
    const auto& y = points[b].values;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (x[i] != y[i]) return x[i] > y[i];
    }
    return false;
  });
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](std::size_t j) {
      return dominates(points[j].values, points[idx].values);
    });
    if (!dominated) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<ObjectivePoint> out;
  out.reserve(kept.size());
  for (std::size_t idx : kept) out.push_back(points[idx]);
  return out;
}

ParetoArchive::ParetoArchive(Eigen::Index k) : k_(k) {
  if (k < 2) throw Error(ErrorCode::ShapeError, "archive needs k >= 2");
}

bool ParetoArchive::insert(ObjectivePoint p) {
  if (p.values.size() != k_) throw Error(ErrorCode::ShapeError, "objective count mismatch");
  for (const auto& q : points_) {
    if (dominates(q.values, p.values)) return false;
  }
  std::erase_if(points_, [&](const ObjectivePoint& q) { return dominates(p.values, q.values); });
  points_.push_back(std::move(p));
  return true;
}

namespace {

using Point2 = std::pair<double, double>;

double hypervolume_2d(std::vector<Point2> pts, double ref_x, double ref_y) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  });
  double area = 0.0;
  double covered_y = ref_y;
  for (const auto& [x, y] : pts) {
    if (y > covered_y) {
      area += (x - ref_x) * (y - covered_y);
      covered_y = y;
    }
  }
  return area;
}

}  // namespace

double hypervolume(const std::vector<ObjectivePoint>& front, const ObjectivePoint& ref) {
  const Eigen::Index k = ref.values.size();
  if (k != 2 && k != 3) throw Error(ErrorCode::Unsupported, "hypervolume supports k = 2 or 3");
  for (const auto& p : front) {
    if (p.values.size() != k) throw Error(ErrorCode::ShapeError, "objective count mismatch");
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!std::isfinite(p.values[i]) || p.values[i] < ref.values[i]) {
        throw Error(ErrorCode::InvalidReference, "point lies below the reference point");
      }
    }
  }
  if (front.empty()) return 0.0;

  if (k == 2) {
    std::vector<Point2> pts;
    for (const auto& p : front) pts.emplace_back(p.values[0], p.values[1]);
    return hypervolume_2d(std::move(pts), ref.values[0], ref.values[1]);
  }

  // k == 3: slice along the third objective. Between consecutive distinct
  // levels the cross-section is the 2-D union of all points at or above.
  std::vector<const ObjectivePoint*> sorted;
  for (const auto& p : front) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const ObjectivePoint* a, const ObjectivePoint* b) { return a->values[2] > b->values[2]; });
  double volume = 0.0;
  std::vector<Point2> slice;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    slice.emplace_back(sorted[i]->values[0], sorted[i]->values[1]);
    const double top = sorted[i]->values[2];
    const double bottom = i + 1 < sorted.size() ? sorted[i + 1]->values[2] : ref.values[2];
    if (top > bottom) volume += hypervolume_2d(slice, ref.values[0], ref.values[1]) * (top - bottom);
  }
  return volume;
}

}  // namespace navrl

#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace navrl {

/// Objective values under the maximisation convention.
struct ObjectivePoint {
  Eigen::VectorXd values;
  std::string tag;
};

/// a_i >= b_i everywhere and a_j > b_j somewhere. Throws ShapeError on k mismatch.
bool dominates(const ObjectivePoint& a, const ObjectivePoint& b);
bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Points not dominated by any other, input order preserved, duplicates kept.
/// Throws EmptyInput / ShapeError.
std::vector<ObjectivePoint> pareto_front(const std::vector<ObjectivePoint>& points);

/// Mutually nondominated set maintained under insertion.
class ParetoArchive {
 public:
  explicit ParetoArchive(Eigen::Index k);

  /// Adds p unless a member dominates it; evicts members p dominates.
  /// Returns whether p was added.
  bool insert(ObjectivePoint p);

  const std::vector<ObjectivePoint>& points() const { return points_; }
  Eigen::Index k() const { return k_; }
  std::size_t size() const { return points_.size(); }

 private:
  Eigen::Index k_;
  std::vector<ObjectivePoint> points_;
};

/// Lebesgue measure of the union of boxes [ref, p]. k must be 2 or 3
/// (Unsupported otherwise); every point must weakly dominate ref
/// (InvalidReference otherwise).
double hypervolume(const std::vector<ObjectivePoint>& front, const ObjectivePoint& ref);

}  // namespace navrl

#pragma once

#include <Eigen/Core>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "navrl/reward.hpp"

namespace navrl {

using Rng = std::mt19937_64;

enum class RewardKind { Scalar, Vector };

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;  // DQN stores the discrete index as a 1-vector
  std::variant<double, RewardVector> reward = 0.0;
  Eigen::VectorXd next_state;
  bool done = false;
  EpisodeStatus status = EpisodeStatus::Ongoing;

  RewardKind reward_kind() const {
    return std::holds_alternative<double>(reward) ? RewardKind::Scalar : RewardKind::Vector;
  }
};

/// Column-stacked minibatch. `rewards` has one row for scalar buffers and four
/// rows (goal, safety, motion, time) for vector buffers.
struct Batch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::MatrixXd rewards;
  Eigen::MatrixXd next_states;
  Eigen::VectorXd done;  // 1.0 for terminal transitions
  RewardKind kind = RewardKind::Scalar;

  Eigen::Index size() const { return states.cols(); }
  /// Scalar rewards; for vector batches, the ordered weighted sum per sample.
  Eigen::VectorXd scalar_rewards(const ObjectiveWeights* weights = nullptr) const;
};

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  /// Throws TagMismatch when the reward kind differs from earlier pushes.
  void push(Transition t);

  /// Indices drawn uniformly without replacement. Throws InsufficientData.
  std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const;
  std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const;
  Batch sample_batch(std::size_t batch_size, Rng& rng) const;

  /// i-th oldest stored transition.
  const Transition& at(std::size_t i) const;

  std::size_t size() const { return len_; }
  std::size_t capacity() const { return storage_.size(); }
  std::optional<RewardKind> kind() const { return kind_; }

 private:
  std::vector<Transition> storage_;
  std::size_t write_index_ = 0;
  std::size_t len_ = 0;
  std::optional<RewardKind> kind_;
};

Batch make_batch(const std::vector<Transition>& transitions);

}  // namespace navrl

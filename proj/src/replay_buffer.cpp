#include "navrl/replay_buffer.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "navrl/error.hpp"

namespace navrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : storage_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::InvalidInput, "replay capacity must be >= 1");
}

void ReplayBuffer::push(Transition t) {
  if (t.state.size() != t.next_state.size()) {
    throw Error(ErrorCode::ShapeError, "state and next_state lengths differ");
  }
  if (kind_ && *kind_ != t.reward_kind()) {
    throw Error(ErrorCode::TagMismatch, "buffer holds a different reward kind");
  }
  kind_ = t.reward_kind();
  storage_[write_index_] = std::move(t);
  write_index_ = (write_index_ + 1) % storage_.size();
  len_ = std::min(len_ + 1, storage_.size());
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= len_) throw Error(ErrorCode::InvalidInput, "replay index out of range");
  const std::size_t oldest = len_ < storage_.size() ? 0 : write_index_;
  return storage_[(oldest + i) % storage_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch_size, Rng& rng) const {
  if (batch_size > len_) {
    throw Error(ErrorCode::InsufficientData, "requested " + std::to_string(batch_size) +
                                                 " samples from " + std::to_string(len_));
  }
  std::vector<std::size_t> out;
  out.reserve(batch_size);
  if (2 * batch_size > len_) {
    // Dense draw: partial Fisher-Yates over all indices.
    std::vector<std::size_t> idx(len_);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < batch_size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, len_ - 1);
      std::swap(idx[i], idx[pick(rng)]);
      out.push_back(idx[i]);
    }
    return out;
  }
  // Sparse draw: rejection of repeats.
  std::uniform_int_distribution<std::size_t> pick(0, len_ - 1);
  while (out.size() < batch_size) {
    const std::size_t i = pick(rng);
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  return out;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  std::vector<Transition> out;
  for (std::size_t i : sample_indices(batch_size, rng)) out.push_back(at(i));
  return out;
}

Batch ReplayBuffer::sample_batch(std::size_t batch_size, Rng& rng) const {
  return make_batch(sample(batch_size, rng));
}

Batch make_batch(const std::vector<Transition>& ts) {
  if (ts.empty()) throw Error(ErrorCode::EmptyInput, "empty transition list");
  Batch b;
  const auto n = static_cast<Eigen::Index>(ts.size());
  b.kind = ts.front().reward_kind();
  b.states.resize(ts.front().state.size(), n);
  b.next_states.resize(ts.front().next_state.size(), n);
  b.actions.resize(ts.front().action.size(), n);
  b.rewards.resize(b.kind == RewardKind::Scalar ? 1 : 4, n);
  b.done.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Transition& t = ts[static_cast<std::size_t>(c)];
    if (t.reward_kind() != b.kind) throw Error(ErrorCode::TagMismatch, "mixed reward kinds");
    b.states.col(c) = t.state;
    b.next_states.col(c) = t.next_state;
    b.actions.col(c) = t.action;
    if (b.kind == RewardKind::Scalar) {
      b.rewards(0, c) = std::get<double>(t.reward);
    } else {
      b.rewards.col(c) = std::get<RewardVector>(t.reward).values();
    }
    b.done[c] = t.done ? 1.0 : 0.0;
  }
  return b;
}

Eigen::VectorXd Batch::scalar_rewards(const ObjectiveWeights* weights) const {
  if (kind == RewardKind::Scalar) return rewards.row(0).transpose();
  if (!weights) throw Error(ErrorCode::TagMismatch, "vector rewards need scalarization weights");
  Eigen::VectorXd out(size());
  for (Eigen::Index c = 0; c < size(); ++c) {
    out[c] = scalarize(RewardVector::from_values(rewards.col(c)), *weights);
  }
  return out;
}

}  // namespace navrl

#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <map>
#include <string>

#include "navrl/mlp.hpp"

namespace navrl {

/// Versioned key -> tensor map. Values are written as C99 hex floats so a
/// save/load round trip is bit-exact.
struct Checkpoint {
  static constexpr int kVersion = 1;

  std::map<std::string, std::string> header;
  std::map<std::string, Eigen::MatrixXd> tensors;

  void put_network(const std::string& prefix, const Network& net);
  Network get_network(const std::string& prefix) const;

  const std::string& header_value(const std::string& key) const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace navrl

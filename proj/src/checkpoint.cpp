#include "navrl/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "navrl/error.hpp"

namespace navrl {

namespace {

constexpr const char* kMagic = "NAVRL-CHECKPOINT";

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

[[noreturn]] void corrupt(const std::filesystem::path& path, int line, const std::string& why) {
  throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

void Checkpoint::put_network(const std::string& prefix, const Network& net) {
  header[prefix + ".layers"] = std::to_string(net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const std::string base = prefix + "." + std::to_string(i);
    header[base + ".activation"] = std::string(to_string(net.layers[i].activation));
    tensors[base + ".weights"] = net.layers[i].weights;
    tensors[base + ".biases"] = net.layers[i].biases;
  }
}

Network Checkpoint::get_network(const std::string& prefix) const {
  const auto layers = std::stoul(header_value(prefix + ".layers"));
  Network net;
  for (std::size_t i = 0; i < layers; ++i) {
    const std::string base = prefix + "." + std::to_string(i);
    auto w = tensors.find(base + ".weights");
    auto b = tensors.find(base + ".biases");
    if (w == tensors.end() || b == tensors.end() || b->second.cols() != 1 ||
        b->second.rows() != w->second.rows()) {
      throw Error(ErrorCode::IncompatibleCheckpoint, "missing or malformed tensors for " + base);
    }
    DenseLayer<double> layer;
    layer.weights = w->second;
    layer.biases = b->second.col(0);
    layer.activation = parse_activation(header_value(base + ".activation"));
    if (i > 0 && layer.weights.cols() != net.layers.back().weights.rows()) {
      throw Error(ErrorCode::IncompatibleCheckpoint, "layer dimensions do not chain at " + base);
    }
    net.layers.push_back(std::move(layer));
  }
  return net;
}

const std::string& Checkpoint::header_value(const std::string& key) const {
  auto it = header.find(key);
  if (it == header.end()) throw Error(ErrorCode::IncompatibleCheckpoint, "missing header key " + key);
  return it->second;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << kMagic << ' ' << Checkpoint::kVersion << '\n';
  for (const auto& [key, value] : ckpt.header) {
    if (key.find_first_of(" \n") != std::string::npos || value.find('\n') != std::string::npos) {
      throw Error(ErrorCode::InvalidInput, "header entries must be single-line, key without spaces");
    }
    out << "header " << key << ' ' << value << '\n';
  }
  for (const auto& [name, t] : ckpt.tensors) {
    out << "tensor " << name << ' ' << t.rows() << ' ' << t.cols() << '\n';
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) out << (c ? " " : "") << hex(t(r, c));
      out << '\n';
    }
  }
  out << "end\n";
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open checkpoint " + path.string());
  Checkpoint ckpt;
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line)) corrupt(path, lineno, "empty file");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic) corrupt(path, lineno, "not a checkpoint file");
    if (version != Checkpoint::kVersion) {
      throw Error(ErrorCode::IncompatibleCheckpoint,
                  "unsupported checkpoint version " + std::to_string(version));
    }
  }
  bool ended = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line == "end") {
      ended = true;
      break;
    }
    if (line.rfind("header ", 0) == 0) {
      const auto sep = line.find(' ', 7);
      if (sep == std::string::npos) corrupt(path, lineno, "malformed header line");
      ckpt.header[line.substr(7, sep - 7)] = line.substr(sep + 1);
    } else if (line.rfind("tensor ", 0) == 0) {
      std::istringstream ts(line.substr(7));
      std::string name;
      Eigen::Index rows = -1, cols = -1;
      if (!(ts >> name >> rows >> cols) || rows < 0 || cols < 0) {
        corrupt(path, lineno, "malformed tensor line");
      }
      Eigen::MatrixXd t(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) corrupt(path, lineno, "truncated tensor " + name);
        ++lineno;
        const char* p = line.c_str();
        for (Eigen::Index c = 0; c < cols; ++c) {
          char* endp = nullptr;
          t(r, c) = std::strtod(p, &endp);
          if (endp == p) corrupt(path, lineno, "bad value in tensor " + name);
          p = endp;
        }
      }
      ckpt.tensors[name] = std::move(t);
    } else {
      corrupt(path, lineno, "unexpected line");
    }
  }
  if (!ended) corrupt(path, lineno, "missing end marker");
  return ckpt;
}

}  // namespace navrl

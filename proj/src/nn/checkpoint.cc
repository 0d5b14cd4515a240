#include "mbrl/nn/checkpoint.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mbrl/core/number_format.h"

namespace mbrl::nn {
namespace {

constexpr char kMagic[] = "mbrl-checkpoint";

}  // namespace

void Checkpoint::add(std::string name, Matrix value) {
  if (name.find_first_of(" \t\n") != std::string::npos) {
    throw std::invalid_argument("checkpoint array name has whitespace");
  }
  arrays.emplace_back(std::move(name), std::move(value));
}

bool Checkpoint::has(const std::string& name) const {
  for (const auto& [n, m] : arrays) {
    if (n == name) return true;
  }
  return false;
}

const Matrix& Checkpoint::get(const std::string& name) const {
  for (const auto& [n, m] : arrays) {
    if (n == name) return m;
  }
  throw std::runtime_error("checkpoint: missing array '" + name + "'");
}

const std::string& Checkpoint::meta_at(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end()) {
    throw std::runtime_error("checkpoint: missing metadata '" + key + "'");
  }
  return it->second;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kMagic << ' ' << kVersion << '\n';
  for (const auto& [k, v] : meta) {
    if (v.find('\n') != std::string::npos) {
      throw std::invalid_argument("checkpoint metadata value has newline");
    }
    out << "meta " << k << ' ' << v << '\n';
  }
  for (const auto& [name, m] : arrays) {
    out << "array " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out << ' ';
        out << FormatDouble(m(r, c));
      }
      out << '\n';
    }
  }
  out << "end\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != kMagic) {
    throw std::runtime_error(path.string() + ": not a checkpoint file");
  }
  if (version != kVersion) {
    throw std::runtime_error(path.string() + ": unsupported checkpoint version " +
                             std::to_string(version));
  }
  Checkpoint ckpt;
  std::string kind;
  while (in >> kind) {
    if (kind == "end") return ckpt;
    if (kind == "meta") {
      std::string key, value;
      in >> key;
      std::getline(in, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      ckpt.meta[key] = value;
    } else if (kind == "array") {
      std::string name, tok;
      long long rows = 0, cols = 0;
      in >> name >> rows >> cols;
      if (!in || rows < 0 || cols < 0) {
        throw std::runtime_error(path.string() + ": bad array header");
      }
      Matrix m(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
          if (!(in >> tok)) {
            throw std::runtime_error(path.string() + ": truncated array " + name);
          }
          m(r, c) = ParseDouble(tok);
        }
      }
      ckpt.arrays.emplace_back(name, std::move(m));
    } else {
      throw std::runtime_error(path.string() + ": unexpected token '" + kind +
                               "'");
    }
  }
  throw std::runtime_error(path.string() + ": missing end marker");
}

void AddNet(Checkpoint& ckpt, const std::string& prefix, const DenseNet& net) {
  ckpt.meta[prefix + ".activation"] = ActivationName(net.activation());
  ckpt.meta[prefix + ".num_layers"] = std::to_string(net.layers().size());
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const std::string base = prefix + ".layer" + std::to_string(l);
    ckpt.add(base + ".weight", net.layers()[l].weight);
    ckpt.add(base + ".bias", net.layers()[l].bias);
  }
}

DenseNet GetNet(const Checkpoint& ckpt, const std::string& prefix) {
  const auto n = static_cast<std::size_t>(
      ParseInt(ckpt.meta_at(prefix + ".num_layers")));
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < n; ++l) {
    const std::string base = prefix + ".layer" + std::to_string(l);
    const Matrix& b = ckpt.get(base + ".bias");
    layers.push_back(DenseLayer{ckpt.get(base + ".weight"), b.reshaped()});
  }
  return DenseNet(std::move(layers),
                  ParseActivation(ckpt.meta_at(prefix + ".activation")));
}

}  // namespace mbrl::nn

#include "mbrl/core/replay_buffer.h"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mbrl/core/number_format.h"

namespace mbrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim,
                           std::size_t action_dim)
    : capacity_(capacity),
      obs_dim_(obs_dim),
      action_dim_(action_dim),
      storage_(capacity, obs_dim, action_dim) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity 0");
  if (obs_dim == 0 || action_dim == 0) {
    throw std::invalid_argument("ReplayBuffer: zero obs or action dim");
  }
}

void ReplayBuffer::add(const Transition& t) {
  ValidateTransition(t);
  if (static_cast<std::size_t>(t.obs.size()) != obs_dim_ ||
      static_cast<std::size_t>(t.action.size()) != action_dim_) {
    throw std::invalid_argument("ReplayBuffer::add: dimension mismatch");
  }
  storage_.set(cursor_, t);
  cursor_ = (cursor_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

TransitionBatch ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (size_ == 0) throw std::runtime_error("ReplayBuffer::sample: empty buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> idx(batch_size);
  for (auto& i : idx) i = pick(rng);
  return storage_.gather(idx);
}

Transition ReplayBuffer::slot(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("ReplayBuffer::slot");
  return storage_.at(i);
}

std::vector<std::size_t> ReplayBuffer::chronological_slots() const {
  std::vector<std::size_t> out(size_);
  // Before wrap-around the oldest entry is slot 0; afterwards it is the cursor.
  const std::size_t start = size_ < capacity_ ? 0 : cursor_;
  for (std::size_t k = 0; k < size_; ++k) out[k] = (start + k) % capacity_;
  return out;
}

TransitionBatch ReplayBuffer::all() const {
  return storage_.gather(chronological_slots());
}

void ReplayBuffer::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << obs_dim_ << ' ' << action_dim_ << ' ' << size_ << ' ' << capacity_
      << '\n';
  for (std::size_t s : chronological_slots()) {
    const auto r = static_cast<Eigen::Index>(s);
    std::string line;
    auto put = [&line](double v) {
      if (!line.empty()) line += ' ';
      line += FormatDouble(v);
    };
    for (Eigen::Index c = 0; c < storage_.obs.cols(); ++c) put(storage_.obs(r, c));
    for (Eigen::Index c = 0; c < storage_.action.cols(); ++c) {
      put(storage_.action(r, c));
    }
    for (Eigen::Index c = 0; c < storage_.next_obs.cols(); ++c) {
      put(storage_.next_obs(r, c));
    }
    put(storage_.reward(r));
    line += storage_.done(r) ? " 1" : " 0";
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ReplayBuffer ReplayBuffer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string tok[4];
  if (!(hs >> tok[0] >> tok[1] >> tok[2] >> tok[3])) {
    throw std::runtime_error(path.string() + ": malformed header");
  }
  const auto s = static_cast<std::size_t>(ParseInt(tok[0]));
  const auto a = static_cast<std::size_t>(ParseInt(tok[1]));
  const auto n = static_cast<std::size_t>(ParseInt(tok[2]));
  const auto cap = static_cast<std::size_t>(ParseInt(tok[3]));
  if (n > cap) throw std::runtime_error(path.string() + ": size > capacity");
  ReplayBuffer buffer(cap, s, a);
  const std::size_t width = 2 * s + a + 2;
  std::string line;
  for (std::size_t row = 0; row < n; ++row) {
    if (!std::getline(in, line)) {
      throw std::runtime_error(path.string() + ": expected " +
                               std::to_string(n) + " rows, found " +
                               std::to_string(row));
    }
    std::istringstream ls(line);
    std::vector<std::string> fields;
    std::string f;
    while (ls >> f) fields.push_back(f);
    if (fields.size() != width) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(row) +
                               " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(width));
    }
    Transition t{Vector(s), Vector(a), Vector(s), 0.0, false};
    std::size_t k = 0;
    for (std::size_t i = 0; i < s; ++i) t.obs(i) = ParseDouble(fields[k++]);
    for (std::size_t i = 0; i < a; ++i) t.action(i) = ParseDouble(fields[k++]);
    for (std::size_t i = 0; i < s; ++i) t.next_obs(i) = ParseDouble(fields[k++]);
    t.reward = ParseDouble(fields[k++]);
    const auto d = ParseInt(fields[k]);
    if (d != 0 && d != 1) {
      throw std::runtime_error(path.string() + ": done flag must be 0 or 1");
    }
    t.done = d == 1;
    buffer.add(t);
  }
  return buffer;
}

}  // namespace mbrl

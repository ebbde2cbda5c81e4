#include "softcover/distribution.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace softcover {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw std::invalid_argument("Distribution: alphabet size must be >= 2");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream msg;
      msg << "Distribution: entry " << i << " is " << p;
      throw std::invalid_argument(msg.str());
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Distribution: entries sum to " << sum;
    throw std::invalid_argument(msg.str());
  }
}

Distribution Distribution::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double v : weights) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("Distribution::normalized: bad weight");
    sum += v;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("Distribution::normalized: zero mass");
  for (double& v : weights) v /= sum;
  return Distribution(std::move(weights));
}

Distribution Distribution::uniform(std::size_t size) {
  return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Distribution Distribution::point_mass(std::size_t size, std::size_t symbol) {
  std::vector<double> p(size, 0.0);
  p.at(symbol) = 1.0;
  return Distribution(std::move(p));
}

Channel::Channel(std::vector<Distribution> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("Channel: no input symbols");
  const std::size_t ny = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != ny) throw std::invalid_argument("Channel: rows have different output alphabets");
  }
  support_.resize(rows_.size() * ny);
  for (std::size_t x = 0; x < rows_.size(); ++x)
    for (std::size_t y = 0; y < ny; ++y) support_[x * ny + y] = rows_[x].in_support(y);
  for (std::size_t y = 0; y < ny; ++y) {
    bool reachable = false;
    for (std::size_t x = 0; x < rows_.size(); ++x) reachable = reachable || support_[x * ny + y];
    if (!reachable) {
      std::ostringstream msg;
      msg << "Channel: output symbol " << y << " is unreachable";
      throw std::invalid_argument(msg.str());
    }
  }
}

Channel Channel::from_matrix(std::size_t input_size, std::size_t output_size,
                             std::span<const double> row_major) {
  if (row_major.size() != input_size * output_size)
    throw std::invalid_argument("Channel::from_matrix: matrix size does not match alphabet sizes");
  std::vector<Distribution> rows;
  rows.reserve(input_size);
  for (std::size_t x = 0; x < input_size; ++x) {
    auto first = row_major.begin() + static_cast<std::ptrdiff_t>(x * output_size);
    rows.emplace_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(output_size)));
  }
  return Channel(std::move(rows));
}

JointType::JointType(Distribution input_marginal, std::vector<Distribution> conditional)
    : input_(std::move(input_marginal)), conditional_(std::move(conditional)) {
  if (conditional_.size() != input_.size())
    throw std::invalid_argument("JointType: need one conditional row per input symbol");
  for (const auto& r : conditional_) {
    if (r.size() != conditional_.front().size())
      throw std::invalid_argument("JointType: conditional rows have different output alphabets");
  }
}

JointType JointType::product(const Distribution& input_marginal, const Channel& w) {
  if (w.input_size() != input_marginal.size())
    throw std::invalid_argument("JointType::product: input alphabet mismatch");
  std::vector<Distribution> rows;
  for (std::size_t x = 0; x < w.input_size(); ++x) rows.push_back(w.row(x));
  return JointType(input_marginal, std::move(rows));
}

Distribution JointType::output_marginal() const {
  std::vector<double> q(output_size(), 0.0);
  for (std::size_t x = 0; x < input_size(); ++x)
    for (std::size_t y = 0; y < q.size(); ++y) q[y] += input_[x] * conditional_[x][y];
  return Distribution::normalized(std::move(q));
}

Channel make_z_channel(double w) {
  if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("make_z_channel: need 0 < w < 1");
  const double m[] = {1.0, 0.0, w, 1.0 - w};
  return Channel::from_matrix(2, 2, m);
}

Channel make_bsc(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw std::invalid_argument("make_bsc: bad crossover");
  const double m[] = {1.0 - crossover, crossover, crossover, 1.0 - crossover};
  return Channel::from_matrix(2, 2, m);
}

Channel make_identity_channel(std::size_t size) {
  std::vector<Distribution> rows;
  for (std::size_t x = 0; x < size; ++x) rows.push_back(Distribution::point_mass(size, x));
  return Channel(std::move(rows));
}

}  // namespace softcover

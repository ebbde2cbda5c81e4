#include "softcover/type_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "softcover/measures.hpp"

namespace softcover {

double TypeMeasures::lambda(double rate) const { return dm - dc + std::max(0.0, iq - rate); }

TypeSpace::TypeSpace(Channel w, Distribution p_in)
    : w_(std::move(w)), p_in_(std::move(p_in)), p_out_(softcover::output_marginal(p_in_, w_)) {
  if (p_in_.size() != w_.input_size()) throw std::invalid_argument("TypeSpace: input alphabet mismatch");
  i_xy_ = softcover::channel_mutual_information(p_in_, w_);

  const std::size_t nx = input_size(), ny = output_size();
  log_w_.assign(nx * ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      if (w_.supported(x, y)) log_w_[x * ny + y] = std::log(w_(x, y));
  log_p_out_.assign(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    if (p_out_.in_support(y)) log_p_out_[y] = std::log(p_out_[y]);

  std::size_t offset = 0;
  for (std::size_t x = 0; x < nx; ++x) {
    if (!(p_in_[x] > 0.0)) continue;
    RowBlock b;
    b.input = x;
    b.offset = offset;
    for (std::size_t y = 0; y < ny; ++y)
      if (w_.supported(x, y)) b.support.push_back(y);
    offset += b.free();
    blocks_.push_back(std::move(b));
  }
  dimension_ = static_cast<int>(offset);
}

bool TypeSpace::decode(std::span<const double> params, std::span<double> cond) const {
  const std::size_t ny = output_size();
  for (std::size_t x = 0; x < input_size(); ++x)
    for (std::size_t y = 0; y < ny; ++y) cond[x * ny + y] = w_(x, y);
  for (const auto& b : blocks_) {
    double* row = cond.data() + b.input * ny;
    std::fill(row, row + ny, 0.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < b.free(); ++j) {
      double c = params[b.offset + j];
      if (c < -1e-15) return false;
      c = std::max(c, 0.0);
      row[b.support[j]] = c;
      sum += c;
    }
    if (sum > 1.0 + 1e-12) return false;
    row[b.support.back()] = std::max(0.0, 1.0 - sum);
  }
  return true;
}

void TypeSpace::output_marginal(std::span<const double> cond, std::span<double> q_y) const {
  // Same accumulation and normalization as JointType::output_marginal, so the
  // true channel reproduces P_Y bit for bit.
  const std::size_t ny = output_size();
  std::fill(q_y.begin(), q_y.end(), 0.0);
  for (std::size_t x = 0; x < input_size(); ++x)
    for (std::size_t y = 0; y < ny; ++y) q_y[y] += p_in_[x] * cond[x * ny + y];
  double sum = 0.0;
  for (std::size_t y = 0; y < ny; ++y) sum += q_y[y];
  for (std::size_t y = 0; y < ny; ++y) q_y[y] /= sum;
}

TypeMeasures TypeSpace::evaluate(std::span<const double> cond) const {
  const std::size_t ny = output_size();
  double q_y[64];
  std::vector<double> q_heap;
  std::span<double> q(q_y, ny);
  if (ny > 64) {
    q_heap.resize(ny);
    q = q_heap;
  }
  output_marginal(cond, q);

  TypeMeasures m;
  double h_y = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    const double v = q[y];
    if (v > kSupportEps) {
      const double lv = std::log(v);
      h_y -= v * lv;
      m.dm += v * (lv - log_p_out_[y]);
    }
  }
  double h_y_x = 0.0;
  for (const auto& b : blocks_) {
    const double px = p_in_[b.input];
    const double* row = cond.data() + b.input * ny;
    const double* lw = log_w_.data() + b.input * ny;
    double hx = 0.0, dx = 0.0;
    for (std::size_t y : b.support) {
      const double v = row[y];
      if (v > kSupportEps) {
        const double lv = std::log(v);
        hx -= v * lv;
        dx += v * (lv - lw[y]);
      }
    }
    h_y_x += px * hx;
    m.dc += px * dx;
  }
  m.dm = std::max(0.0, m.dm);
  m.dc = std::max(0.0, m.dc);
  m.iq = std::max(0.0, h_y - h_y_x);
  return m;
}

JointType TypeSpace::joint_type(std::span<const double> cond) const {
  const std::size_t ny = output_size();
  std::vector<Distribution> rows;
  rows.reserve(input_size());
  for (std::size_t x = 0; x < input_size(); ++x) {
    std::vector<double> r(cond.begin() + static_cast<std::ptrdiff_t>(x * ny),
                          cond.begin() + static_cast<std::ptrdiff_t>((x + 1) * ny));
    rows.push_back(Distribution::normalized(std::move(r)));
  }
  return JointType(p_in_, std::move(rows));
}

std::vector<double> TypeSpace::encode(std::span<const double> cond) const {
  const std::size_t ny = output_size();
  std::vector<double> params(static_cast<std::size_t>(dimension_));
  for (const auto& b : blocks_)
    for (std::size_t j = 0; j < b.free(); ++j) params[b.offset + j] = cond[b.input * ny + b.support[j]];
  return params;
}

std::vector<double> TypeSpace::true_channel_params() const {
  const std::size_t ny = output_size();
  std::vector<double> cond(matrix_size());
  for (std::size_t x = 0; x < input_size(); ++x)
    for (std::size_t y = 0; y < ny; ++y) cond[x * ny + y] = w_(x, y);
  return encode(cond);
}

}  // namespace softcover

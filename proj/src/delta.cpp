#include "softcover/delta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace softcover {

namespace {

constexpr int kMaxSinkhorn = 20000;
constexpr double kMarginTol = 1e-14;
constexpr int kBisection = 60;

}  // namespace

bool DeltaSolver::reachable(std::span<const double> q_out) const {
  // Hall's condition: every output set S needs q(S) <= P_X(inputs reaching S).
  const std::size_t ny = space_->output_size();
  if (ny > 20) return true;
  const auto& w = space_->channel();
  const auto& p = space_->input();
  for (unsigned long mask = 1; mask < (1ul << ny); ++mask) {
    double q_mass = 0.0;
    for (std::size_t y = 0; y < ny; ++y)
      if (mask & (1ul << y)) q_mass += q_out[y];
    if (q_mass <= kSupportEps) continue;
    double p_mass = 0.0;
    for (std::size_t x = 0; x < space_->input_size(); ++x) {
      if (!(p[x] > 0.0)) continue;
      for (std::size_t y = 0; y < ny; ++y)
        if ((mask & (1ul << y)) && w.supported(x, y)) {
          p_mass += p[x];
          break;
        }
    }
    if (q_mass > p_mass + 1e-12) return false;
  }
  return true;
}

std::vector<double> DeltaSolver::tilted_conditional(std::span<const double> q_out, double s) const {
  if (!reachable(q_out)) return {};
  const std::size_t nx = space_->input_size(), ny = space_->output_size();
  const auto& w = space_->channel();
  const auto& p = space_->input();

  std::vector<double> kernel(nx * ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    if (!(p[x] > 0.0)) continue;
    for (std::size_t y = 0; y < ny; ++y)
      if (w.supported(x, y)) kernel[x * ny + y] = s == 0.0 ? 1.0 : std::pow(w(x, y), s);
  }

  std::vector<double> a(nx, 1.0), b(ny, 1.0);
  for (std::size_t y = 0; y < ny; ++y)
    if (!(q_out[y] > kSupportEps)) b[y] = 0.0;
  for (int it = 0; it < kMaxSinkhorn; ++it) {
    for (std::size_t x = 0; x < nx; ++x) {
      if (!(p[x] > 0.0)) continue;
      double r = 0.0;
      for (std::size_t y = 0; y < ny; ++y) r += kernel[x * ny + y] * b[y];
      a[x] = r > 0.0 ? p[x] / r : 0.0;
    }
    for (std::size_t y = 0; y < ny; ++y) {
      if (!(q_out[y] > kSupportEps)) continue;
      double c = 0.0;
      for (std::size_t x = 0; x < nx; ++x) c += kernel[x * ny + y] * a[x];
      b[y] = c > 0.0 ? q_out[y] / c : 0.0;
    }
    // Columns are exact after the b step; stop when rows are too.
    double err = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      if (!(p[x] > 0.0)) continue;
      double r = 0.0;
      for (std::size_t y = 0; y < ny; ++y) r += a[x] * kernel[x * ny + y] * b[y];
      err = std::max(err, std::abs(r - p[x]));
    }
    if (err < kMarginTol) break;
  }

  std::vector<double> cond(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    double* row = cond.data() + x * ny;
    if (!(p[x] > 0.0)) {
      for (std::size_t y = 0; y < ny; ++y) row[y] = w(x, y);
      continue;
    }
    double sum = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      row[y] = a[x] * kernel[x * ny + y] * b[y];
      sum += row[y];
    }
    for (std::size_t y = 0; y < ny; ++y) row[y] /= sum;
  }
  return cond;
}

double DeltaSolver::solve(std::span<const double> q_out, double rate) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const auto& p_out = space_->output();
  double dm = 0.0;
  for (std::size_t y = 0; y < q_out.size(); ++y) {
    if (!(q_out[y] > kSupportEps)) continue;
    if (!p_out.in_support(y)) return kNegInf;
    dm += q_out[y] * std::log(q_out[y] / p_out[y]);
  }
  dm = std::max(dm, 0.0);

  auto at = [&](double s) -> std::pair<bool, TypeMeasures> {
    auto cond = tilted_conditional(q_out, s);
    if (cond.empty()) return {false, {}};
    return {true, space_->evaluate(cond)};
  };

  auto [ok1, m1] = at(1.0);
  if (!ok1) return kNegInf;
  if (m1.iq <= rate) return dm - m1.dc;

  auto [ok0, m0] = at(0.0);
  if (m0.iq > rate + 1e-12) return kNegInf;
  double lo = 0.0, hi = 1.0;
  TypeMeasures best = m0;
  for (int i = 0; i < kBisection; ++i) {
    const double mid = 0.5 * (lo + hi);
    auto [ok, m] = at(mid);
    if (m.iq <= rate) {
      lo = mid;
      best = m;
    } else {
      hi = mid;
    }
  }
  return dm - best.dc;
}

double DeltaSolver::value(std::span<const double> q_out, double rate) const {
  std::vector<long long> key;
  key.reserve(q_out.size() + 1);
  for (double v : q_out) key.push_back(std::llround(v * 1e9));
  key.push_back(std::llround(rate * 1e12));
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  // Solve at the rounded marginal so the cached value does not depend on
  // which member of the cell arrived first.
  std::vector<double> q(q_out.size());
  double sum = 0.0;
  for (std::size_t y = 0; y < q.size(); ++y) {
    q[y] = std::max(0.0, static_cast<double>(key[y]) * 1e-9);
    sum += q[y];
  }
  for (double& v : q) v /= sum;
  const double v = solve(q, rate);
  std::lock_guard lock(mutex_);
  cache_.emplace(std::move(key), v);
  return v;
}

ExtReal delta(const Distribution& q_out, const Channel& w, const Distribution& p_in, double rate,
              const SolverConfig& cfg) {
  cfg.validate();
  TypeSpace space(w, p_in);
  DeltaSolver solver(space);
  return ExtReal(solver.value(q_out.probs(), rate));
}

}  // namespace softcover

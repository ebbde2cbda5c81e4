#include "softcover/zchannel_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "softcover/measures.hpp"

namespace softcover {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double zc_mutual_information(double q) {
  return std::max(0.0, binary_entropy((1.0 + q) / 2.0) - 0.5 * binary_entropy(q));
}

double zc_dc(double q, double w) { return 0.5 * binary_kl(q, w); }

double zc_dm(double q, double w) { return binary_kl((1.0 + q) / 2.0, (1.0 + w) / 2.0); }

ZChannelOracle::ZChannelOracle(double w, std::size_t grid) : w_(w) {
  if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("ZChannelOracle: w must lie in (0,1)");
  if (grid < 2) throw std::invalid_argument("ZChannelOracle: grid must be >= 2");
  q_.reserve(grid + 2);
  for (std::size_t i = 0; i <= grid; ++i) q_.push_back(static_cast<double>(i) / static_cast<double>(grid));
  if (!std::binary_search(q_.begin(), q_.end(), w)) q_.insert(std::lower_bound(q_.begin(), q_.end(), w), w);
  for (double q : q_) {
    dm_.push_back(zc_dm(q, w));
    dc_.push_back(zc_dc(q, w));
    iq_.push_back(zc_mutual_information(q));
  }
}

ExponentResult ZChannelOracle::result(std::size_t i, double value, double rate) const {
  ExponentResult r;
  r.value = value;
  r.feasible = true;
  r.branch = iq_[i] <= rate ? Branch::bulk : Branch::sparse;
  r.measures = TypeMeasures{dm_[i], dc_[i], iq_[i]};
  r.minimizer = JointType(Distribution::uniform(2),
                          {Distribution({1.0, 0.0}), Distribution::normalized({q_[i], 1.0 - q_[i]})});
  return r;
}

ExponentResult ZChannelOracle::fa(double rate, double tau) const {
  std::size_t arg = q_.size();
  double best = kInf;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    const double excess = std::max(0.0, iq_[i] - rate);
    if (dm_[i] - dc_[i] + excess < tau) continue;
    const double v = dm_[i] + excess;
    if (v < best) {
      best = v;
      arg = i;
    }
  }
  if (arg == q_.size()) return {};
  return result(arg, best, rate);
}

ExponentResult ZChannelOracle::md(double rate, double tau, bool use_delta) const {
  if (!(lambda_min(rate) < tau)) return {};
  const bool delta_active = use_delta && tau <= 0.0;
  std::size_t arg = q_.size();
  double best = kInf;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    if (dm_[i] - dc_[i] + std::max(0.0, iq_[i] - rate) > tau) continue;
    if (delta_active && iq_[i] <= rate && dm_[i] - dc_[i] > tau) continue;
    if (dc_[i] < best) {
      best = dc_[i];
      arg = i;
    }
  }
  if (arg == q_.size()) return {};
  return result(arg, best, rate);
}

double ZChannelOracle::lambda_max(double rate) const {
  double v = -kInf;
  for (std::size_t i = 0; i < q_.size(); ++i) v = std::max(v, dm_[i] - dc_[i] + std::max(0.0, iq_[i] - rate));
  return v;
}

double ZChannelOracle::lambda_min(double rate) const {
  double v = kInf;
  for (std::size_t i = 0; i < q_.size(); ++i) v = std::min(v, dm_[i] - dc_[i] + std::max(0.0, iq_[i] - rate));
  return v;
}

ZChannelOracle::Flat ZChannelOracle::flat(double rate) const {
  std::size_t arg = 0;
  double best = kInf;
  for (std::size_t i = 0; i < q_.size(); ++i) {
    const double v = dm_[i] + std::max(0.0, iq_[i] - rate);
    if (v < best) {
      best = v;
      arg = i;
    }
  }
  return {q_[arg], best, dm_[arg] - dc_[arg] + std::max(0.0, iq_[arg] - rate)};
}

ExponentResult zchannel_oracle_fa(double w_param, double rate, double tau, std::size_t grid) {
  return ZChannelOracle(w_param, grid).fa(rate, tau);
}

ExponentResult zchannel_oracle_md(double w_param, double rate, double tau, std::size_t grid) {
  if (!(rate > 0.0)) throw std::invalid_argument("zchannel_oracle_md: rate must be > 0");
  return ZChannelOracle(w_param, grid).md(rate, tau);
}

}  // namespace softcover

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace softcover {

// Probabilities at or below this are exact zeros for support purposes.
inline constexpr double kSupportEps = 1e-15;

// Probability vector on a finite alphabet of size >= 2.
// Validated once at construction; immutable afterwards.
class Distribution {
 public:
  // Throws std::invalid_argument unless entries are finite, >= 0 and sum to 1
  // within 1e-12.
  explicit Distribution(std::vector<double> probs);

  // Rescales a non-negative vector with positive mass to sum to one.
  static Distribution normalized(std::vector<double> weights);
  static Distribution uniform(std::size_t size);
  static Distribution point_mass(std::size_t size, std::size_t symbol);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }
  bool in_support(std::size_t i) const { return probs_[i] > kSupportEps; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> probs_;
};

// Discrete memoryless channel W(y|x), one Distribution per input symbol.
class Channel {
 public:
  // Rows must share one output alphabet and every output symbol must be
  // reachable from some input; std::invalid_argument otherwise.
  explicit Channel(std::vector<Distribution> rows);

  // Row-major |X| x |Y| matrix.
  static Channel from_matrix(std::size_t input_size, std::size_t output_size,
                             std::span<const double> row_major);

  std::size_t input_size() const { return rows_.size(); }
  std::size_t output_size() const { return rows_.front().size(); }
  const Distribution& row(std::size_t x) const { return rows_[x]; }
  double operator()(std::size_t x, std::size_t y) const { return rows_[x][y]; }
  bool supported(std::size_t x, std::size_t y) const { return support_[x * output_size() + y]; }

  friend bool operator==(const Channel& a, const Channel& b) { return a.rows_ == b.rows_; }

 private:
  std::vector<Distribution> rows_;
  std::vector<bool> support_;
};

// Joint type Q_XY with Q_X pinned to the input marginal; stores Q_{Y|X} only.
class JointType {
 public:
  JointType(Distribution input_marginal, std::vector<Distribution> conditional);

  // P_X (x) W, the type of a typical (codeword, output) pair.
  static JointType product(const Distribution& input_marginal, const Channel& w);

  const Distribution& input_marginal() const { return input_; }
  const Distribution& conditional(std::size_t x) const { return conditional_[x]; }
  std::size_t input_size() const { return input_.size(); }
  std::size_t output_size() const { return conditional_.front().size(); }

  // Q_Y(y) = sum_x P_X(x) Q(y|x)
  Distribution output_marginal() const;

 private:
  Distribution input_;
  std::vector<Distribution> conditional_;
};

Channel make_z_channel(double w);         // W(0|0)=1, W(0|1)=w
Channel make_bsc(double crossover);
Channel make_identity_channel(std::size_t size);

}  // namespace softcover

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "softcover/distribution.hpp"

namespace softcover {

// The three quantities every exponent formula is built from. All finite on
// the type space (conditional rows never leave the channel support).
struct TypeMeasures {
  double dm = 0.0;  // D(Q_Y || P_Y)
  double dc = 0.0;  // D(Q_{Y|X} || W | P_X)
  double iq = 0.0;  // I_Q(X;Y), clamped at zero

  double lambda_bulk() const { return dm - dc; }
  double lambda(double rate) const;
};

// Joint types Q_XY with Q_X = P_X and D_c < inf, parameterized by free
// coordinates. Each input row with P_X(x) > 0 and k supported outputs
// contributes k-1 coordinates (the leading supported entries; the last
// supported entry takes the remainder). Rows with P_X(x) = 0 stay at W(.|x).
class TypeSpace {
 public:
  TypeSpace(Channel w, Distribution p_in);

  const Channel& channel() const { return w_; }
  const Distribution& input() const { return p_in_; }
  const Distribution& output() const { return p_out_; }
  double channel_mutual_information() const { return i_xy_; }

  int dimension() const { return dimension_; }
  std::size_t input_size() const { return w_.input_size(); }
  std::size_t output_size() const { return w_.output_size(); }
  std::size_t matrix_size() const { return input_size() * output_size(); }

  struct RowBlock {
    std::size_t input = 0;
    std::size_t offset = 0;             // first free coordinate
    std::vector<std::size_t> support;   // supported outputs, ascending
    std::size_t free() const { return support.size() - 1; }
  };
  const std::vector<RowBlock>& blocks() const { return blocks_; }

  // Writes the row-major |X| x |Y| conditional matrix. Returns false when a
  // row leaves the simplex (negative coordinate or coordinates summing > 1).
  bool decode(std::span<const double> params, std::span<double> cond) const;

  TypeMeasures evaluate(std::span<const double> cond) const;

  void output_marginal(std::span<const double> cond, std::span<double> q_y) const;

  JointType joint_type(std::span<const double> cond) const;

  // Coordinates of P_X (x) W.
  std::vector<double> true_channel_params() const;

  // Free coordinates of a conditional matrix (inverse of decode on the space).
  std::vector<double> encode(std::span<const double> cond) const;

 private:
  Channel w_;
  Distribution p_in_;
  Distribution p_out_;
  double i_xy_ = 0.0;
  int dimension_ = 0;
  std::vector<RowBlock> blocks_;
  std::vector<double> log_w_;      // log W(y|x), 0 off support
  std::vector<double> log_p_out_;  // log P_Y(y)
};

}  // namespace softcover

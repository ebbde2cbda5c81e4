#pragma once

#include <compare>
#include <limits>
#include <string>

namespace softcover {

// Real number in nats extended with +inf and -inf.
//
// Divergences are +inf off the channel support and the threshold functional
// is -inf there, so every information measure in the library returns an
// ExtReal. NaN is never representable: construction from NaN throws, and
// so does (+inf) + (-inf).
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v);  // NOLINT(google-explicit-constructor): numeric literal ergonomics

  static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
  static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

  double value() const { return value_; }
  bool is_finite() const;
  bool is_pos_inf() const;
  bool is_neg_inf() const;

  ExtReal operator-() const { return ExtReal(-value_); }
  ExtReal& operator+=(ExtReal rhs);
  ExtReal& operator-=(ExtReal rhs);

  friend ExtReal operator+(ExtReal a, ExtReal b) { return a += b; }
  friend ExtReal operator-(ExtReal a, ExtReal b) { return a -= b; }
  friend bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }
  friend std::partial_ordering operator<=>(ExtReal a, ExtReal b) { return a.value_ <=> b.value_; }

  // "inf" / "-inf", otherwise 17 significant digits (round-trips).
  std::string to_string() const;

 private:
  double value_ = 0.0;
};

// [a]_+ = max(a, 0).
ExtReal positive_part(ExtReal a);

}  // namespace softcover

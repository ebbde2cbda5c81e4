#include "softcover/ext_real.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace softcover {

ExtReal::ExtReal(double v) : value_(v) {
  if (std::isnan(v)) throw std::domain_error("ExtReal: NaN is not an extended real");
}

bool ExtReal::is_finite() const { return std::isfinite(value_); }
bool ExtReal::is_pos_inf() const { return std::isinf(value_) && value_ > 0; }
bool ExtReal::is_neg_inf() const { return std::isinf(value_) && value_ < 0; }

ExtReal& ExtReal::operator+=(ExtReal rhs) {
  if ((is_pos_inf() && rhs.is_neg_inf()) || (is_neg_inf() && rhs.is_pos_inf()))
    throw std::domain_error("ExtReal: inf - inf is undefined");
  value_ += rhs.value_;
  return *this;
}

ExtReal& ExtReal::operator-=(ExtReal rhs) { return *this += -rhs; }

std::string ExtReal::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

ExtReal positive_part(ExtReal a) { return a > ExtReal(0.0) ? a : ExtReal(0.0); }

}  // namespace softcover

#pragma once

#include <cstdint>
#include <vector>

namespace psq::buchstab {

// Limit of w(t) as t -> infinity: e^{-gamma}.
inline constexpr double w_limit = 0.56145948356688517;

// Dense grid of the continuous delay-equation solution w on (1, t_max]:
// w(t) = 1/t on (1,2], (t w(t))' = w(t-1) for t > 2.
struct BuchstabTable {
  double t_max = 0;            // grid-aligned (integers are grid points)
  double step = 0;             // effective step = 1 / n_per_unit
  std::int64_t n_per_unit = 0; // grid points per unit length
  std::vector<double> values;  // values[j] = w(1 + (j+1)*step), j = 0..M-1

  double w_at(std::int64_t j) const {  // w(1 + j*step), j = 0..M
    return j == 0 ? 1.0 : values[static_cast<std::size_t>(j - 1)];
  }
  std::int64_t last_index() const {
    return static_cast<std::int64_t>(values.size());
  }
};

// Trapezoidal integration of u = t*w forward from u(2) = 1, delayed term read
// from the finished prefix.  2 <= t_max <= 20, 1e-6 <= step <= 1e-2.
BuchstabTable build_table(double t_max, double step);

// w(t) for 1 < t <= t_max: exact 1/t branch below 2, linear interpolation above.
double eval_w(const BuchstabTable& table, double t);

// Same, but t > t_max returns the limit e^{-gamma}.  Used by the sieve-constant
// integrands whose arguments can exceed any fixed table range.
double eval_w_extended(const BuchstabTable& table, double t);

}  // namespace psq::buchstab

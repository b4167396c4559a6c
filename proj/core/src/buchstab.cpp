#include "psq/buchstab.hpp"

#include <cmath>
#include <stdexcept>

namespace psq::buchstab {

BuchstabTable build_table(double t_max, double step) {
  if (!(t_max >= 2.0 && t_max <= 20.0))
    throw std::invalid_argument("build_table: t_max must lie in [2, 20]");
  if (!(step >= 1e-6 && step <= 1e-2))
    throw std::invalid_argument("build_table: step must lie in [1e-6, 1e-2]");

  BuchstabTable tab;
  // Snap the step so integers land exactly on grid points (the delayed
  // derivative has kinks there and the stencil must not straddle them).
  tab.n_per_unit = std::llround(1.0 / step);
  tab.step = 1.0 / static_cast<double>(tab.n_per_unit);
  const std::int64_t n = tab.n_per_unit;
  const std::int64_t m = std::llround((t_max - 1.0) * static_cast<double>(n));
  tab.t_max = 1.0 + static_cast<double>(m) * tab.step;
  tab.values.assign(static_cast<std::size_t>(m), 0.0);

  // Exact branch: w(1 + j/n) = n/(n + j) for grid points up to t = 2.
  for (std::int64_t j = 1; j <= std::min(n, m); ++j)
    tab.values[static_cast<std::size_t>(j - 1)] =
        static_cast<double>(n) / static_cast<double>(n + j);

  // u = t*w, u' = w(t-1); trapezoid over each cell, delay read from prefix.
  double u = 1.0;  // u(2) = 2 * (1/2)
  const double h = tab.step;
  for (std::int64_t j = n; j < m; ++j) {
    u += 0.5 * h * (tab.w_at(j - n) + tab.w_at(j + 1 - n));
    tab.values[static_cast<std::size_t>(j)] =
        u * static_cast<double>(n) / static_cast<double>(n + j + 1);
  }
  return tab;
}

double eval_w(const BuchstabTable& table, double t) {
  if (!(t > 1.0 && t <= table.t_max))
    throw std::domain_error("eval_w: t outside (1, t_max]");
  if (t <= 2.0) return 1.0 / t;
  double pos = (t - 1.0) * static_cast<double>(table.n_per_unit);
  std::int64_t j = static_cast<std::int64_t>(pos);
  if (j >= table.last_index()) j = table.last_index() - 1;
  double frac = pos - static_cast<double>(j);
  return table.w_at(j) * (1.0 - frac) + table.w_at(j + 1) * frac;
}

double eval_w_extended(const BuchstabTable& table, double t) {
  if (t > table.t_max) return w_limit;
  return eval_w(table, t);
}

}  // namespace psq::buchstab

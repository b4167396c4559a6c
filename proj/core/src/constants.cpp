#include "psq/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "psq/buchstab.hpp"
#include "psq/common.hpp"

namespace psq::constants {

namespace {

using buchstab::BuchstabTable;

// Largest Buchstab argument reachable from the region: u's are bounded below
// by a = 2*theta2 - 1, so (1 - k*a) / a caps the 2-D (k = 2) and 3-D (k = 3)
// arguments.  The table is clamped at 16; beyond it w is the limit constant
// to well under 1e-12.
BuchstabTable make_table(double theta2, bool plus) {
  const double a = 2.0 * theta2 - 1.0;
  const double need = plus ? std::max(3.0, (1.0 - 3.0 * a) / a)
                           : (1.0 - 2.0 * a) / a;
  const double t_max = std::clamp(std::ceil(need), 3.0, 16.0);
  return buchstab::build_table(t_max, 1e-4);
}

void validate(double theta2, double eps, std::uint64_t resolution) {
  if (!(theta2 > 0.5 && theta2 < 1.0))
    throw std::invalid_argument("constants: theta2 must lie in (1/2, 1)");
  if (eps < 0.0)
    throw std::invalid_argument("constants: eps must be non-negative");
  if (resolution < 2)
    throw std::invalid_argument("constants: resolution must be at least 2");
}

// Every integrand is w(t) / (product of u's >= a), so this is a hard cap;
// exceeding it means the masking logic let a sample escape the region.
void check_bound(double max_f, double a, int u_power) {
  const double cap = (1.0 + 1e-9) / std::pow(a, u_power);
  if (max_f > cap)
    throw ConsistencyError("constants: integrand exceeded its region bound");
}

struct Integral {
  double value = 0.0;
  double max_f = 0.0;
};

// 2-D midpoint rule for the minus region on box (a, 1/2)^2.  Cells on the
// u2 = u1 diagonal enter with weight 1/2 (the ordered fraction of the cell);
// the slanted constraints are handled by the midpoint indicator.
Integral grid_minus(double theta2, const BuchstabTable& tab, std::uint64_t n,
                    int workers) {
  const double a = 2.0 * theta2 - 1.0;
  const double b = 0.5;
  Integral out;
  if (a >= b) return out;
  const double h = (b - a) / static_cast<double>(n);
  const double cap = 2.0 - 2.0 * theta2;
  std::vector<double> row(n, 0.0), rowmax(n, 0.0);
  parallel_for_blocks(static_cast<std::int64_t>(n), workers,
                      [&](std::int64_t i) {
    const double u1 = a + (static_cast<double>(i) + 0.5) * h;
    double s = 0.0, mx = 0.0;
    for (std::int64_t j = 0; j <= i; ++j) {
      const double u2 = a + (static_cast<double>(j) + 0.5) * h;
      if (u1 + 2.0 * u2 >= 1.0) break;  // also enforces t > 1
      if (u1 + u2 >= cap) break;
      const double t = (1.0 - u1 - u2) / u2;
      const double f = buchstab::eval_w_extended(tab, t) / (u1 * u2 * u2);
      mx = std::max(mx, f);
      s += (j == i ? 0.5 : 1.0) * f;
    }
    row[static_cast<std::size_t>(i)] = s;
    rowmax[static_cast<std::size_t>(i)] = mx;
  });
  for (double s : row) out.value += s;
  out.value *= h * h;
  for (double m : rowmax) out.max_f = std::max(out.max_f, m);
  return out;
}

// 1-D term of the plus constant, split at u = 1/3 where the Buchstab
// argument crosses 2 and w loses smoothness.
double grid_plus1(const BuchstabTable& tab, std::uint64_t n) {
  const double splits[3] = {0.25, 1.0 / 3.0, 0.5};
  double total = 0.0;
  for (int p = 0; p < 2; ++p) {
    const double lo = splits[p], hi = splits[p + 1];
    const double h = (hi - lo) / static_cast<double>(n);
    double s = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double u = lo + (static_cast<double>(i) + 0.5) * h;
      s += buchstab::eval_w_extended(tab, (1.0 - u) / u) / (u * u);
    }
    total += s * h;
  }
  return total;
}

// 3-D midpoint rule for the plus region on box (a, 1/4)^3 with exact
// fractional weights where cell indices tie on the ordering chain.
Integral grid_plus3(double theta2, const BuchstabTable& tab,
                    std::uint64_t res, int workers) {
  const double a = 2.0 * theta2 - 1.0;
  const double b = 0.25;
  Integral out;
  if (a >= b) return out;
  const auto n = std::max<std::int64_t>(
      2, std::llround(std::pow(static_cast<double>(res), 2.0 / 3.0)));
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> slab(static_cast<std::size_t>(n), 0.0);
  std::vector<double> slabmax(static_cast<std::size_t>(n), 0.0);
  parallel_for_blocks(n, workers, [&](std::int64_t i1) {
    const double u1 = a + (static_cast<double>(i1) + 0.5) * h;
    double s = 0.0, mx = 0.0;
    for (std::int64_t i2 = 0; i2 <= i1; ++i2) {
      const double u2 = a + (static_cast<double>(i2) + 0.5) * h;
      for (std::int64_t i3 = 0; i3 <= i2; ++i3) {
        const double u3 = a + (static_cast<double>(i3) + 0.5) * h;
        double wgt = 1.0;
        if (i3 == i2 && i2 == i1) wgt = 1.0 / 6.0;
        else if (i3 == i2 || i2 == i1) wgt = 0.5;
        const double t = (1.0 - u1 - u2 - u3) / u3;  // > 1 since all u < 1/4
        const double f =
            buchstab::eval_w_extended(tab, t) / (u1 * u2 * u3 * u3);
        mx = std::max(mx, f);
        s += wgt * f;
      }
    }
    slab[static_cast<std::size_t>(i1)] = s;
    slabmax[static_cast<std::size_t>(i1)] = mx;
  });
  for (double s : slab) out.value += s;
  out.value *= h * h * h;
  for (double m : slabmax) out.max_f = std::max(out.max_f, m);
  return out;
}

struct McIntegral {
  double value = 0.0;
  double error = 0.0;  // 3 x batch-means standard error
  double max_f = 0.0;
  std::uint64_t samples = 0;
};

constexpr int mc_blocks = 64;

std::uint64_t block_state(std::uint64_t seed, int block) {
  // Scramble through the generator's own mixer: splitmix states advance by a
  // fixed constant, so unscrambled seed*k offsets would put every block on
  // the same arithmetic progression and correlate their samples.
  std::uint64_t s =
      seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(block + 1);
  return splitmix64(s);
}

// Shared Monte Carlo driver: uniform samples on a box of the given dimension,
// masked integrand supplied by the caller.
template <typename F>
McIntegral mc_region(double lo, double hi, int dim, std::uint64_t samples,
                     std::uint64_t seed, int workers, F&& masked_f) {
  McIntegral out;
  if (lo >= hi) return out;
  const std::uint64_t per = (samples + mc_blocks - 1) / mc_blocks;
  out.samples = per * mc_blocks;
  const double width = hi - lo;
  double volume = 1.0;
  for (int d = 0; d < dim; ++d) volume *= width;
  std::vector<double> mean(mc_blocks, 0.0), bmax(mc_blocks, 0.0);
  parallel_for_blocks(mc_blocks, workers, [&](std::int64_t k) {
    std::uint64_t state = block_state(seed, static_cast<int>(k));
    double s = 0.0, mx = 0.0;
    double u[3] = {0.0, 0.0, 0.0};
    for (std::uint64_t i = 0; i < per; ++i) {
      for (int d = 0; d < dim; ++d) u[d] = lo + width * uniform01(state);
      const double f = masked_f(u);
      if (f > 0.0) {
        s += f;
        mx = std::max(mx, f);
      }
    }
    mean[static_cast<std::size_t>(k)] = s / static_cast<double>(per);
    bmax[static_cast<std::size_t>(k)] = mx;
  });
  double m = 0.0;
  for (double v : mean) m += v;
  m /= mc_blocks;
  double var = 0.0;
  for (double v : mean) var += (v - m) * (v - m);
  var /= (mc_blocks - 1);
  const double se = std::sqrt(var / mc_blocks);
  out.value = volume * m;
  out.error = 3.0 * volume * se;
  for (double v : bmax) out.max_f = std::max(out.max_f, v);
  return out;
}

McIntegral mc_minus(double theta2, const BuchstabTable& tab,
                    std::uint64_t samples, std::uint64_t seed, int workers) {
  const double a = 2.0 * theta2 - 1.0;
  const double cap = 2.0 - 2.0 * theta2;
  return mc_region(a, 0.5, 2, samples, seed, workers, [&](const double* u) {
    const double u1 = u[0], u2 = u[1];
    if (u2 >= u1 || u1 + 2.0 * u2 >= 1.0 || u1 + u2 >= cap) return 0.0;
    return buchstab::eval_w_extended(tab, (1.0 - u1 - u2) / u2) /
           (u1 * u2 * u2);
  });
}

McIntegral mc_plus3(double theta2, const BuchstabTable& tab,
                    std::uint64_t samples, std::uint64_t seed, int workers) {
  const double a = 2.0 * theta2 - 1.0;
  return mc_region(a, 0.25, 3, samples, seed, workers, [&](const double* u) {
    const double u1 = u[0], u2 = u[1], u3 = u[2];
    if (!(u3 < u2 && u2 < u1)) return 0.0;
    return buchstab::eval_w_extended(tab, (1.0 - u1 - u2 - u3) / u3) /
           (u1 * u2 * u3 * u3);
  });
}

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::sigma2_minus: return "sigma2_minus";
    case Kind::sigma2_plus: return "sigma2_plus";
    case Kind::combined: return "combined";
  }
  return "unknown";
}

const char* method_name(Method m) {
  return m == Method::grid ? "grid" : "monte_carlo";
}

Method parse_method(const std::string& s) {
  if (s == "grid") return Method::grid;
  if (s == "monte_carlo") return Method::monte_carlo;
  throw std::invalid_argument("unknown method: " + s);
}

SieveConstant sigma2_minus(double theta2, double eps, Method method,
                           std::uint64_t resolution, std::uint64_t seed,
                           int workers) {
  validate(theta2, eps, resolution);
  const double a = 2.0 * theta2 - 1.0;
  const auto tab = make_table(theta2, false);
  SieveConstant out;
  out.kind = Kind::sigma2_minus;
  out.theta2 = theta2;
  out.eps = eps;
  out.method = method;
  out.resolution = resolution;
  if (method == Method::grid) {
    const auto full = grid_minus(theta2, tab, resolution, workers);
    const auto half =
        grid_minus(theta2, tab, std::max<std::uint64_t>(2, resolution / 2),
                   workers);
    check_bound(full.max_f, a, 3);
    out.multi_dim = full.value;
    out.error = std::abs(full.value - half.value);
  } else {
    const auto mc = mc_minus(theta2, tab, resolution, seed, workers);
    check_bound(mc.max_f, a, 3);
    out.multi_dim = mc.value;
    out.error = mc.error;
    out.resolution = mc.samples;
    out.seed = seed;
  }
  out.value = 1.0 - out.multi_dim;
  return out;
}

SieveConstant sigma2_plus(double theta2, double eps, Method method,
                          std::uint64_t resolution, std::uint64_t seed,
                          int workers) {
  validate(theta2, eps, resolution);
  const double a = 2.0 * theta2 - 1.0;
  const auto tab = make_table(theta2, true);
  SieveConstant out;
  out.kind = Kind::sigma2_plus;
  out.theta2 = theta2;
  out.eps = eps;
  out.method = method;
  out.resolution = resolution;
  if (method == Method::grid) {
    out.one_dim = grid_plus1(tab, resolution);
    const auto full = grid_plus3(theta2, tab, resolution, workers);
    const auto half =
        grid_plus3(theta2, tab, std::max<std::uint64_t>(2, resolution / 2),
                   workers);
    check_bound(full.max_f, a, 4);
    out.multi_dim = full.value;
    const double half1 =
        grid_plus1(tab, std::max<std::uint64_t>(2, resolution / 2));
    out.error = std::abs(full.value - half.value) +
                std::abs(out.one_dim - half1);
  } else {
    out.one_dim = grid_plus1(tab, 4096);  // deterministic piece
    const auto mc = mc_plus3(theta2, tab, resolution, seed, workers);
    check_bound(mc.max_f, a, 4);
    out.multi_dim = mc.value;
    out.error = mc.error;
    out.resolution = mc.samples;
    out.seed = seed;
  }
  out.value = 1.0 + out.one_dim + out.multi_dim;
  return out;
}

double vector_sieve_bound(double s1_plus, double s1_minus, double s2_plus,
                          double s2_minus) {
  if (s1_minus > s1_plus || s2_minus > s2_plus)
    throw std::invalid_argument("vector sieve: brackets must be ordered");
  return s1_plus * s2_minus + s1_minus * s2_plus - s1_plus * s2_plus;
}

SieveConstant combined_bound(double theta2, Method method,
                             std::uint64_t resolution, std::uint64_t seed,
                             int workers) {
  const auto lo = sigma2_minus(theta2, 0.0, method, resolution, seed, workers);
  const auto hi = sigma2_plus(theta2, 0.0, method, resolution, seed, workers);
  SieveConstant out;
  out.kind = Kind::combined;
  out.theta2 = theta2;
  out.method = method;
  out.resolution = lo.resolution;
  out.seed = method == Method::monte_carlo ? seed : 0;
  out.value =
      vector_sieve_bound(sigma1_plus_ref, sigma1_minus_ref, hi.value, lo.value);
  // linear propagation through the bilinear formula
  out.error = sigma1_plus_ref * lo.error +
              (sigma1_plus_ref - sigma1_minus_ref) * hi.error;
  return out;
}

}  // namespace psq::constants

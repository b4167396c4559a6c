#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace psq::decomp {

// Derived interval/threshold bundle.  All prime-range sums downstream use
// half-open ranges [lo, hi) and the roughness cutoff is inclusive (p >= z),
// which keeps every Buchstab-type identity exact for arbitrary real cutoffs.
struct IntervalConfig {
  std::uint64_t x = 0;
  double theta1 = 0, theta2 = 0, eps = 0, b_exp = 0;
  double p_override = 0;  // 0 = derive P = L^B

  double l = 0;           // log X
  double y = 0;           // X^theta1
  double h = 0;           // Y^theta2
  double p = 0;           // L^B or the override
  double z0 = 0;          // Y^{1/4} P^{-2}
  double u = 0;           // Y^{eps/2}
  double v = 0;           // H Y^{-1/2-eps/2}
  double w = 0;           // Y^{1/2} / V
  double z1_split = 0;    // Y^{1/6+eps/2}; cutoff for the two-term split of lambda0
  double z1_bracket = 0;  // max(V, sqrt(z0)); cutoff for the beta bracketing

  // integer windows: I1 = [X-Y, X), I2 = [sqrt(Y)/2, sqrt(Y))
  std::uint64_t m1_first = 0, m1_last = 0;
  std::uint64_t m2_first = 0, m2_last = 0;
  bool i2_empty = false;

  bool degenerate = false;   // empty I2, or V >= z0 in the theta2 < 3/4 regime
  bool z0_trivial = false;   // z0 < 2: lambda0 is identically 1
  bool cap_safe = false;     // the capped pair sum loses nothing over I2
  bool split_valid = false;  // the two-term split identity is exact over I2

  bool in_i2(std::uint64_t m) const {
    return !i2_empty && m >= m2_first && m <= m2_last;
  }
};

IntervalConfig derive_config(std::uint64_t x, double theta1, double theta2,
                             double eps, double b_exp, double p_override = 0.0);

// lambda0(m) = 1 iff every prime factor of m is >= z0.
int lambda0(std::uint64_t m, const IntervalConfig& cfg);

// First Buchstab expansion of lambda0 from cutoff V, with the pair sum capped
// at p1 <= min(z0, sqrt(Y)/p2^2) and split at p1*p2 < W vs >= W:
//   g1 = Phi(m, V)
//   g2 = sum over p | m, p in [V, z0)                of Phi(m/p, V)
//   g3 = sum over p2 < p1 | m, in [V, z0), capped    of Phi(m/(p1 p2), p2)
//   g4/g5 = the g3 pairs with p1 p2 < W / p1 p2 >= W
// g1 - g2 + g3 = lambda0 exactly when the cap never binds (cfg.cap_safe).
// Note g5 = 0 identically: capped pairs have p1*p2 <= sqrt(Y)/p2 < W since
// p2 > V.  The W-split is kept because the bracketing function is defined
// through it.
struct GammaParts {
  std::int64_t g1 = 0, g2 = 0, g3 = 0, g4 = 0, g5 = 0;
};
GammaParts gamma_decomposition(std::uint64_t m, const IntervalConfig& cfg);

// Double Buchstab expansion with bracket cutoff z1_bracket:
//   b1 = Phi(m, V)
//   b2 = sum over p in [V, z1_bracket)               of Phi(m/p, p)
//   b3 = sum over p in [z1_bracket, z0)              of Phi(m/p, p)
//   b4 = sum over p in [V, z1_bracket)               of Phi(m/p, V)
//   b5 = sum over pairs p2 < p1 in [V, z1_bracket)   of Phi(m/(p1 p2), V)
//   b6 = sum over triples p3 < p2 < p1 in same range of Phi(m/(p1 p2 p3), p3)
// Identities (exact, unconditional): lambda0 = b1 - b2 - b3, b2 = b4 - b5 + b6.
struct BetaParts {
  std::int64_t b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
};
BetaParts beta_decomposition(std::uint64_t m, const IntervalConfig& cfg);

// Bracketing functions: lambda2_minus = g1 - g2 + g5 <= lambda0 pointwise,
// lambda2_plus = b1 - b4 + b5 = lambda0 + b3 + b6 >= lambda0 pointwise.
std::int64_t lambda2_minus(std::uint64_t m, const IntervalConfig& cfg);
std::int64_t lambda2_plus(std::uint64_t m, const IntervalConfig& cfg);

// Two-term split of lambda0 at z1_split:
//   first  = Phi(m, z1_split)
//   second = sum over p | m, p in [z1_split, z0) of Phi(m/p, z1_split)
// first - second = lambda0 exactly iff cfg.split_valid.
struct SplitParts {
  std::int64_t first = 0, second = 0;
  bool valid = false;  // copied from cfg.split_valid
};
SplitParts lambda0_split(std::uint64_t m, const IntervalConfig& cfg);

enum class WeightKind {
  lambda0,
  gamma1, gamma2, gamma3, gamma4, gamma5,
  beta1, beta2, beta3, beta4, beta5, beta6,
  lambda2_minus, lambda2_plus,
  lambda0_first, lambda0_second,
};

const char* weight_kind_name(WeightKind k);

// Dense integer weight array over I2 (values[i] belongs to m2_first + i).
struct WeightTable {
  WeightKind kind = WeightKind::lambda0;
  std::uint64_t m_first = 0, m_last = 0;
  std::vector<std::int32_t> values;

  std::int64_t sum() const;
  std::int32_t min_value() const;
  std::int32_t max_value() const;
  std::uint64_t support_size() const;  // entries with nonzero value
};

WeightTable build_weight_table(const IntervalConfig& cfg, WeightKind kind);

}  // namespace psq::decomp

#pragma once

// Test-side generators and oracles. Nothing here goes through the
// curvature-block path, so it can check that path.

#include <cmath>
#include <cstdint>
#include <random>

#include "branchcurve/bivector.hpp"
#include "branchcurve/curve.hpp"
#include "branchcurve/tensor_core.hpp"

namespace testing_support {

using namespace branchcurve;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  cplx complex_unit() { return {uniform(-1, 1), uniform(-1, 1)}; }
  SpinorPoint spinor() { return {complex_unit(), complex_unit()}; }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

 private:
  std::mt19937_64 eng_;
};

inline SymmetricBilinear4 random_symmetric(Rng& rng) {
  Matrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) m(i, j) = m(j, i) = rng.uniform(-1, 1);
  return SymmetricBilinear4(m);
}

/// Σ ± h_a ⊠ h_b over a few random symmetric pairs: a generic algebraic
/// curvature tensor built without touching the SD/ASD blocks.
inline FramedRiemann random_curvature(Rng& rng, int terms = 4) {
  FramedRiemann R;
  for (int n = 0; n < terms; ++n) {
    const SymmetricBilinear4 h = random_symmetric(rng), k = random_symmetric(rng);
    R += rng.uniform(-1, 1) * kulkarni_nomizu(h, k);
  }
  return R;
}

/// Brute-force R_{ijkl} from a sum of Kulkarni–Nomizu terms written out by
/// hand, used to check kulkarni_nomizu itself.
inline double kn_entry(const Matrix4& k, const Matrix4& l, int i, int j, int a, int b) {
  return k(i, a) * l(j, b) + k(j, b) * l(i, a) - k(i, b) * l(j, a) - k(j, a) * l(i, b);
}

struct OracleValue {
  cplx delta;        // M² - PQ
  double magnitude;  // |M|² + |P||Q|
};

/// M² - PQ straight from the tensor: M = 2 R(t₊, t₋), P = 2 R(t₊, t₊),
/// Q = 2 R(t₋, t₋) with the bivectors in wedge coordinates (the factor 2
/// undoes the √2 scaling of SD coordinates on each side).
inline OracleValue tensor_oracle(const FramedRiemann& R, const SpinorPoint& a, const SpinorPoint& b) {
  const BivectorCoords tp = as_wedge(t_plus(a)), tm = as_wedge(t_minus(b));
  const cplx m = 2.0 * qform_R(R, tp, tm);
  const cplx p = 2.0 * qform_R(R, tp, tp);
  const cplx q = 2.0 * qform_R(R, tm, tm);
  return {m * m - p * q, std::norm(m) + std::abs(p) * std::abs(q)};
}

/// Largest |c| relative deviation between the normalized curves.
inline double normalized_gap(const CurveCoeffs& x, const CurveCoeffs& y) {
  const CurveCoeffs nx = normalized(x), ny = normalized(y);
  double worst = 0.0;
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n) worst = std::max(worst, std::abs(nx(m, n) - ny(m, n)));
  return worst;
}

}  // namespace testing_support

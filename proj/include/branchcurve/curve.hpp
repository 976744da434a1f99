#pragma once

// The branching curve Γ_x ⊂ P¹×P¹ of bidegree (4,4):
//
//   M(a,b)² - P(a)·Q(b) = 0,   M = T₊ᵀ B T₋,  P = T₊ᵀ 𝔚₊ T₊,  Q = T₋ᵀ 𝔚₋ T₋,
//
// where T₊(a), T₋(b) are the SD/ASD triples of pl(t₊), pl(t₋).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "bipoly.hpp"
#include "bivector.hpp"
#include "tensor_core.hpp"

namespace branchcurve {

using CurveCoeffs = BiPoly<4, 4>;
using Triple = std::array<cplx, 3>;

inline constexpr double kClassifyTol = 1e-9;

/// c2·s² + c1·s + c0 with s = λ/μ on the pencil λT₊ + μT₋.
struct PencilQuadratic {
  cplx c2, c1, c0;
  cplx discriminant() const { return c1 * c1 - 4.0 * c2 * c0; }
};

enum class IntersectionCase { TwoPoints, Tangent, LineContained };

inline const char* to_string(IntersectionCase c) {
  switch (c) {
    case IntersectionCase::TwoPoints: return "TWO_POINTS";
    case IntersectionCase::Tangent: return "TANGENT";
    case IntersectionCase::LineContained: return "LINE_CONTAINED";
  }
  return "unknown";
}

enum class CurveTag { IdenticallyZero, QuadrupleDiagonal, DoubleRectangle, Other };

inline const char* to_string(CurveTag t) {
  switch (t) {
    case CurveTag::IdenticallyZero: return "IDENTICALLY_ZERO";
    case CurveTag::QuadrupleDiagonal: return "QUADRUPLE_DIAGONAL";
    case CurveTag::DoubleRectangle: return "DOUBLE_RECTANGLE";
    case CurveTag::Other: return "OTHER";
  }
  return "unknown";
}

struct CurveClass {
  CurveTag tag = CurveTag::Other;
  std::string detail;
};

inline Triple plus_triple(const SpinorPoint& a) {
  const BivectorCoords t = t_plus(a);
  return {t[0], t[1], t[2]};
}

inline Triple minus_triple(const SpinorPoint& b) {
  const BivectorCoords t = t_minus(b);
  return {t[3], t[4], t[5]};
}

/// xᵀ M y, complex-bilinear.
inline cplx bilinear(const Triple& x, const Matrix3& m, const Triple& y) {
  CompensatedSum s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s.add(x[static_cast<std::size_t>(i)] * m(i, j) * y[static_cast<std::size_t>(j)]);
  return s.value();
}

inline PencilQuadratic pencil_quadratic(const CurvatureBlocks& blocks, const SpinorPoint& a,
                                        const SpinorPoint& b) {
  const Triple tp = plus_triple(a), tm = minus_triple(b);
  return {bilinear(tp, blocks.Wplus, tp), 2.0 * bilinear(tp, blocks.B, tm),
          bilinear(tm, blocks.Wminus, tm)};
}

inline IntersectionCase intersection_case(const PencilQuadratic& q, double tol) {
  if (tol < 0.0) throw std::invalid_argument("intersection_case: tol must be >= 0");
  if (std::abs(q.c2) <= tol && std::abs(q.c1) <= tol && std::abs(q.c0) <= tol)
    return IntersectionCase::LineContained;
  const double scale = std::max({std::norm(q.c1), std::abs(4.0 * q.c2 * q.c0), 1e-300});
  if (std::abs(q.discriminant()) <= tol * scale) return IntersectionCase::Tangent;
  return IntersectionCase::TwoPoints;
}

/// M² - PQ evaluated directly from the blocks, with no polynomial expansion.
struct DirectValue {
  cplx value;
  /// |M|² + |P||Q|: magnitude of the terms that cancel.
  double magnitude;
};

inline DirectValue direct_curve_value(const CurvatureBlocks& blocks, const SpinorPoint& a,
                                      const SpinorPoint& b) {
  const Triple tp = plus_triple(a), tm = minus_triple(b);
  const cplx m = bilinear(tp, blocks.B, tm);
  const cplx p = bilinear(tp, blocks.Wplus, tp);
  const cplx q = bilinear(tm, blocks.Wminus, tm);
  return {m * m - p * q, std::norm(m) + std::abs(p) * std::abs(q)};
}

namespace detail {

// T₊ components as bidegree-(2,0) polynomials, T₋ as (0,2).
inline std::array<BiPoly<2, 0>, 3> plus_polys() {
  std::array<BiPoly<2, 0>, 3> t{};
  t[0](1, 0) = 2.0 * kI;  // 2i a¹a²
  t[1](0, 0) = kI;        // i (a²)²
  t[1](2, 0) = -kI;       // -i (a¹)²
  t[2](2, 0) = -1.0;
  t[2](0, 0) = -1.0;
  return t;
}

inline std::array<BiPoly<0, 2>, 3> minus_polys() {
  std::array<BiPoly<0, 2>, 3> t{};
  t[0](0, 1) = 2.0 * kI;
  t[1](0, 0) = kI;
  t[1](0, 2) = -kI;
  t[2](0, 2) = 1.0;
  t[2](0, 0) = 1.0;
  return t;
}

template <typename Left, typename Right>
auto quadratic_form_poly(const std::array<Left, 3>& x, const Matrix3& m,
                         const std::array<Right, 3>& y) {
  using Product = decltype(x[0] * y[0]);
  std::array<cplx, 9> w{};
  std::array<Product, 9> terms{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      w[3 * i + j] = m(static_cast<int>(i), static_cast<int>(j));
      terms[3 * i + j] = x[i] * y[j];
    }
  return weighted_sum(w, terms);
}

}  // namespace detail

/// Expands M² - PQ into the 5x5 coefficient matrix.
inline CurveCoeffs curve_coeffs(const CurvatureBlocks& blocks) {
  const auto tp = detail::plus_polys();
  const auto tm = detail::minus_polys();
  const BiPoly<4, 0> p = detail::quadratic_form_poly(tp, blocks.Wplus, tp);
  const BiPoly<0, 4> q = detail::quadratic_form_poly(tm, blocks.Wminus, tm);
  const BiPoly<2, 2> m = detail::quadratic_form_poly(tp, blocks.B, tm);
  const CurveCoeffs m2 = m * m;
  const CurveCoeffs pq = p * q;
  CurveCoeffs out;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) {
      CompensatedSum s;
      s.add(m2(i, j));
      s.add(-pq(i, j));
      out(i, j) = s.value();
    }
  return out;
}

inline cplx evaluate(const CurveCoeffs& coeffs, const SpinorPoint& a, const SpinorPoint& b) {
  return coeffs(a.c1(), a.c2(), b.c1(), b.c2());
}

/// Index (m, n) of the first entry of largest modulus in row-major order.
inline std::pair<int, int> pivot_index(const CurveCoeffs& c) {
  std::pair<int, int> best{0, 0};
  double best_abs = -1.0;
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n)
      if (std::abs(c(m, n)) > best_abs) {
        best_abs = std::abs(c(m, n));
        best = {m, n};
      }
  return best;
}

/// Divides by the entry of largest modulus; the zero polynomial is returned
/// unchanged.
inline CurveCoeffs normalized(const CurveCoeffs& c) {
  const auto [pm, pn] = pivot_index(c);
  const cplx p = c(pm, pn);
  CurveCoeffs out = c;
  if (p == cplx{}) return out;
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n) out(m, n) = c(m, n) / p;
  out(pm, pn) = 1.0;
  return out;
}

/// Max-entry distance between x and reference after normalizing both at the
/// reference's pivot. Two zero polynomials are at distance 0.
inline double projective_distance(const CurveCoeffs& x, const CurveCoeffs& reference) {
  const bool x_zero = x.max_abs() == 0.0;
  const bool r_zero = reference.max_abs() == 0.0;
  if (x_zero && r_zero) return 0.0;
  if (x_zero || r_zero) return std::numeric_limits<double>::infinity();
  const auto [pm, pn] = pivot_index(reference);
  const cplx xp = x(pm, pn), rp = reference(pm, pn);
  if (xp == cplx{}) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n)
      worst = std::max(worst, std::abs(x(m, n) / xp - reference(m, n) / rp));
  return worst;
}

/// Coefficients of (a¹b² - a²b¹)⁴.
inline CurveCoeffs quadruple_diagonal_pattern() {
  CurveCoeffs c;
  const std::array<double, 5> binom{1, 4, 6, 4, 1};
  for (int m = 0; m <= 4; ++m) c(m, 4 - m) = binom[static_cast<std::size_t>(m)] * ((m % 2) ? -1.0 : 1.0);
  return c;
}

/// Coefficients of (a¹a²b¹b²)².
inline CurveCoeffs double_rectangle_pattern() {
  CurveCoeffs c;
  c(2, 2) = 1.0;
  return c;
}

namespace detail {

inline bool proportional_to_identity(const Matrix3& w, double tol) {
  const Matrix3 dev = w - (w.trace() / 3.0) * Matrix3::Identity();
  return dev.cwiseAbs().maxCoeff() <= tol;
}

inline CurveClass classify_nonzero(const CurveCoeffs& coeffs, double tol) {
  if (projective_distance(coeffs, quadruple_diagonal_pattern()) <= tol)
    return {CurveTag::QuadrupleDiagonal, "(a1*b2 - a2*b1)^4 in the given frame"};
  if (projective_distance(coeffs, double_rectangle_pattern()) <= tol)
    return {CurveTag::DoubleRectangle, "(a1*a2*b1*b2)^2 in the given frame"};
  return {CurveTag::Other, "no frame-fixed pattern matched"};
}

}  // namespace detail

/// Frame-fixed classification. When block_scale is given, the zero test is
/// relative to its square (coefficients are quadratic in curvature).
inline CurveClass classify(const CurveCoeffs& coeffs, double tol = kClassifyTol,
                           std::optional<double> block_scale = std::nullopt) {
  const double threshold = block_scale ? tol * (*block_scale) * (*block_scale) : tol;
  if (coeffs.max_abs() <= threshold) return {CurveTag::IdenticallyZero, "all coefficients vanish"};
  return detail::classify_nonzero(coeffs, tol);
}

/// Classification with the block structure available. For IDENTICALLY_ZERO
/// the detail records which of {Wplus∝Id, Wminus∝Id, B=0, W±=0} hold, which
/// separates "branch locus is the whole quadric" from "branching doesn't
/// exist".
inline CurveClass classify(const CurvatureBlocks& blocks, const CurveCoeffs& coeffs,
                           double tol = kClassifyTol) {
  const double scale = blocks.scale();
  if (scale == 0.0) return {CurveTag::IdenticallyZero, "flat: curvature vanishes"};
  CurveClass cls = classify(coeffs, tol, scale);
  if (cls.tag != CurveTag::IdenticallyZero) return cls;

  const double btol = tol * scale;
  const bool wp_id = detail::proportional_to_identity(blocks.Wplus, btol);
  const bool wm_id = detail::proportional_to_identity(blocks.Wminus, btol);
  const bool b_zero = blocks.B.cwiseAbs().maxCoeff() <= btol;
  const bool w_zero = blocks.Wplus.cwiseAbs().maxCoeff() <= btol &&
                      blocks.Wminus.cwiseAbs().maxCoeff() <= btol;
  std::ostringstream os;
  if (w_zero && b_zero)
    os << "branching doesn't exist: curvature is pure scalar, every tangent line lies in P(R_x)";
  else if (b_zero && (wp_id || wm_id))
    os << "branch locus is the whole quadric: P or Q vanishes identically and B = 0";
  else
    os << "branching curve doesn't exist: M^2 = PQ cancellation";
  os << " [Wplus~Id=" << (wp_id ? "yes" : "no") << ", Wminus~Id=" << (wm_id ? "yes" : "no")
     << ", B=0=" << (b_zero ? "yes" : "no") << ", W+-=0=" << (w_zero ? "yes" : "no") << "]";
  cls.detail = os.str();
  return cls;
}

/// Uniform random spinor points with real and imaginary parts in [-1, 1].
class SpinorSampler {
 public:
  explicit SpinorSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  cplx complex_unit() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }
  SpinorPoint spinor() {
    for (;;) {
      const cplx c1 = complex_unit(), c2 = complex_unit();
      if (std::abs(c1) + std::abs(c2) > 1e-3) return {c1, c2};
    }
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct OracleReport {
  bool ok = true;
  double worst_relative = 0.0;
  double worst_absolute = 0.0;
  /// Sample where the relative deviation peaked.
  std::optional<std::pair<SpinorPoint, SpinorPoint>> worst_at;
};

/// Compares the expanded coefficients against direct M² - PQ at random
/// points. Relative deviation is measured against the largest of the direct
/// cancellation magnitude, Σ|c||monomial|, and scale²·|a|⁴|b|⁴.
inline OracleReport oracle_check(const CurvatureBlocks& blocks, const CurveCoeffs& coeffs,
                                 int samples, double tol, std::uint64_t seed = 20240601) {
  if (samples < 1) throw std::invalid_argument("oracle_check: samples must be >= 1");
  SpinorSampler sampler(seed);
  OracleReport rep;
  for (int s = 0; s < samples; ++s) {
    const SpinorPoint a = sampler.spinor(), b = sampler.spinor();
    const DirectValue direct = direct_curve_value(blocks, a, b);
    const cplx expanded = evaluate(coeffs, a, b);
    const double abs_dev = std::abs(expanded - direct.value);
    const double na = std::norm(a.c1()) + std::norm(a.c2());
    const double nb = std::norm(b.c1()) + std::norm(b.c2());
    const double natural = blocks.scale() * blocks.scale() * na * na * nb * nb;
    const double denom = std::max({direct.magnitude, coeffs.abs_sum(a.c1(), a.c2(), b.c1(), b.c2()),
                                   natural, std::numeric_limits<double>::min()});
    const double rel = abs_dev / denom;
    if (rel > rep.worst_relative || !rep.worst_at) {
      rep.worst_relative = rel;
      rep.worst_absolute = abs_dev;
      rep.worst_at.emplace(a, b);
    }
  }
  rep.ok = rep.worst_relative <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Singular points (numeric diagnostic).

enum class Chart { PP, PM, MP, MM };

inline const char* to_string(Chart c) {
  switch (c) {
    case Chart::PP: return "pp";
    case Chart::PM: return "pm";
    case Chart::MP: return "mp";
    case Chart::MM: return "mm";
  }
  return "unknown";
}

/// pp: a=[1,x], b=[1,y]; pm: a=[1,x], b=[y,1]; mp: a=[x,1], b=[1,y];
/// mm: a=[x,1], b=[y,1].
inline std::pair<SpinorPoint, SpinorPoint> chart_point(Chart chart, cplx x, cplx y) {
  const bool a_first_one = chart == Chart::PP || chart == Chart::PM;
  const bool b_first_one = chart == Chart::PP || chart == Chart::MP;
  SpinorPoint a = a_first_one ? SpinorPoint{1.0, x} : SpinorPoint{x, 1.0};
  SpinorPoint b = b_first_one ? SpinorPoint{1.0, y} : SpinorPoint{y, 1.0};
  return {a, b};
}

struct SingularCandidate {
  Chart chart;
  cplx x, y;
  double residual;  // max(|f|, |f_x|, |f_y|) on normalized coefficients
  /// 2 when the Hessian is nonzero, 3 when it also vanishes (multiplicity
  /// at least 3).
  int min_multiplicity;
};

struct SingularScan {
  bool degenerate = false;
  std::string detail;
  std::vector<SingularCandidate> candidates;
};

namespace detail {

/// p[i][j] is the coefficient of x^i y^j of the curve polynomial in a chart.
using ChartPoly = std::array<std::array<cplx, 5>, 5>;

inline ChartPoly chart_poly(const CurveCoeffs& c, Chart chart) {
  const bool a_first_one = chart == Chart::PP || chart == Chart::PM;
  const bool b_first_one = chart == Chart::PP || chart == Chart::MP;
  ChartPoly p{};
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n) {
      const int i = a_first_one ? 4 - m : m;
      const int j = b_first_one ? 4 - n : n;
      p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c(m, n);
    }
  return p;
}

struct ChartJet {
  cplx f, fx, fy, fxx, fxy, fyy;
};

inline ChartJet chart_jet(const ChartPoly& p, cplx x, cplx y) {
  std::array<cplx, 5> xp{}, yp{};
  xp[0] = yp[0] = 1.0;
  for (std::size_t k = 1; k < 5; ++k) {
    xp[k] = xp[k - 1] * x;
    yp[k] = yp[k - 1] * y;
  }
  auto pw = [](const std::array<cplx, 5>& powers, int k) {
    return k < 0 ? cplx{} : powers[static_cast<std::size_t>(k)];
  };
  ChartJet j{};
  for (int i = 0; i <= 4; ++i)
    for (int k = 0; k <= 4; ++k) {
      const cplx c = p[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (c == cplx{}) continue;
      const double di = i, dk = k;
      j.f += c * pw(xp, i) * pw(yp, k);
      j.fx += c * di * pw(xp, i - 1) * pw(yp, k);
      j.fy += c * dk * pw(xp, i) * pw(yp, k - 1);
      j.fxx += c * di * (di - 1) * pw(xp, i - 2) * pw(yp, k);
      j.fxy += c * di * dk * pw(xp, i - 1) * pw(yp, k - 1);
      j.fyy += c * dk * (dk - 1) * pw(xp, i) * pw(yp, k - 2);
    }
  return j;
}

}  // namespace detail

/// Scans the four affine charts from a grid_n x grid_n seed grid and refines
/// each seed with Levenberg–Marquardt-damped Newton on ∇f = 0, keeping points
/// where |f|, |f_x|, |f_y| all fall below tol. Heuristic; not certified.
inline SingularScan singular_sample(const CurveCoeffs& coeffs, int grid_n, double tol = 1e-8,
                                    int max_iterations = 200) {
  if (grid_n < 2) throw std::invalid_argument("singular_sample: grid_n must be >= 2");
  SingularScan scan;
  if (coeffs.max_abs() == 0.0 || classify(coeffs, 1e-14).tag == CurveTag::IdenticallyZero) {
    scan.degenerate = true;
    scan.detail = "degenerate input: coefficients vanish identically";
    return scan;
  }
  const CurveCoeffs nc = normalized(coeffs);
  constexpr double kSeedTwist = 0.37;
  constexpr double kChartBound = 8.0;
  constexpr double kDedup = 1e-6;

  for (Chart chart : {Chart::PP, Chart::PM, Chart::MP, Chart::MM}) {
    const detail::ChartPoly p = detail::chart_poly(nc, chart);
    std::vector<SingularCandidate> found;
    for (int ip = 0; ip < grid_n; ++ip)
      for (int iq = 0; iq < grid_n; ++iq) {
        const double sp = -2.0 + 4.0 * ip / (grid_n - 1);
        const double sq = -2.0 + 4.0 * iq / (grid_n - 1);
        cplx x{sp, kSeedTwist * sq}, y{sq, -kSeedTwist * sp};
        double mu = 1e-3;
        for (int it = 0; it < max_iterations; ++it) {
          const detail::ChartJet j = detail::chart_jet(p, x, y);
          const double gnorm = std::hypot(std::abs(j.fx), std::abs(j.fy));
          if (gnorm == 0.0) break;
          // (HᴴH + μ I) δ = -Hᴴ g
          const cplx h11 = j.fxx, h12 = j.fxy, h22 = j.fyy;
          const cplx a11 = std::norm(h11) + std::norm(h12) + mu;
          const cplx a12 = std::conj(h11) * h12 + std::conj(h12) * h22;
          const cplx a22 = std::norm(h12) + std::norm(h22) + mu;
          const cplx r1 = -(std::conj(h11) * j.fx + std::conj(h12) * j.fy);
          const cplx r2 = -(std::conj(h12) * j.fx + std::conj(h22) * j.fy);
          const cplx det = a11 * a22 - a12 * std::conj(a12);
          if (std::abs(det) == 0.0) break;
          const cplx dx = (a22 * r1 - a12 * r2) / det;
          const cplx dy = (a11 * r2 - std::conj(a12) * r1) / det;
          const cplx nx = x + dx, ny = y + dy;
          const detail::ChartJet jn = detail::chart_jet(p, nx, ny);
          if (std::hypot(std::abs(jn.fx), std::abs(jn.fy)) < gnorm) {
            x = nx;
            y = ny;
            mu = std::max(mu * 0.3, 1e-30);
          } else {
            mu *= 10.0;
          }
          if (std::abs(x) > kChartBound || std::abs(y) > kChartBound) break;
        }
        if (std::abs(x) > kChartBound || std::abs(y) > kChartBound) continue;
        const detail::ChartJet j = detail::chart_jet(p, x, y);
        const double residual = std::max({std::abs(j.f), std::abs(j.fx), std::abs(j.fy)});
        if (residual > tol) continue;
        const double hess = std::max({std::abs(j.fxx), std::abs(j.fxy), std::abs(j.fyy)});
        const SingularCandidate cand{chart, x, y, residual, hess <= std::sqrt(tol) ? 3 : 2};
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& o) {
          return std::abs(o.x - x) + std::abs(o.y - y) <= kDedup;
        });
        if (!duplicate) found.push_back(cand);
      }
    std::sort(found.begin(), found.end(), [](const auto& l, const auto& r) {
      return std::make_tuple(l.x.real(), l.x.imag(), l.y.real(), l.y.imag()) <
             std::make_tuple(r.x.real(), r.x.imag(), r.y.real(), r.y.imag());
    });
    scan.candidates.insert(scan.candidates.end(), found.begin(), found.end());
  }
  std::ostringstream os;
  os << scan.candidates.size() << " candidate singular point(s)";
  if (std::any_of(scan.candidates.begin(), scan.candidates.end(),
                  [](const auto& c) { return c.min_multiplicity > 2; }))
    os << "; some with vanishing Hessian (multiplicity > 2)";
  scan.detail = os.str();
  return scan;
}

/// Pointwise membership of [u] in S_x = P(v_x) ∩ P(Λ²g_x) ∩ P(R_x).
inline bool k3_membership(const FramedRiemann& R, const BivectorCoords& u, double tol = 1e-10) {
  BivectorCoords w = as_wedge(u);
  const double scale = w.max_abs();
  if (scale == 0.0) throw std::invalid_argument("k3_membership: u must be nonzero");
  std::size_t piv = 0;
  for (std::size_t n = 1; n < 6; ++n)
    if (std::abs(w.u[n]) > std::abs(w.u[piv])) piv = n;
  const cplx p = w.u[piv];
  for (auto& z : w.u) z /= p;
  return std::abs(qform_v(w)) <= tol && std::abs(qform_lambda2g(w, w)) <= tol &&
         std::abs(qform_R(R, w, w)) <= tol;
}

}  // namespace branchcurve

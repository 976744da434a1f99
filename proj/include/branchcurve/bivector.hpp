#pragma once

// Coordinates on Λ²(T_xM ⊗ ℂ): Segre and Plücker embeddings, the
// self-dual/anti-self-dual basis, the ruling lines t₊(a), t₋(b), and the three
// complex-bilinear quadratic forms v_x, Λ²g_x, R_x.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "tensor_core.hpp"

namespace branchcurve {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Homogeneous coordinates [c1, c2] on P¹ (a point of P(S∓)).
class SpinorPoint {
 public:
  SpinorPoint(cplx c1, cplx c2) : c1_(c1), c2_(c2) {
    if (c1 == cplx{} && c2 == cplx{}) throw std::invalid_argument("SpinorPoint: (0, 0)");
  }
  cplx c1() const { return c1_; }
  cplx c2() const { return c2_; }
  SpinorPoint scaled(cplx s) const { return {s * c1_, s * c2_}; }

 private:
  cplx c1_;
  cplx c2_;
};

using Vector4C = std::array<cplx, 4>;

enum class Basis { Wedge, SelfDual };

/// Six complex coordinates. Wedge: [u12,u13,u14,u23,u24,u34]. SelfDual:
/// [u¹..u⁶] = [u12+u34, u13-u24, u14+u23, u12-u34, u13+u24, u14-u23], which
/// are √2 times the coordinates against the normalized basis f_i^±.
struct BivectorCoords {
  std::array<cplx, 6> u{};
  Basis basis = Basis::Wedge;

  cplx operator[](int n) const { return u[static_cast<std::size_t>(n)]; }
  cplx& operator[](int n) { return u[static_cast<std::size_t>(n)]; }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& z : u) m = std::max(m, std::abs(z));
    return m;
  }
};

/// σ(a, b) = [a¹b¹+a²b², i(a²b²-a¹b¹), -i(a¹b²+a²b¹), a²b¹-a¹b²].
inline Vector4C segre(const SpinorPoint& a, const SpinorPoint& b) {
  const cplx a1 = a.c1(), a2 = a.c2(), b1 = b.c1(), b2 = b.c2();
  return {a1 * b1 + a2 * b2, kI * (a2 * b2 - a1 * b1), -kI * (a1 * b2 + a2 * b1),
          a2 * b1 - a1 * b2};
}

/// Σ (wⁱ)² — the metric quadric P(g_x) in an orthonormal frame.
inline cplx metric_quadric(const Vector4C& w) {
  return w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3];
}

/// 2x2 minors u^{ij} = wⁱw̃ʲ - wʲw̃ⁱ. Throws if the vectors are proportional.
inline BivectorCoords pluecker(const Vector4C& w, const Vector4C& wt, double tol = kDefaultTol) {
  BivectorCoords out;
  out.basis = Basis::Wedge;
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = detail::kPairs[static_cast<std::size_t>(p)];
    out[p] = w[i] * wt[j] - w[j] * wt[i];
  }
  double scale = 0.0;
  for (int n = 0; n < 4; ++n) scale = std::max({scale, std::abs(w[n]), std::abs(wt[n])});
  if (out.max_abs() <= tol * std::max(scale * scale, 1e-300))
    throw std::invalid_argument("pluecker: vectors are linearly dependent (degenerate line)");
  return out;
}

/// u¹²u³⁴ - u¹³u²⁴ + u¹⁴u²³ (the Plücker quadric, wedge coordinates).
inline cplx pluecker_relation(const BivectorCoords& u) {
  return u[0] * u[5] - u[1] * u[4] + u[2] * u[3];
}

inline BivectorCoords to_sd_basis(const BivectorCoords& w) {
  if (w.basis != Basis::Wedge) throw std::invalid_argument("to_sd_basis: expected WEDGE input");
  BivectorCoords s;
  s.basis = Basis::SelfDual;
  s[0] = w[0] + w[5];
  s[1] = w[1] - w[4];
  s[2] = w[2] + w[3];
  s[3] = w[0] - w[5];
  s[4] = w[1] + w[4];
  s[5] = w[2] - w[3];
  return s;
}

inline BivectorCoords from_sd_basis(const BivectorCoords& s) {
  if (s.basis != Basis::SelfDual)
    throw std::invalid_argument("from_sd_basis: expected SD input");
  BivectorCoords w;
  w.basis = Basis::Wedge;
  w[0] = 0.5 * (s[0] + s[3]);  // 12
  w[5] = 0.5 * (s[0] - s[3]);  // 34
  w[1] = 0.5 * (s[1] + s[4]);  // 13
  w[4] = 0.5 * (s[4] - s[1]);  // 24
  w[2] = 0.5 * (s[2] + s[5]);  // 14
  w[3] = 0.5 * (s[2] - s[5]);  // 23
  return w;
}

inline BivectorCoords as_wedge(const BivectorCoords& u) {
  return u.basis == Basis::Wedge ? u : from_sd_basis(u);
}

/// Wedge coordinates of the normalized basis element f_index^± (index 1..3).
inline BivectorCoords sd_basis_vector(int index, bool self_dual) {
  if (index < 1 || index > 3) throw std::out_of_range("sd_basis_vector: index must be 1..3");
  const Matrix6 f = detail::sd_frame();
  const int row = (index - 1) + (self_dual ? 0 : 3);
  BivectorCoords out;
  for (int p = 0; p < 6; ++p) out[p] = f(row, p);
  return out;
}

/// pl(t₊) in SD coordinates: [2ia¹a², i((a²)²-(a¹)²), -(a¹)²-(a²)², 0, 0, 0].
inline BivectorCoords t_plus(const SpinorPoint& a) {
  const cplx a1 = a.c1(), a2 = a.c2();
  BivectorCoords out;
  out.basis = Basis::SelfDual;
  out[0] = 2.0 * kI * a1 * a2;
  out[1] = kI * (a2 * a2 - a1 * a1);
  out[2] = -(a1 * a1) - a2 * a2;
  return out;
}

/// pl(t₋) in SD coordinates: [0, 0, 0, 2ib¹b², i((b²)²-(b¹)²), (b¹)²+(b²)²].
inline BivectorCoords t_minus(const SpinorPoint& b) {
  const cplx b1 = b.c1(), b2 = b.c2();
  BivectorCoords out;
  out.basis = Basis::SelfDual;
  out[3] = 2.0 * kI * b1 * b2;
  out[4] = kI * (b2 * b2 - b1 * b1);
  out[5] = b1 * b1 + b2 * b2;
  return out;
}

/// v_x(u) = 2√|det g| (u¹²u³⁴ - u¹³u²⁴ + u¹⁴u²³).
inline cplx qform_v(const BivectorCoords& u, double sqrt_det_g = 1.0) {
  return 2.0 * sqrt_det_g * pluecker_relation(as_wedge(u));
}

/// Λ²g_x(u, h): in an orthonormal frame, the complex-bilinear (never
/// conjugated) dot product of wedge coordinates.
inline cplx qform_lambda2g(const BivectorCoords& u, const BivectorCoords& h) {
  const BivectorCoords uw = as_wedge(u), hw = as_wedge(h);
  cplx sum{};
  for (int p = 0; p < 6; ++p) sum += uw[p] * hw[p];
  return sum;
}

/// R_x(u, h) = Σ R_{ijlk} u^{ij} h^{kl} over i<j, k<l.
inline cplx qform_R(const FramedRiemann& R, const BivectorCoords& u, const BivectorCoords& h) {
  const BivectorCoords uw = as_wedge(u), hw = as_wedge(h);
  cplx sum{};
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const auto [i, j] = detail::kPairs[static_cast<std::size_t>(p)];
      const auto [k, l] = detail::kPairs[static_cast<std::size_t>(q)];
      sum += R(i, j, l, k) * uw[p] * hw[q];
    }
  return sum;
}

/// Maximum |uᵢvⱼ - uⱼvᵢ| after scaling both to unit largest coordinate.
template <std::size_t N>
double projective_mismatch(const std::array<cplx, N>& u, const std::array<cplx, N>& v) {
  auto normalized = [](std::array<cplx, N> x) {
    std::size_t piv = 0;
    for (std::size_t n = 1; n < N; ++n)
      if (std::abs(x[n]) > std::abs(x[piv])) piv = n;
    const cplx p = x[piv];
    if (p != cplx{})
      for (auto& z : x) z /= p;
    return x;
  };
  const auto a = normalized(u), b = normalized(v);
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      worst = std::max(worst, std::abs(a[i] * b[j] - a[j] * b[i]));
  return worst;
}

/// Projective comparison using the 1e-10 normalized tolerance.
inline bool projectively_equal(const BivectorCoords& u, const BivectorCoords& v,
                               double tol = 1e-10) {
  return projective_mismatch(as_wedge(u).u, as_wedge(v).u) <= tol;
}

}  // namespace branchcurve

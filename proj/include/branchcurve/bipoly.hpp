#pragma once

// Dense bihomogeneous polynomials over ℂ in ([a¹,a²], [b¹,b²]).
//
// BiPoly<DA, DB>::c[m][n] is the coefficient of (a¹)^m (a²)^(DA-m) (b¹)^n (b²)^(DB-n).
// Products accumulate with Neumaier compensated summation so the fixed-size
// expansions used for the branching curve are reproducible to the last bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace branchcurve {

/// Neumaier-compensated running sum of complex terms.
class CompensatedSum {
 public:
  void add(std::complex<double> x) {
    add_part(re_, cre_, x.real());
    add_part(im_, cim_, x.imag());
  }
  std::complex<double> value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

template <int DA, int DB>
struct BiPoly {
  static_assert(DA >= 0 && DB >= 0);
  static constexpr int kDegA = DA;
  static constexpr int kDegB = DB;
  using Coeffs = std::array<std::array<std::complex<double>, DB + 1>, DA + 1>;

  Coeffs c{};

  std::complex<double>& operator()(int m, int n) {
    return c[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
  }
  std::complex<double> operator()(int m, int n) const {
    return c[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
  }

  double max_abs() const {
    double best = 0.0;
    for (const auto& row : c)
      for (const auto& z : row) best = std::max(best, std::abs(z));
    return best;
  }

  BiPoly& operator*=(std::complex<double> s) {
    for (auto& row : c)
      for (auto& z : row) z *= s;
    return *this;
  }
  friend BiPoly operator*(std::complex<double> s, BiPoly p) { return p *= s; }

  friend BiPoly operator-(const BiPoly& x, const BiPoly& y) {
    BiPoly out;
    for (int m = 0; m <= DA; ++m)
      for (int n = 0; n <= DB; ++n) out(m, n) = x(m, n) - y(m, n);
    return out;
  }
  friend BiPoly operator+(const BiPoly& x, const BiPoly& y) {
    BiPoly out;
    for (int m = 0; m <= DA; ++m)
      for (int n = 0; n <= DB; ++n) out(m, n) = x(m, n) + y(m, n);
    return out;
  }

  friend bool operator==(const BiPoly&, const BiPoly&) = default;

  /// Direct evaluation Σ c[m][n] (a¹)^m (a²)^(DA-m) (b¹)^n (b²)^(DB-n).
  std::complex<double> operator()(std::complex<double> a1, std::complex<double> a2,
                                   std::complex<double> b1, std::complex<double> b2) const {
    const auto pa = monomials<DA>(a1, a2);
    const auto pb = monomials<DB>(b1, b2);
    CompensatedSum s;
    for (int m = 0; m <= DA; ++m)
      for (int n = 0; n <= DB; ++n)
        s.add((*this)(m, n) * pa[static_cast<std::size_t>(m)] * pb[static_cast<std::size_t>(n)]);
    return s.value();
  }

  /// Σ |c[m][n]| |a¹|^m |a²|^(DA-m) |b¹|^n |b²|^(DB-n), the magnitude scale of
  /// an evaluation.
  double abs_sum(std::complex<double> a1, std::complex<double> a2, std::complex<double> b1,
                 std::complex<double> b2) const {
    const auto pa = monomials<DA>(std::abs(a1), std::abs(a2));
    const auto pb = monomials<DB>(std::abs(b1), std::abs(b2));
    double s = 0.0;
    for (int m = 0; m <= DA; ++m)
      for (int n = 0; n <= DB; ++n)
        s += std::abs((*this)(m, n)) * std::abs(pa[static_cast<std::size_t>(m)]) *
             std::abs(pb[static_cast<std::size_t>(n)]);
    return s;
  }

  /// (x^k y^(D-k)) for k = 0..D.
  template <int D, typename T>
  static std::array<T, D + 1> monomials(T x, T y) {
    std::array<T, D + 1> xp{}, yp{}, out{};
    xp[0] = yp[0] = T(1);
    for (int k = 1; k <= D; ++k) {
      xp[static_cast<std::size_t>(k)] = xp[static_cast<std::size_t>(k - 1)] * x;
      yp[static_cast<std::size_t>(k)] = yp[static_cast<std::size_t>(k - 1)] * y;
    }
    for (int k = 0; k <= D; ++k)
      out[static_cast<std::size_t>(k)] = xp[static_cast<std::size_t>(k)] * yp[static_cast<std::size_t>(D - k)];
    return out;
  }
};

/// Exact product of bihomogeneous polynomials; bidegrees add.
template <int DA1, int DB1, int DA2, int DB2>
BiPoly<DA1 + DA2, DB1 + DB2> operator*(const BiPoly<DA1, DB1>& x, const BiPoly<DA2, DB2>& y) {
  BiPoly<DA1 + DA2, DB1 + DB2> out;
  for (int m = 0; m <= DA1 + DA2; ++m)
    for (int n = 0; n <= DB1 + DB2; ++n) {
      CompensatedSum s;
      for (int m1 = std::max(0, m - DA2); m1 <= std::min(m, DA1); ++m1)
        for (int n1 = std::max(0, n - DB2); n1 <= std::min(n, DB1); ++n1)
          s.add(x(m1, n1) * y(m - m1, n - n1));
      out(m, n) = s.value();
    }
  return out;
}

/// Σ weights[k] * terms[k], coefficientwise compensated.
template <int DA, int DB, std::size_t N>
BiPoly<DA, DB> weighted_sum(const std::array<std::complex<double>, N>& weights,
                            const std::array<BiPoly<DA, DB>, N>& terms) {
  BiPoly<DA, DB> out;
  for (int m = 0; m <= DA; ++m)
    for (int n = 0; n <= DB; ++n) {
      CompensatedSum s;
      for (std::size_t k = 0; k < N; ++k) s.add(weights[k] * terms[k](m, n));
      out(m, n) = s.value();
    }
  return out;
}

}  // namespace branchcurve

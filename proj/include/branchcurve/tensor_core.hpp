#pragma once

// Pointwise Riemann curvature in an orthonormal frame of a 4-manifold and its
// decomposition into self-dual / anti-self-dual blocks.
//
// Sign convention: the unit round sphere has R_{abba} = +1, i.e. the
// sectional curvature of span(e_a, e_b) is R(e_a, e_b, e_b, e_a).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace branchcurve {

inline constexpr int kDim = 4;
inline constexpr double kDefaultTol = 1e-12;

using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Index tuple (0-based frame indices).
using Index4 = std::array<int, 4>;

/// All 256 components R_{ijkl} = Rm(e_i, e_j, e_k, e_l).
class FramedRiemann {
 public:
  FramedRiemann() { data_.fill(0.0); }

  double operator()(int i, int j, int k, int l) const { return data_[flat(i, j, k, l)]; }
  double& operator()(int i, int j, int k, int l) { return data_[flat(i, j, k, l)]; }

  const std::array<double, 256>& data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  FramedRiemann& operator+=(const FramedRiemann& o) {
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
  }
  FramedRiemann& operator-=(const FramedRiemann& o) {
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
    return *this;
  }
  FramedRiemann& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  FramedRiemann& operator/=(double s) {
    for (double& v : data_) v /= s;
    return *this;
  }
  friend FramedRiemann operator+(FramedRiemann a, const FramedRiemann& b) { return a += b; }
  friend FramedRiemann operator-(FramedRiemann a, const FramedRiemann& b) { return a -= b; }
  friend FramedRiemann operator*(double s, FramedRiemann a) { return a *= s; }
  friend FramedRiemann operator*(FramedRiemann a, double s) { return a *= s; }

  friend bool operator==(const FramedRiemann&, const FramedRiemann&) = default;

  /// Sets R_{ijji} = value and the three completions forced by the pair
  /// antisymmetries (sectional-curvature style entry).
  void set_sectional(int i, int j, double value) {
    (*this)(i, j, j, i) = value;
    (*this)(j, i, i, j) = value;
    (*this)(i, j, i, j) = -value;
    (*this)(j, i, j, i) = -value;
  }

 private:
  static constexpr std::size_t flat(int i, int j, int k, int l) {
    return static_cast<std::size_t>(((i * kDim + j) * kDim + k) * kDim + l);
  }
  std::array<double, 256> data_{};
};

/// Symmetric 4x4 real matrix: the metric in frame (identity), Ric, Ric̊, or an
/// input of the Kulkarni–Nomizu product.
class SymmetricBilinear4 {
 public:
  SymmetricBilinear4() : m_(Matrix4::Zero()) {}
  explicit SymmetricBilinear4(const Matrix4& m, double tol = kDefaultTol) : m_(m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
      throw std::invalid_argument("SymmetricBilinear4: matrix is not symmetric");
    m_ = 0.5 * (m + m.transpose());
  }

  static SymmetricBilinear4 identity() { return SymmetricBilinear4(Matrix4::Identity()); }

  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix4& matrix() const { return m_; }

 private:
  Matrix4 m_;
};

/// Curvature operator in the basis 𝔅 = {f_i^+, f_i^-}:
///   ℛ = [A B; Bᵗ C],  A(i,j) = R(f_i^+, f_j^+),  B(i,j) = R(f_i^+, f_j^-),
///   C(i,j) = R(f_i^-, f_j^-).
/// Wplus/Wminus are the Weyl blocks A - scal/12 and C - scal/12.
struct CurvatureBlocks {
  Matrix3 A = Matrix3::Zero();
  Matrix3 B = Matrix3::Zero();
  Matrix3 C = Matrix3::Zero();
  double scal = 0.0;
  Matrix3 Wplus = Matrix3::Zero();
  Matrix3 Wminus = Matrix3::Zero();

  /// Largest entry magnitude over A, B and C.
  double scale() const {
    return std::max({A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff(), C.cwiseAbs().maxCoeff()});
  }

  /// Blocks assembled from Weyl parts, B and scal (A and C are derived).
  static CurvatureBlocks from_weyl(const Matrix3& wplus, const Matrix3& b, const Matrix3& wminus,
                                   double scal) {
    CurvatureBlocks out;
    out.Wplus = wplus;
    out.Wminus = wminus;
    out.B = b;
    out.scal = scal;
    out.A = wplus + (scal / 12.0) * Matrix3::Identity();
    out.C = wminus + (scal / 12.0) * Matrix3::Identity();
    return out;
  }
};

enum class Identity { AntisymmetryFirstPair, AntisymmetryLastPair, PairSymmetry, FirstBianchi };

inline const char* to_string(Identity id) {
  switch (id) {
    case Identity::AntisymmetryFirstPair: return "antisymmetry-first-pair";
    case Identity::AntisymmetryLastPair: return "antisymmetry-last-pair";
    case Identity::PairSymmetry: return "pair-symmetry";
    case Identity::FirstBianchi: return "first-bianchi";
  }
  return "unknown";
}

struct SymmetryReport {
  bool ok = true;
  /// Largest deviation over all identities and index tuples.
  double max_deviation = 0.0;
  /// First violation found (identities checked in declaration order, tuples
  /// in lexicographic order).
  std::optional<Identity> violated;
  Index4 indices{0, 0, 0, 0};
  double deviation = 0.0;

  std::string describe() const {
    if (ok) return "ok";
    std::ostringstream os;
    os << to_string(*violated) << " violated at (" << indices[0] + 1 << "," << indices[1] + 1
       << "," << indices[2] + 1 << "," << indices[3] + 1 << "), deviation " << deviation;
    return os.str();
  }
};

inline SymmetryReport validate_symmetries(const FramedRiemann& R, double tol = kDefaultTol) {
  if (tol < 0.0) throw std::invalid_argument("validate_symmetries: tol must be >= 0");
  SymmetryReport rep;
  auto deviation = [&](Identity id, int i, int j, int k, int l) {
    switch (id) {
      case Identity::AntisymmetryFirstPair: return std::abs(R(i, j, k, l) + R(j, i, k, l));
      case Identity::AntisymmetryLastPair: return std::abs(R(i, j, k, l) + R(i, j, l, k));
      case Identity::PairSymmetry: return std::abs(R(i, j, k, l) - R(k, l, i, j));
      case Identity::FirstBianchi:
        return std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l));
    }
    return 0.0;
  };
  for (Identity id : {Identity::AntisymmetryFirstPair, Identity::AntisymmetryLastPair,
                      Identity::PairSymmetry, Identity::FirstBianchi}) {
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j)
        for (int k = 0; k < kDim; ++k)
          for (int l = 0; l < kDim; ++l) {
            const double d = deviation(id, i, j, k, l);
            rep.max_deviation = std::max(rep.max_deviation, d);
            if (d > tol && rep.ok) {
              rep.ok = false;
              rep.violated = id;
              rep.indices = {i, j, k, l};
              rep.deviation = d;
            }
          }
  }
  return rep;
}

struct RicciScalar {
  SymmetricBilinear4 ric;
  double scal = 0.0;
};

/// Ric(j,l) = Σ_i R_{ijli}; positive on round spheres.
inline RicciScalar ricci_and_scalar(const FramedRiemann& R) {
  Matrix4 ric = Matrix4::Zero();
  for (int j = 0; j < kDim; ++j)
    for (int l = 0; l < kDim; ++l)
      for (int i = 0; i < kDim; ++i) ric(j, l) += R(i, j, l, i);
  // Contraction of a pair-symmetric tensor is symmetric up to rounding.
  ric = 0.5 * (ric + ric.transpose());
  return {SymmetricBilinear4(ric), ric.trace()};
}

/// (k⊠l)_{ijkl} = k_ik l_jl + k_jl l_ik - k_il l_jk - k_jk l_il.
inline FramedRiemann kulkarni_nomizu(const SymmetricBilinear4& k, const SymmetricBilinear4& l) {
  FramedRiemann out;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c)
        for (int d = 0; d < kDim; ++d)
          out(a, b, c, d) =
              k(a, c) * l(b, d) + k(b, d) * l(a, c) - k(a, d) * l(b, c) - k(b, c) * l(a, d);
  return out;
}

namespace detail {

/// Ordered pairs (i<j) in wedge-coordinate order [12,13,14,23,24,34].
inline constexpr std::array<std::array<int, 2>, 6> kPairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Rows are the basis 𝔅 = (f_1^+, f_2^+, f_3^+, f_1^-, f_2^-, f_3^-) expressed
/// in wedge coordinates. Orthogonal.
inline Matrix6 sd_frame() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix6 f;
  f << s, 0, 0, 0, 0, s,   //
      0, s, 0, 0, -s, 0,   //
      0, 0, s, s, 0, 0,    //
      s, 0, 0, 0, 0, -s,   //
      0, s, 0, 0, s, 0,    //
      0, 0, s, -s, 0, 0;
  return f;
}

/// Matrix of the bilinear form R_x in wedge coordinates:
/// R_x(e_i∧e_j, e_k∧e_l) = R_{ijlk}.
inline Matrix6 wedge_form(const FramedRiemann& R) {
  Matrix6 m;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const auto [i, j] = kPairs[p];
      const auto [k, l] = kPairs[q];
      m(p, q) = R(i, j, l, k);
    }
  return m;
}

}  // namespace detail

inline CurvatureBlocks curvature_operator_blocks(const FramedRiemann& R) {
  const Matrix6 f = detail::sd_frame();
  const Matrix6 m = f * detail::wedge_form(R) * f.transpose();
  CurvatureBlocks out;
  out.A = m.topLeftCorner<3, 3>();
  out.B = m.topRightCorner<3, 3>();
  out.C = m.bottomRightCorner<3, 3>();
  out.A = 0.5 * (out.A + out.A.transpose());
  out.C = 0.5 * (out.C + out.C.transpose());
  out.scal = ricci_and_scalar(R).scal;
  out.Wplus = out.A - (out.scal / 12.0) * Matrix3::Identity();
  out.Wminus = out.C - (out.scal / 12.0) * Matrix3::Identity();
  return out;
}

/// Inverse of curvature_operator_blocks on (A, B, C). The first Bianchi
/// identity holds iff trace(A) == trace(C).
inline FramedRiemann riemann_from_blocks(const Matrix3& A, const Matrix3& B, const Matrix3& C,
                                         double tol = kDefaultTol) {
  const double scale = std::max({1.0, A.cwiseAbs().maxCoeff(), C.cwiseAbs().maxCoeff()});
  if (std::abs(A.trace() - C.trace()) > tol * scale)
    throw std::invalid_argument("riemann_from_blocks: trace(A) != trace(C) violates Bianchi");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol * scale ||
      (C - C.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("riemann_from_blocks: A and C must be symmetric");

  Matrix6 m;
  m << A, B, B.transpose(), C;
  const Matrix6 f = detail::sd_frame();
  const Matrix6 w = f.transpose() * m * f;

  FramedRiemann R;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const auto [i, j] = detail::kPairs[p];
      const auto [k, l] = detail::kPairs[q];
      const double v = 0.5 * (w(p, q) + w(q, p));
      // w(p,q) = R_{ijlk}
      R(i, j, l, k) = v;
      R(j, i, l, k) = -v;
      R(i, j, k, l) = -v;
      R(j, i, k, l) = v;
    }
  return R;
}

inline FramedRiemann riemann_from_blocks(const CurvatureBlocks& b, double tol = kDefaultTol) {
  return riemann_from_blocks(b.A, b.B, b.C, tol);
}

struct DecompositionReport {
  bool ok = true;
  double max_deviation = 0.0;
  Index4 indices{0, 0, 0, 0};
};

/// Rebuilds Rm = W - ½ Ric̊⊠g - (scal/24) g⊠g from its pieces: the Weyl part
/// from (Wplus, 0, Wminus), the other two via Kulkarni–Nomizu products. The
/// signs are those of the R_{abba} = +1 convention.
inline FramedRiemann reconstruct_from_parts(const FramedRiemann& R) {
  const CurvatureBlocks blocks = curvature_operator_blocks(R);
  const RicciScalar rs = ricci_and_scalar(R);
  const SymmetricBilinear4 g = SymmetricBilinear4::identity();
  const SymmetricBilinear4 ric0(rs.ric.matrix() - (rs.scal / 4.0) * Matrix4::Identity());

  FramedRiemann weyl = riemann_from_blocks(blocks.Wplus, Matrix3::Zero(), blocks.Wminus,
                                           std::max(kDefaultTol, 1e-9));
  return weyl - 0.5 * kulkarni_nomizu(ric0, g) - (rs.scal / 24.0) * kulkarni_nomizu(g, g);
}

inline DecompositionReport four_part_decomposition_check(const FramedRiemann& R,
                                                         double tol = kDefaultTol) {
  const FramedRiemann rebuilt = reconstruct_from_parts(R);
  DecompositionReport rep;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k)
        for (int l = 0; l < kDim; ++l) {
          const double d = std::abs(rebuilt(i, j, k, l) - R(i, j, k, l));
          if (d > rep.max_deviation) {
            rep.max_deviation = d;
            rep.indices = {i, j, k, l};
          }
        }
  rep.ok = rep.max_deviation <= tol;
  return rep;
}

}  // namespace branchcurve

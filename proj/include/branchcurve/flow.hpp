#pragma once

// Closed-form Ricci flows of the model geometries and their parabolic
// blow-ups g_i(t) = λ_i⁻¹ g(T + λ_i t).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curve.hpp"
#include "tensor_core.hpp"

namespace branchcurve {

/// Raised when a time lies outside a flow's lifespan.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Factor {
  enum class Kind { Sphere, Euclidean };
  Kind kind;
  int dim;
};

class ModelGeometry {
 public:
  /// Product of round spheres (σ = 1 - 2(n-1)t) and flat factors.
  static ModelGeometry product(std::vector<Factor> factors, std::string name) {
    int total = 0;
    for (const Factor& f : factors) {
      if (f.kind == Factor::Kind::Sphere && (f.dim < 2 || f.dim > 4))
        throw std::invalid_argument("ModelGeometry: sphere factor dimension must be 2, 3 or 4");
      if (f.dim < 1) throw std::invalid_argument("ModelGeometry: factor dimension must be >= 1");
      total += f.dim;
    }
    if (total != kDim) throw std::invalid_argument("ModelGeometry: total dimension must be 4");
    ModelGeometry g;
    g.factors_ = std::move(factors);
    g.name_ = std::move(name);
    return g;
  }

  /// Fubini–Study flow g(t) = (1 - 2κt) g_FS.
  static ModelGeometry cp2(double kappa = 1.0) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
      throw std::invalid_argument("ModelGeometry: cp2 kappa must be a positive finite number");
    ModelGeometry g;
    g.kappa_ = kappa;
    g.name_ = "cp2";
    return g;
  }

  bool is_cp2() const { return kappa_.has_value(); }
  double kappa() const { return kappa_.value_or(0.0); }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::string& name() const { return name_; }

  /// Frame index ranges [first, first + dim) of each factor.
  std::vector<int> factor_offsets() const {
    std::vector<int> out;
    int at = 0;
    for (const Factor& f : factors_) {
      out.push_back(at);
      at += f.dim;
    }
    return out;
  }

 private:
  ModelGeometry() = default;
  std::vector<Factor> factors_;
  std::optional<double> kappa_;
  std::string name_;
};

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"s3xr", "s2xs2", "s2xr2", "cp2", "s4", "r4"};
  return names;
}

/// Named presets. kappa is used by cp2 only.
inline ModelGeometry model_geometry(std::string_view name, double kappa = 1.0) {
  using K = Factor::Kind;
  if (name == "s3xr") return ModelGeometry::product({{K::Sphere, 3}, {K::Euclidean, 1}}, "s3xr");
  if (name == "s2xs2") return ModelGeometry::product({{K::Sphere, 2}, {K::Sphere, 2}}, "s2xs2");
  if (name == "s2xr2") return ModelGeometry::product({{K::Sphere, 2}, {K::Euclidean, 2}}, "s2xr2");
  if (name == "s4") return ModelGeometry::product({{K::Sphere, 4}}, "s4");
  if (name == "r4") return ModelGeometry::product({{K::Euclidean, 4}}, "r4");
  if (name == "cp2") return ModelGeometry::cp2(kappa);
  throw std::invalid_argument("unknown geometry '" + std::string(name) + "'");
}

namespace detail {

inline double sphere_rate(int n) { return 2.0 * (n - 1); }

}  // namespace detail

inline double singular_time(const ModelGeometry& g) {
  if (g.is_cp2()) return 1.0 / (2.0 * g.kappa());
  double T = std::numeric_limits<double>::infinity();
  for (const Factor& f : g.factors())
    if (f.kind == Factor::Kind::Sphere) T = std::min(T, 1.0 / detail::sphere_rate(f.dim));
  return T;
}

struct FlowSample {
  double t;
  double T;
  std::vector<double> sigma;  // one per factor; a single entry for cp2
};

inline FlowSample flow_sample(const ModelGeometry& g, double t) {
  const double T = singular_time(g);
  if (!std::isfinite(t)) throw DomainError("flow time must be finite");
  if (t >= T) throw DomainError("t = " + std::to_string(t) + " is not before the singular time");
  FlowSample s{t, T, {}};
  if (g.is_cp2()) {
    s.sigma.push_back(1.0 - 2.0 * g.kappa() * t);
    return s;
  }
  for (const Factor& f : g.factors())
    s.sigma.push_back(f.kind == Factor::Kind::Sphere ? 1.0 - detail::sphere_rate(f.dim) * t : 1.0);
  return s;
}

/// CP² tensor with A = Id/(2σ), B = 0, C = diag(3/(2σ), 0, 0).
inline FramedRiemann cp2_riemann(double sigma) {
  const Matrix3 a = Matrix3::Identity() / (2.0 * sigma);
  Matrix3 c = Matrix3::Zero();
  c(0, 0) = 3.0 / (2.0 * sigma);
  return riemann_from_blocks(a, Matrix3::Zero(), c, 1e-12);
}

namespace detail {

/// In-factor sectional components set to per-factor curvatures k_f.
inline FramedRiemann product_riemann(const ModelGeometry& g, const std::vector<double>& k) {
  FramedRiemann R;
  const auto offsets = g.factor_offsets();
  for (std::size_t f = 0; f < g.factors().size(); ++f) {
    const Factor& fac = g.factors()[f];
    if (fac.kind != Factor::Kind::Sphere || k[f] == 0.0) continue;
    const int lo = offsets[f], hi = offsets[f] + fac.dim;
    for (int i = lo; i < hi; ++i)
      for (int j = i + 1; j < hi; ++j) R.set_sectional(i, j, k[f]);
  }
  return R;
}

}  // namespace detail

/// Curvature in the σ-rescaled orthonormal frame at time t.
inline FramedRiemann riemann_at(const ModelGeometry& g, double t) {
  const FlowSample s = flow_sample(g, t);
  if (g.is_cp2()) return cp2_riemann(s.sigma[0]);
  std::vector<double> k(s.sigma.size());
  for (std::size_t f = 0; f < k.size(); ++f) k[f] = 1.0 / s.sigma[f];
  return detail::product_riemann(g, k);
}

/// Frame components of the curvature of κ·g: every component divided by κ.
inline FramedRiemann scale_metric(const FramedRiemann& R, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("scale_metric: kappa must be a positive finite number");
  FramedRiemann out = R;
  out /= kappa;
  return out;
}

struct BlowupSequence {
  ModelGeometry geometry;
  double t;                       // rescaled time, negative
  double T;                       // singular time of the original flow
  double base;                    // λ_i = base^i
  std::vector<int> exponents;     // i for each entry
  std::vector<double> lambdas;    // strictly decreasing

  std::size_t size() const { return lambdas.size(); }
};

/// λ_i = base^i for `count` consecutive i, starting at the smallest i ≥ 1
/// with T + λ_i t ≥ 0 so that every rescaled time lies in the original
/// lifespan.
inline BlowupSequence make_blowup_sequence(const ModelGeometry& g, double base, int count,
                                           double t = -1.0) {
  const double T = singular_time(g);
  if (!std::isfinite(T)) throw DomainError("blow-up needs a finite singular time");
  if (!(base > 0.0 && base < 1.0)) throw std::invalid_argument("lambda base must lie in (0, 1)");
  if (count < 1) throw std::invalid_argument("blow-up count must be >= 1");
  if (!(t < 0.0) || !std::isfinite(t)) throw std::invalid_argument("blow-up time t must be negative");
  int i = 1;
  double lambda = base;
  while (T + lambda * t < 0.0) {
    ++i;
    lambda *= base;
    if (lambda == 0.0) throw DomainError("no admissible lambda for this t");
  }
  BlowupSequence seq{g, t, T, base, {}, {}};
  for (int n = 0; n < count; ++n, ++i) {
    seq.exponents.push_back(i);
    seq.lambdas.push_back(std::pow(base, i));
  }
  return seq;
}

/// Curvature of g_k = λ⁻¹ g(T + λ t) for the k-th entry (0-based).
inline FramedRiemann blowup_riemann(const BlowupSequence& seq, std::size_t k) {
  if (k >= seq.size()) throw std::out_of_range("blowup_riemann: index out of range");
  const double lambda = seq.lambdas[k];
  const double s = seq.T + lambda * seq.t;
  if (s < 0.0 || s >= seq.T) throw DomainError("blow-up time T + lambda*t is outside [0, T)");
  return scale_metric(riemann_at(seq.geometry, s), 1.0 / lambda);
}

/// λ → 0 limit: factors singular at T carry 1/(-2(n-1)t), the rest vanish.
inline FramedRiemann blowup_limit_riemann(const ModelGeometry& g, double t) {
  const double T = singular_time(g);
  if (!std::isfinite(T)) throw DomainError("blow-up needs a finite singular time");
  if (!(t < 0.0)) throw std::invalid_argument("blow-up time t must be negative");
  if (g.is_cp2()) return cp2_riemann(-2.0 * g.kappa() * t);
  std::vector<double> k;
  for (const Factor& f : g.factors()) {
    const bool singular = f.kind == Factor::Kind::Sphere && 1.0 / detail::sphere_rate(f.dim) == T;
    k.push_back(singular ? 1.0 / (-detail::sphere_rate(f.dim) * t) : 0.0);
  }
  return detail::product_riemann(g, k);
}

struct CurveSequenceReport {
  std::vector<int> exponents;
  std::vector<double> lambdas;
  std::vector<CurveCoeffs> raw;
  std::vector<CurveCoeffs> normalized;
  CurveCoeffs limit;  // normalized
  std::vector<double> distances;
  CurveClass limit_class;
  bool degenerate = false;
  bool monotone = true;
  bool converged = true;
};

inline CurveSequenceReport curve_sequence(const BlowupSequence& seq, double tol = 1e-12) {
  CurveSequenceReport rep;
  rep.exponents = seq.exponents;
  rep.lambdas = seq.lambdas;
  const FramedRiemann limit_R = blowup_limit_riemann(seq.geometry, seq.t);
  const CurvatureBlocks limit_blocks = curvature_operator_blocks(limit_R);
  const CurveCoeffs limit_raw = curve_coeffs(limit_blocks);
  rep.limit = normalized(limit_raw);
  rep.limit_class = classify(limit_blocks, limit_raw, kClassifyTol);

  bool all_zero = rep.limit_class.tag == CurveTag::IdenticallyZero;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const CurvatureBlocks b = curvature_operator_blocks(blowup_riemann(seq, k));
    const CurveCoeffs c = curve_coeffs(b);
    rep.raw.push_back(c);
    const bool zero = classify(b, c, kClassifyTol).tag == CurveTag::IdenticallyZero;
    all_zero = all_zero && zero;
    const CurveCoeffs n = zero ? CurveCoeffs{} : normalized(c);
    rep.normalized.push_back(n);
    const CurveCoeffs ref = rep.limit_class.tag == CurveTag::IdenticallyZero ? CurveCoeffs{} : rep.limit;
    rep.distances.push_back(projective_distance(n, ref));
  }
  rep.degenerate = all_zero;
  for (std::size_t k = 1; k < rep.distances.size(); ++k)
    if (rep.distances[k] > rep.distances[k - 1] + tol) rep.monotone = false;
  rep.converged = !rep.distances.empty() && rep.distances.back() <= tol &&
                  rep.distances.back() <= rep.distances.front() + tol;
  return rep;
}

/// Max-entry distance of each blowup_riemann(k) to the limit tensor.
inline std::vector<double> blowup_tensor_distances(const BlowupSequence& seq) {
  const FramedRiemann limit = blowup_limit_riemann(seq.geometry, seq.t);
  std::vector<double> out;
  for (std::size_t k = 0; k < seq.size(); ++k) out.push_back((blowup_riemann(seq, k) - limit).max_abs());
  return out;
}

struct TypeOneWitness {
  std::vector<double> times;
  std::vector<double> values;  // max|R(t)| · (T - t)
  double min = 0.0;
  double max = 0.0;
  double spread() const { return max - min; }
};

/// max|R(t)|·(T - t) at t_k = kT/samples, k = 0..samples-1.
inline TypeOneWitness type_one_witness(const ModelGeometry& g, int samples = 100) {
  const double T = singular_time(g);
  if (!std::isfinite(T)) throw DomainError("Type I witness needs a finite singular time");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  TypeOneWitness w;
  for (int k = 0; k < samples; ++k) {
    const double t = T * k / samples;
    w.times.push_back(t);
    w.values.push_back(riemann_at(g, t).max_abs() * (T - t));
  }
  w.min = *std::min_element(w.values.begin(), w.values.end());
  w.max = *std::max_element(w.values.begin(), w.values.end());
  return w;
}

}  // namespace branchcurve

#pragma once

// The four commands behind `branchcurve`. Each returns a process exit code
// and writes results to `out` and a one-line diagnostic to `err`.
//
//   0 success   1 failed convergence assertion or internal error
//   2 schema or usage error   3 symmetry violation   4 singular-time domain
//   5 identically-zero curve where a curve is required

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "curve.hpp"
#include "flow.hpp"
#include "io.hpp"
#include "tensor_core.hpp"

namespace branchcurve::cli {

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,
  kSchema = 2,
  kSymmetry = 3,
  kDomain = 4,
  kZeroCurve = 5,
};

inline constexpr double kDefaultCliTol = 1e-10;
inline constexpr int kOracleSamples = 64;

/// flag > BRANCHCURVE_TOL > 1e-10. Throws SchemaError on an unparsable or
/// non-positive value.
inline double resolve_tolerance(std::optional<double> flag) {
  if (flag) {
    if (!(*flag > 0.0) || !std::isfinite(*flag)) throw SchemaError("--tol must be a positive number");
    return *flag;
  }
  if (const char* env = std::getenv("BRANCHCURVE_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
      throw SchemaError(std::string("BRANCHCURVE_TOL is not a positive number: '") + env + "'");
    return v;
  }
  return kDefaultCliTol;
}

/// Runs f and maps library exceptions onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kSchema;
  } catch (const SymmetryError& e) {
    err << "error: " << e.what() << "\n";
    return kSymmetry;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kSchema;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
}

enum class Emit { Coeffs, Class, Blocks, All };

inline Emit parse_emit(const std::string& s) {
  if (s == "coeffs") return Emit::Coeffs;
  if (s == "class") return Emit::Class;
  if (s == "blocks") return Emit::Blocks;
  if (s == "all") return Emit::All;
  throw SchemaError("--emit must be one of coeffs|class|blocks|all");
}

struct ComputeOptions {
  std::string input;
  std::string emit = "all";
  std::optional<double> tol;
};

inline Json class_json(const CurveClass& c) {
  Json j;
  j["tag"] = to_string(c.tag);
  j["detail"] = c.detail;
  return j;
}

inline int cmd_compute(const ComputeOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double tol = resolve_tolerance(opt.tol);
    const Emit emit = parse_emit(opt.emit);
    const InputDocument doc = parse_input(read_json_file(opt.input), tol);
    const FramedRiemann R = document_riemann(doc);
    const SymmetryReport sym = validate_symmetries(R, tol * std::max(1.0, R.max_abs()));
    if (!sym.ok) throw SymmetryError(sym.describe());

    const CurvatureBlocks blocks = curvature_operator_blocks(R);
    const CurveCoeffs coeffs = curve_coeffs(blocks);
    const CurveClass cls = classify(blocks, coeffs, tol);
    const bool zero = cls.tag == CurveTag::IdenticallyZero;

    Json j;
    if (doc.geometry) {
      Json src;
      src["geometry"] = doc.geometry->name;
      src["time"] = doc.geometry->time;
      if (doc.geometry->name == "cp2") src["kappa"] = doc.geometry->kappa;
      j["source"] = src;
    } else {
      Json src;
      src["components"] = doc.component_count;
      j["source"] = src;
    }
    if (emit == Emit::Class || emit == Emit::All) j["class"] = class_json(cls);
    if (emit == Emit::Coeffs || emit == Emit::All) {
      Json c;
      c["raw"] = coeffs_json(coeffs);
      c["normalized"] = coeffs_json(zero ? CurveCoeffs{} : normalized(coeffs));
      j["coeffs"] = c;
    }
    if (emit == Emit::Blocks || emit == Emit::All) j["blocks"] = blocks_json(blocks);
    if (emit == Emit::All) {
      const OracleReport oracle = oracle_check(blocks, coeffs, kOracleSamples, tol);
      const DecompositionReport dec = four_part_decomposition_check(R, tol);
      Json d;
      d["oracle"]["ok"] = oracle.ok;
      d["oracle"]["samples"] = kOracleSamples;
      d["oracle"]["worst_relative"] = oracle.worst_relative;
      d["oracle"]["worst_absolute"] = oracle.worst_absolute;
      d["symmetry"]["ok"] = sym.ok;
      d["symmetry"]["max_deviation"] = sym.max_deviation;
      d["decomposition"]["ok"] = dec.ok;
      d["decomposition"]["max_deviation"] = dec.max_deviation;
      d["tolerance"] = tol;
      j["diagnostics"] = d;
      j["riemann"] = riemann_json(R);
    }
    out << to_json_text(j);
    return static_cast<int>(kOk);
  });
}

struct FlowOptions {
  std::string geometry;
  double t0 = 0.0;
  std::optional<double> t1;
  int steps = 5;
  double kappa = 1.0;
  std::string emit = "csv";
  std::optional<double> tol;
};

inline int cmd_flow(const FlowOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double tol = resolve_tolerance(opt.tol);
    if (opt.emit != "csv") throw SchemaError("--emit must be csv");
    const ModelGeometry g = model_geometry(opt.geometry, opt.kappa);
    const double T = singular_time(g);
    if (opt.steps < 1) throw SchemaError("--steps must be >= 1");
    if (!std::isfinite(opt.t0) || opt.t0 < 0.0) throw SchemaError("--t0 must be >= 0");
    const double t1 = opt.t1.value_or(opt.t0);
    if (!std::isfinite(t1) || t1 < opt.t0) throw SchemaError("--t1 must be >= --t0");
    if (t1 >= T) throw DomainError("time range reaches the singular time T = " + format_double(T));
    if (opt.steps == 1 && t1 != opt.t0) throw SchemaError("--steps 1 needs t0 == t1");

    std::string text = "t,class";
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n)
        text += ",c" + std::to_string(m) + std::to_string(n) + "_re,c" + std::to_string(m) +
                std::to_string(n) + "_im";
    text += "\n";
    for (int k = 0; k < opt.steps; ++k) {
      const double t = opt.steps == 1 ? opt.t0 : opt.t0 + (t1 - opt.t0) * k / (opt.steps - 1);
      const CurvatureBlocks b = curvature_operator_blocks(riemann_at(g, t));
      const CurveCoeffs c = curve_coeffs(b);
      const CurveClass cls = classify(b, c, tol);
      const CurveCoeffs n = cls.tag == CurveTag::IdenticallyZero ? CurveCoeffs{} : normalized(c);
      text += format_double(t) + "," + to_string(cls.tag);
      for (int m = 0; m <= 4; ++m)
        for (int q = 0; q <= 4; ++q)
          text += "," + format_double(n(m, q).real()) + "," + format_double(n(m, q).imag());
      text += "\n";
    }
    out << text;
    return static_cast<int>(kOk);
  });
}

struct BlowupOptions {
  std::string geometry;
  double lambda_base = 0.5;
  int count = 8;
  double t = -1.0;
  double kappa = 1.0;
  std::optional<double> tol;
};

inline int cmd_blowup(const BlowupOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double tol = resolve_tolerance(opt.tol);
    const ModelGeometry g = model_geometry(opt.geometry, opt.kappa);
    const BlowupSequence seq = make_blowup_sequence(g, opt.lambda_base, opt.count, opt.t);
    const CurveSequenceReport rep = curve_sequence(seq, tol);
    const std::vector<double> tensor_d = blowup_tensor_distances(seq);

    Json j;
    j["geometry"] = g.name();
    if (g.is_cp2()) j["kappa"] = g.kappa();
    j["T"] = seq.T;
    j["t"] = seq.t;
    j["lambda_base"] = seq.base;
    Json entries = Json::array();
    for (std::size_t k = 0; k < seq.size(); ++k) {
      Json e;
      e["i"] = rep.exponents[k];
      e["lambda"] = rep.lambdas[k];
      e["distance"] = rep.distances[k];
      e["tensor_distance"] = tensor_d[k];
      entries.push_back(e);
    }
    j["entries"] = entries;
    j["limit"]["class"] = class_json(rep.limit_class);
    j["limit"]["coeffs"] = coeffs_json(rep.limit_class.tag == CurveTag::IdenticallyZero ? CurveCoeffs{}
                                                                                        : rep.limit);
    j["degenerate"] = rep.degenerate;
    j["monotone"] = rep.monotone;
    j["converged"] = rep.converged;
    const bool last_le_first = rep.distances.back() <= rep.distances.front() + tol;
    j["last_le_first"] = last_le_first;
    out << to_json_text(j);
    if (!last_le_first) {
      err << "error: convergence assertion d_N <= d_1 failed\n";
      return static_cast<int>(kFailed);
    }
    return static_cast<int>(kOk);
  });
}

struct PlotOptions {
  std::string input;
  std::string chart = "pp";
  int grid = 61;
  std::string out_path;  // empty: write to `out`
  std::optional<double> tol;
};

inline Chart parse_chart(const std::string& s) {
  if (s == "pp") return Chart::PP;
  if (s == "pm") return Chart::PM;
  if (s == "mp") return Chart::MP;
  if (s == "mm") return Chart::MM;
  throw SchemaError("--chart must be one of pp|pm|mp|mm");
}

/// log10|Δ| with Δ = 4(M² - PQ) over the real square [-3, 3]², x-major.
inline int cmd_plot(const PlotOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double tol = resolve_tolerance(opt.tol);
    const Chart chart = parse_chart(opt.chart);
    if (opt.grid < 2) throw SchemaError("--grid must be >= 2");
    const InputDocument doc = parse_input(read_json_file(opt.input), tol);
    const FramedRiemann R = document_riemann(doc);
    const CurvatureBlocks blocks = curvature_operator_blocks(R);
    const CurveCoeffs coeffs = curve_coeffs(blocks);
    if (classify(blocks, coeffs, tol).tag == CurveTag::IdenticallyZero) {
      err << "error: branching curve is identically zero; nothing to plot\n";
      return static_cast<int>(kZeroCurve);
    }
    std::string text = "x,y,log10_abs_delta\n";
    for (int ix = 0; ix < opt.grid; ++ix) {
      const double x = -3.0 + 6.0 * ix / (opt.grid - 1);
      for (int iy = 0; iy < opt.grid; ++iy) {
        const double y = -3.0 + 6.0 * iy / (opt.grid - 1);
        const auto [a, b] = chart_point(chart, x, y);
        const double v = std::abs(4.0 * evaluate(coeffs, a, b));
        const std::string cell = v == 0.0 ? std::string("-inf") : format_double(std::log10(v));
        text += format_double(x) + "," + format_double(y) + "," + cell + "\n";
      }
    }
    if (opt.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(opt.out_path, std::ios::binary);
      if (!f) throw SchemaError("cannot write '" + opt.out_path + "'");
      f << text;
      if (!f) throw std::runtime_error("write to '" + opt.out_path + "' failed");
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace branchcurve::cli

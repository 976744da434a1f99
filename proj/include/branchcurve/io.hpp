#pragma once

// Input documents (named geometry or sparse Riemann components) and a
// deterministic JSON writer: doubles at 17 significant digits, -0 written
// as 0, keys in insertion order.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "curve.hpp"
#include "flow.hpp"
#include "tensor_core.hpp"

namespace branchcurve {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent document structure.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Components contradict the curvature symmetries.
class SymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeometrySource {
  std::string name;
  double time = 0.0;
  double kappa = 1.0;
};

struct InputDocument {
  std::optional<GeometrySource> geometry;
  FramedRiemann riemann;  // filled when geometry is empty
  std::size_t component_count = 0;
};

namespace detail {

inline double require_number(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing '" + key + "'");
  if (!it->is_number()) throw SchemaError(where + ": '" + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw SchemaError(where + ": '" + key + "' must be finite");
  return v;
}

inline int require_index(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing '" + key + "'");
  if (!it->is_number_integer()) throw SchemaError(where + ": '" + key + "' must be an integer");
  const auto v = it->get<long long>();
  if (v < 1 || v > kDim) throw SchemaError(where + ": '" + key + "' must be in 1..4");
  return static_cast<int>(v) - 1;
}

/// Writes v into the orbit of (i,j,k,l) under the pair antisymmetries and
/// pair exchange. Conflicting values are an error.
class OrbitFiller {
 public:
  explicit OrbitFiller(double tol) : tol_(tol) {}

  void add(int i, int j, int k, int l, double v, const std::string& where) {
    if ((i == j || k == l) && v != 0.0)
      throw SymmetryError(where + ": component with a repeated index in an antisymmetric pair must be 0");
    const std::array<std::tuple<int, int, int, int, double>, 8> orbit{{
        {i, j, k, l, v}, {j, i, k, l, -v}, {i, j, l, k, -v}, {j, i, l, k, v},
        {k, l, i, j, v}, {l, k, i, j, -v}, {k, l, j, i, -v}, {l, k, j, i, v}}};
    for (const auto& [a, b, c, d, x] : orbit) {
      const int key = ((a * kDim + b) * kDim + c) * kDim + d;
      const auto it = set_.find(key);
      if (it != set_.end()) {
        if (std::abs(it->second - x) > tol_ * std::max(1.0, std::abs(x))) {
          std::ostringstream os;
          os << where << ": conflicts with an earlier component at R_" << a + 1 << b + 1 << c + 1
             << d + 1 << " (" << it->second << " vs " << x << ")";
          throw SymmetryError(os.str());
        }
        continue;
      }
      set_.emplace(key, x);
      R_(a, b, c, d) = x;
    }
  }

  const FramedRiemann& result() const { return R_; }

 private:
  double tol_;
  std::map<int, double> set_;
  FramedRiemann R_;
};

}  // namespace detail

/// Parses an input document. Keys other than geometry/time/kappa/riemann are
/// ignored, so compute output can be fed back in.
inline InputDocument parse_input(const Json& doc, double tol = 1e-10) {
  if (!doc.is_object()) throw SchemaError("input: top level must be an object");
  const bool has_geom = doc.contains("geometry");
  const bool has_riem = doc.contains("riemann");
  if (has_geom == has_riem)
    throw SchemaError("input: exactly one of 'geometry' or 'riemann' must be present");

  InputDocument out;
  if (has_geom) {
    const Json& g = doc.at("geometry");
    if (!g.is_string()) throw SchemaError("input: 'geometry' must be a string");
    GeometrySource src;
    src.name = g.get<std::string>();
    bool known = false;
    for (const auto& n : model_names()) known = known || n == src.name;
    if (!known) throw SchemaError("input: unknown geometry '" + src.name + "'");
    src.time = detail::require_number(doc, "time", "input");
    if (doc.contains("kappa")) {
      if (src.name != "cp2") throw SchemaError("input: 'kappa' applies to cp2 only");
      src.kappa = detail::require_number(doc, "kappa", "input");
      if (!(src.kappa > 0.0)) throw SchemaError("input: 'kappa' must be positive");
    }
    out.geometry = src;
    return out;
  }

  const Json& list = doc.at("riemann");
  if (!list.is_array()) throw SchemaError("input: 'riemann' must be an array");
  detail::OrbitFiller filler(tol);
  for (std::size_t n = 0; n < list.size(); ++n) {
    const std::string where = "riemann[" + std::to_string(n) + "]";
    const Json& e = list[n];
    if (!e.is_object()) throw SchemaError(where + ": entry must be an object");
    for (const auto& [key, _] : e.items())
      if (key != "i" && key != "j" && key != "k" && key != "l" && key != "value")
        throw SchemaError(where + ": unexpected key '" + key + "'");
    filler.add(detail::require_index(e, "i", where), detail::require_index(e, "j", where),
               detail::require_index(e, "k", where), detail::require_index(e, "l", where),
               detail::require_number(e, "value", where), where);
  }
  out.riemann = filler.result();
  out.component_count = list.size();
  const SymmetryReport rep = validate_symmetries(out.riemann, tol * std::max(1.0, out.riemann.max_abs()));
  if (!rep.ok) throw SymmetryError("riemann: " + rep.describe());
  return out;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Tensor described by the document. Geometry times past the singular time
/// raise DomainError.
inline FramedRiemann document_riemann(const InputDocument& doc) {
  if (!doc.geometry) return doc.riemann;
  return riemann_at(model_geometry(doc.geometry->name, doc.geometry->kappa), doc.geometry->time);
}

// ---------------------------------------------------------------------------
// Output.

/// %.17g, with -0 written as 0 and non-finite values as strings.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_json(std::ostream& os, const Json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(key).dump() << ": ";
        write_json(os, val, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (j.empty()) {
        os << "[]";
      } else if (flat) {
        os << "[";
        for (std::size_t n = 0; n < j.size(); ++n) {
          if (n) os << ", ";
          write_json(os, j[n], indent);
        }
        os << "]";
      } else {
        os << "[\n";
        for (std::size_t n = 0; n < j.size(); ++n) {
          if (n) os << ",\n";
          os << pad;
          write_json(os, j[n], indent + 2);
        }
        os << "\n" << close << "]";
      }
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

inline std::string to_json_text(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << "\n";
  return os.str();
}

inline Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json coeffs_json(const CurveCoeffs& c) {
  Json rows = Json::array();
  for (int m = 0; m <= 4; ++m) {
    Json row = Json::array();
    for (int n = 0; n <= 4; ++n) row.push_back(complex_json(c(m, n)));
    rows.push_back(row);
  }
  return rows;
}

inline Json matrix_json(const Matrix3& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

inline Json blocks_json(const CurvatureBlocks& b) {
  Json j;
  j["A"] = matrix_json(b.A);
  j["B"] = matrix_json(b.B);
  j["C"] = matrix_json(b.C);
  j["Wplus"] = matrix_json(b.Wplus);
  j["Wminus"] = matrix_json(b.Wminus);
  j["scal"] = b.scal;
  return j;
}

/// Nonzero R_{ijkl} with i<j, k<l, (i,j) ≤ (k,l), 1-based; enough to rebuild
/// the tensor through the orbit fill.
inline Json riemann_json(const FramedRiemann& R) {
  Json list = Json::array();
  for (std::size_t p = 0; p < 6; ++p)
    for (std::size_t q = p; q < 6; ++q) {
      const auto [i, j] = detail::kPairs[p];
      const auto [k, l] = detail::kPairs[q];
      const double v = R(i, j, k, l);
      if (v == 0.0) continue;
      Json e;
      e["i"] = i + 1;
      e["j"] = j + 1;
      e["k"] = k + 1;
      e["l"] = l + 1;
      e["value"] = v;
      list.push_back(e);
    }
  return list;
}

}  // namespace branchcurve

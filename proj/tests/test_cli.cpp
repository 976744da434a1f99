#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "branchcurve/cli.hpp"
#include "branchcurve/io.hpp"

using namespace branchcurve;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples = BRANCHCURVE_SAMPLES_DIR;

struct CmdResult {
  int code;
  std::string out;
  std::string err;
};

template <typename Opt, typename F>
CmdResult run(F cmd, const Opt& opt) {
  std::ostringstream out, err;
  const int code = cmd(opt, out, err);
  return {code, out.str(), err.str()};
}

CmdResult compute(const std::string& file, const std::string& emit = "all") {
  cli::ComputeOptions o;
  o.input = (kSamples / "inputs" / file).string();
  o.emit = emit;
  return run(cli::cmd_compute, o);
}

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("branchcurve_test_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Io, FormatDouble) {
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Io, WriterIsStable) {
  Json j;
  j["b"] = 1;
  j["a"] = Json::array({0.5, -0.0});
  j["c"]["d"] = "x\"y";
  EXPECT_EQ(to_json_text(j), "{\n  \"b\": 1,\n  \"a\": [0.5, 0],\n  \"c\": {\n    \"d\": \"x\\\"y\"\n  }\n}\n");
}

TEST(Io, OrbitFillCompletesSymmetries) {
  const InputDocument doc = parse_input(Json::parse(R"({"riemann":[{"i":1,"j":2,"k":2,"l":1,"value":2.5}]})"));
  EXPECT_DOUBLE_EQ(doc.riemann(0, 1, 1, 0), 2.5);
  EXPECT_DOUBLE_EQ(doc.riemann(1, 0, 0, 1), 2.5);
  EXPECT_DOUBLE_EQ(doc.riemann(0, 1, 0, 1), -2.5);
  EXPECT_DOUBLE_EQ(doc.riemann(1, 0, 1, 0), -2.5);
}

TEST(Io, SchemaErrors) {
  EXPECT_THROW(parse_input(Json::parse("[]")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"time":0})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"geometry":"s3xr"})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"geometry":"s3xr","time":"0"})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"geometry":"torus","time":0})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"geometry":"s3xr","time":0,"kappa":2})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"riemann":{}})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"riemann":[{"i":1,"j":2,"k":2,"l":1}]})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"riemann":[{"i":0,"j":2,"k":2,"l":1,"value":1}]})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"riemann":[{"i":1.5,"j":2,"k":2,"l":1,"value":1}]})")), SchemaError);
  EXPECT_THROW(parse_input(Json::parse(R"({"riemann":[{"i":1,"j":2,"k":2,"l":1,"value":1,"x":0}]})")), SchemaError);
}

TEST(Io, SymmetryErrors) {
  EXPECT_THROW(parse_input(Json::parse(R"({"riemann":[{"i":1,"j":1,"k":2,"l":1,"value":1}]})")), SymmetryError);
  EXPECT_THROW(parse_input(Json::parse(
                   R"({"riemann":[{"i":1,"j":2,"k":2,"l":1,"value":1},{"i":2,"j":1,"k":2,"l":1,"value":1}]})")),
               SymmetryError);
  EXPECT_THROW(parse_input(Json::parse(R"({"riemann":[{"i":1,"j":2,"k":3,"l":4,"value":1}]})")), SymmetryError);
  // Consistent duplicates are fine.
  EXPECT_NO_THROW(parse_input(Json::parse(
      R"({"riemann":[{"i":1,"j":2,"k":2,"l":1,"value":1},{"i":2,"j":1,"k":1,"l":2,"value":1}]})")));
}

TEST(Cli, ComputeS3xRClass) {
  const CmdResult r = compute("s3xr.json", "class");
  EXPECT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["class"]["tag"], "QUADRUPLE_DIAGONAL");
  EXPECT_FALSE(j.contains("coeffs"));
}

TEST(Cli, ComputeS2xR2Detail) {
  const CmdResult r = compute("s2xr2.json", "class");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["class"]["tag"], "IDENTICALLY_ZERO");
  EXPECT_NE(j["class"]["detail"].get<std::string>().find("M^2 = PQ"), std::string::npos);
}

TEST(Cli, ComputeAllFields) {
  const CmdResult r = compute("mixed.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  for (const char* key : {"source", "class", "coeffs", "blocks", "diagnostics", "riemann"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["coeffs"]["raw"].size(), 5u);
  EXPECT_EQ(j["coeffs"]["raw"][0].size(), 5u);
  EXPECT_TRUE(j["diagnostics"]["oracle"]["ok"].get<bool>());
  EXPECT_TRUE(j["diagnostics"]["decomposition"]["ok"].get<bool>());
}

TEST(Cli, ComputeComponentsMatchNamedGeometry) {
  const Json a = Json::parse(compute("s3xr.json", "coeffs").out);
  const Json b = Json::parse(compute("s3xr_components.json", "coeffs").out);
  EXPECT_EQ(a["coeffs"], b["coeffs"]);
}

TEST(Cli, ComputeRoundTripsThroughItsOwnOutput) {
  for (const char* file : {"mixed.json", "s2xs2.json", "cp2.json"}) {
    const CmdResult first = compute(file);
    ASSERT_EQ(first.code, 0) << first.err;
    const fs::path again = temp_file(std::string("roundtrip_") + file, first.out);
    cli::ComputeOptions o;
    o.input = again.string();
    const CmdResult second = run(cli::cmd_compute, o);
    ASSERT_EQ(second.code, 0) << second.err;
    EXPECT_EQ(Json::parse(first.out)["coeffs"]["normalized"], Json::parse(second.out)["coeffs"]["normalized"])
        << file;
    fs::remove(again);
  }
}

TEST(Cli, ComputeExitCodes) {
  EXPECT_EQ(compute("malformed/missing_keys.json").code, cli::kSchema);
  EXPECT_EQ(compute("malformed/both_keys.json").code, cli::kSchema);
  EXPECT_EQ(compute("malformed/truncated.json").code, cli::kSchema);
  EXPECT_EQ(compute("malformed/index_range.json").code, cli::kSchema);
  EXPECT_EQ(compute("malformed/conflict.json").code, cli::kSymmetry);
  EXPECT_EQ(compute("malformed/bianchi.json").code, cli::kSymmetry);
  EXPECT_EQ(compute("malformed/past_singular.json").code, cli::kDomain);
  EXPECT_EQ(compute("does_not_exist.json").code, cli::kSchema);
  EXPECT_EQ(compute("s3xr.json", "everything").code, cli::kSchema);
  const CmdResult r = compute("malformed/conflict.json");
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, ToleranceResolution) {
  ::unsetenv("BRANCHCURVE_TOL");
  EXPECT_EQ(cli::resolve_tolerance(std::nullopt), 1e-10);
  ::setenv("BRANCHCURVE_TOL", "1e-8", 1);
  EXPECT_EQ(cli::resolve_tolerance(std::nullopt), 1e-8);
  EXPECT_EQ(cli::resolve_tolerance(1e-6), 1e-6);
  ::setenv("BRANCHCURVE_TOL", "abc", 1);
  EXPECT_THROW(cli::resolve_tolerance(std::nullopt), SchemaError);
  ::unsetenv("BRANCHCURVE_TOL");
  EXPECT_THROW(cli::resolve_tolerance(-1.0), SchemaError);
}

TEST(Cli, FlowS2xS2ConstantClass) {
  cli::FlowOptions o;
  o.geometry = "s2xs2";
  o.t1 = 0.4;
  o.steps = 5;
  const CmdResult r = run(cli::cmd_flow, o);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("t,class,c00_re,c00_im,c01_re", 0), 0u);
  EXPECT_NE(line.find("c44_im"), std::string::npos);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",DOUBLE_RECTANGLE,"), std::string::npos);
  }
  EXPECT_EQ(rows, 5);
}

TEST(Cli, FlowS3xRRowsProjectivelyIdentical) {
  cli::FlowOptions o;
  o.geometry = "s3xr";
  o.t1 = 0.2;
  o.steps = 3;
  const CmdResult r = run(cli::cmd_flow, o);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line, first;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const std::string coeffs = line.substr(line.find(',') + 1);
    if (first.empty()) first = coeffs;
    EXPECT_EQ(coeffs, first);
  }
}

TEST(Cli, FlowErrors) {
  cli::FlowOptions o;
  o.geometry = "s3xr";
  o.t1 = 0.25;
  EXPECT_EQ(run(cli::cmd_flow, o).code, cli::kDomain);
  o.t1 = 0.1;
  o.t0 = 0.2;
  EXPECT_EQ(run(cli::cmd_flow, o).code, cli::kSchema);
  o.t0 = 0.0;
  o.geometry = "torus";
  EXPECT_EQ(run(cli::cmd_flow, o).code, cli::kSchema);
  o.geometry = "s4";
  o.t1 = 0.1;
  const CmdResult r = run(cli::cmd_flow, o);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("IDENTICALLY_ZERO"), std::string::npos);
}

TEST(Cli, Blowup) {
  cli::BlowupOptions o;
  o.geometry = "s3xr";
  const CmdResult r = run(cli::cmd_blowup, o);
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["limit"]["class"]["tag"], "QUADRUPLE_DIAGONAL");
  EXPECT_EQ(j["entries"].size(), 8u);
  for (const auto& e : j["entries"]) EXPECT_LE(e["distance"].get<double>(), 1e-12);

  o.geometry = "s2xs2";
  EXPECT_EQ(Json::parse(run(cli::cmd_blowup, o).out)["limit"]["class"]["tag"], "DOUBLE_RECTANGLE");
  o.geometry = "s2xr2";
  EXPECT_TRUE(Json::parse(run(cli::cmd_blowup, o).out)["degenerate"].get<bool>());
  o.geometry = "r4";
  EXPECT_EQ(run(cli::cmd_blowup, o).code, cli::kDomain);
}

TEST(Cli, PlotS3xRMinimaOnDiagonal) {
  cli::PlotOptions o;
  o.input = (kSamples / "inputs" / "s3xr.json").string();
  o.grid = 7;
  const CmdResult r = run(cli::cmd_plot, o);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,log10_abs_delta");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    double x, y;
    char c;
    std::istringstream row(line);
    row >> x >> c >> y >> c;
    std::string v;
    row >> v;
    if (x == y) {
      EXPECT_TRUE(v == "-inf" || std::stod(v) < -10) << line;
    } else {
      EXPECT_GT(std::stod(v), -10) << line;
    }
  }
  EXPECT_EQ(rows, 49);
}

TEST(Cli, PlotErrors) {
  cli::PlotOptions o;
  o.input = (kSamples / "inputs" / "s4.json").string();
  EXPECT_EQ(run(cli::cmd_plot, o).code, cli::kZeroCurve);
  o.input = (kSamples / "inputs" / "s3xr.json").string();
  o.chart = "qq";
  EXPECT_EQ(run(cli::cmd_plot, o).code, cli::kSchema);
  o.chart = "mm";
  o.grid = 1;
  EXPECT_EQ(run(cli::cmd_plot, o).code, cli::kSchema);
}

TEST(Cli, PlotToFile) {
  cli::PlotOptions o;
  o.input = (kSamples / "inputs" / "s2xs2.json").string();
  o.grid = 5;
  o.out_path = (fs::temp_directory_path() / "branchcurve_plot_test.csv").string();
  const CmdResult r = run(cli::cmd_plot, o);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(o.out_path);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(std::count(all.begin(), all.end(), '\n'), 26);
  fs::remove(o.out_path);
}

// branchcurve compute|flow|blowup|plot

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "branchcurve/cli.hpp"

namespace cli = branchcurve::cli;

int main(int argc, char** argv) {
  CLI::App app{"Branching curve of a 4D curvature tensor, along closed-form Ricci flows"};
  app.require_subcommand(1);

  double tol_value = 0.0;
  auto add_tol = [&](CLI::App* sub) {
    return sub->add_option("--tol", tol_value, "tolerance (default: $BRANCHCURVE_TOL or 1e-10)");
  };
  auto tol_of = [&](CLI::Option* o) -> std::optional<double> {
    return o->count() ? std::optional<double>(tol_value) : std::nullopt;
  };

  cli::ComputeOptions compute;
  auto* c = app.add_subcommand("compute", "curve coefficients, class and blocks as JSON");
  c->add_option("input", compute.input, "input JSON document")->required();
  c->add_option("--emit", compute.emit, "coeffs|class|blocks|all")
      ->check(CLI::IsMember({"coeffs", "class", "blocks", "all"}));
  auto* c_tol = add_tol(c);

  cli::FlowOptions flow;
  double flow_t1 = 0.0;
  auto* f = app.add_subcommand("flow", "normalized coefficients along a model flow as CSV");
  f->add_option("geometry", flow.geometry, "s3xr|s2xs2|s2xr2|cp2|s4|r4")->required();
  f->add_option("--t0", flow.t0, "first time");
  auto* f_t1 = f->add_option("--t1", flow_t1, "last time (default: t0)");
  f->add_option("--steps", flow.steps, "number of samples, endpoints included");
  f->add_option("--kappa", flow.kappa, "cp2 Einstein constant");
  f->add_option("--emit", flow.emit, "csv")->check(CLI::IsMember({"csv"}));
  auto* f_tol = add_tol(f);

  cli::BlowupOptions blowup;
  auto* b = app.add_subcommand("blowup", "coefficient convergence along a blow-up sequence");
  b->add_option("geometry", blowup.geometry, "s3xr|s2xs2|s2xr2|cp2|s4")->required();
  b->add_option("--lambda-base", blowup.lambda_base, "lambda_i = base^i");
  b->add_option("--count", blowup.count, "number of rescalings");
  b->add_option("--t", blowup.t, "rescaled time (negative)");
  b->add_option("--kappa", blowup.kappa, "cp2 Einstein constant");
  auto* b_tol = add_tol(b);

  cli::PlotOptions plot;
  auto* p = app.add_subcommand("plot", "log10|discriminant| on a real affine chart as CSV");
  p->add_option("input", plot.input, "input JSON document")->required();
  p->add_option("--chart", plot.chart, "pp|pm|mp|mm")->check(CLI::IsMember({"pp", "pm", "mp", "mm"}));
  p->add_option("--grid", plot.grid, "grid points per axis");
  p->add_option("--out", plot.out_path, "output CSV path (default: stdout)");
  auto* p_tol = add_tol(p);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kSchema;
  }

  std::ios::sync_with_stdio(false);
  if (c->parsed()) {
    compute.tol = tol_of(c_tol);
    return cli::cmd_compute(compute, std::cout, std::cerr);
  }
  if (f->parsed()) {
    flow.tol = tol_of(f_tol);
    if (f_t1->count()) flow.t1 = flow_t1;
    return cli::cmd_flow(flow, std::cout, std::cerr);
  }
  if (b->parsed()) {
    blowup.tol = tol_of(b_tol);
    return cli::cmd_blowup(blowup, std::cout, std::cerr);
  }
  plot.tol = tol_of(p_tol);
  return cli::cmd_plot(plot, std::cout, std::cerr);
}

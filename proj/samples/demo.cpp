// Branching curves of the model flows at t = 0, then a blow-up sequence.

#include <cstdio>

#include "branchcurve/branchcurve.hpp"

using namespace branchcurve;

int main() {
  for (const auto& name : model_names()) {
    const ModelGeometry g = model_geometry(name);
    const CurvatureBlocks blocks = curvature_operator_blocks(riemann_at(g, 0.0));
    const CurveCoeffs c = curve_coeffs(blocks);
    const CurveClass cls = classify(blocks, c);
    std::printf("%-6s T=%-8.4g %s\n", name.c_str(), singular_time(g), to_string(cls.tag));
    if (cls.tag == CurveTag::IdenticallyZero) {
      std::printf("       %s\n", cls.detail.c_str());
      continue;
    }
    const CurveCoeffs n = normalized(c);
    for (int m = 0; m <= 4; ++m) {
      std::printf("       ");
      for (int k = 0; k <= 4; ++k) std::printf("%6.2f", n(m, k).real() + 0.0);
      std::printf("\n");
    }
  }

  const BlowupSequence seq = make_blowup_sequence(model_geometry("s3xr"), 0.5, 6, -1.0);
  const CurveSequenceReport rep = curve_sequence(seq);
  std::printf("\ns3xr blow-up, t = -1\n");
  for (std::size_t k = 0; k < seq.size(); ++k)
    std::printf("  lambda=2^-%-2d  d=%g\n", rep.exponents[k], rep.distances[k]);
  std::printf("  limit: %s\n", to_string(rep.limit_class.tag));
}

// Minimal library walkthrough: sweep the drive, print amplitude, effective
// linewidth and the squeezing contrast at the response peak.

#include <cstdio>

#include "tlsqle/tlsqle.hpp"

int main() {
  using namespace tlsqle;

  ModelParams p;
  p.kappa = 1.0;
  p.kappa_n = 1.5e-4;
  p.delta = 20.0;
  p.n_th = 1.0;
  p.n_th_tls = 1.0;

  std::printf("%10s %8s %12s %12s %12s\n", "alpha_in", "branch", "|alpha|", "kappa_eff",
              "contrast");
  for (double a : {100.0, 400.0, 700.0}) {
    for (HpBranch b : {HpBranch::Minus, HpBranch::Plus}) {
      ModelParams q = p;
      q.alpha_in = a;
      q.branch = b;
      const auto sol = solve_steady_state(q).front();
      const auto ex = spectrum_extrema(q, sol.alpha, -q.delta);
      const double contrast = (ex.s_max - ex.s_min) / (ex.s_max + ex.s_min);
      std::printf("%10.1f %8s %12.6f %12.6f %12.6f\n", a, branch_name(b), std::abs(sol.alpha),
                  effective_linewidth(q, sol.alpha), contrast);
    }
  }
  return 0;
}

// Builds and solves the quadruple bound for a small instance, then prints
// the pairwise LP bound next to it.

#include <cstdio>

#include "codebound/sdpa_io.hpp"
#include "codebound/solver.hpp"

int main() {
  using namespace codebound;
  int n = 6, d = 4;
  SdpProblem p = build_a4_problem(n, d);
  std::printf("A4(%d,%d): %d variables, %zu blocks\n", n, d, p.num_vars(), p.blocks.size());
  SolverOptions opt;
  opt.certify = true;
  SolveResult res = solve(p, opt);
  std::printf("A4(%d,%d) = %.6f (%s)\n", n, d, res.primal_value, to_string(res.status));
  if (res.certified_upper_bound) std::printf("certified <= %.6f\n", *res.certified_upper_bound);
  SolveResult lp = solve(build_delsarte_lp(n, d));
  std::printf("A2(%d,%d) = %.6f\n", n, d, lp.primal_value);
  return 0;
}

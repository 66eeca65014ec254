// Best rank-one approximation of a random 3x4x5 tensor, with its certificate.

#include <cstdio>

#include "rank1/rank1.hpp"

int main() {
  using namespace rank1;
  Rng rng(1);
  const Tensor t = rng.gaussian_tensor({3, 4, 5});

  SolverConfig cfg;
  cfg.restarts = 16;
  const SolveResult r = solve_general(t, cfg);
  const Certificate c = certify(t, r.approx);

  std::printf("||T||      %.6f\n", hs_norm(t));
  std::printf("value      %.12f\n", r.value);
  std::printf("residual   %.2e after %d sweeps\n", r.residual, r.iterations);
  std::printf("pythagoras %.2e\n", c.pythagoras_gap);
  std::printf("cert gap   %.2e\n", c.cert_gap);
  for (const auto& u : r.approx.factors) {
    for (double x : u.coords()) std::printf(" % .6f", x);
    std::printf("\n");
  }
}

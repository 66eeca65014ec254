// Critical points and eigenpair counts of binary symmetric forms: a random
// quintic, then the traceless cubic where three optima tie.

#include <cstdio>

#include "rank1/rank1.hpp"

namespace {

void show(const rank1::Tensor& t) {
  using namespace rank1;
  const auto pts = enumerate_critical_points(t);
  for (const auto& p : pts) std::printf("  phi %.6f  value % .9f\n", p.angle, p.value);
  const CensusReport c = eigenpair_census(t);
  std::printf("  complex %zu of %zu, real %zu, uniqueness gap %.2e\n", c.complex_count, c.bound_complex,
              c.real_count_pos, c.uniqueness_gap);
}

}  // namespace

int main() {
  using namespace rank1;
  Rng rng(3);
  std::printf("random quintic\n");
  show(rng.gaussian_symmetric(2, 5));

  std::printf("traceless cubic\n");
  const Tensor f = family_tensor({0.7, 1.0});
  show(f);
  if (auto p = detect_family(f)) std::printf("  theta %.6f scale %.6f\n", p->theta, p->scale);
}

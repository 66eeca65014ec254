#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rank1/critical.hpp"
#include "rank1/family.hpp"
#include "rank1/random.hpp"

namespace rank1 {
namespace {

constexpr double pi = std::numbers::pi;

Tensor diagonal_cube(std::size_t d) {
  Vector tau(d + 1, 0.0);
  tau[0] = tau[d] = 1.0;
  return symmetric_from_counts(d, tau);
}

Tensor e1_power(std::size_t d) {
  Vector tau(d + 1, 0.0);
  tau[0] = 1.0;
  return symmetric_from_counts(d, tau);
}

double min_distance(const std::vector<Complex>& x, const std::vector<std::array<Complex, 2>>& set) {
  double best = INFINITY;
  for (const auto& y : set) best = std::min(best, std::hypot(std::abs(x[0] - y[0]), std::abs(x[1] - y[1])));
  return best;
}

TEST(BinaryForm, RoundTripAndRejections) {
  Rng rng(3);
  const Tensor t = rng.gaussian_symmetric(2, 4);
  const BinaryForm f = BinaryForm::from_tensor(t);
  EXPECT_EQ(f.d, 4u);
  EXPECT_EQ(f.to_tensor(), t);
  EXPECT_NEAR(f.norm(), hs_norm(t), 1e-14);
  EXPECT_THROW(BinaryForm::from_tensor(rng.gaussian_tensor({2, 2, 2})), DomainError);
  EXPECT_THROW(BinaryForm::from_tensor(rng.gaussian_symmetric(3, 3)), DomainError);
}

TEST(BinaryForm, RotationPreservesNorm) {
  Rng rng(4);
  const BinaryForm f = BinaryForm::from_tensor(rng.gaussian_symmetric(2, 5));
  const BinaryForm g = f.rotated(0.7);
  EXPECT_NEAR(g.norm(), f.norm(), 1e-13);
  // g(y) = f(R^T y): value at angle phi equals f's value at phi - alpha.
  const TrigPolynomial pf = angle_objective(f), pg = angle_objective(g);
  for (double phi : {0.0, 0.3, 2.0, 4.5}) EXPECT_NEAR(pg.value(phi), pf.value(phi - 0.7), 1e-13);
}

TEST(AngleObjective, FamilyIsCos3) {
  const TrigPolynomial f = angle_objective(family_tensor({0.0, 1.0}));
  for (std::size_t m = 0; m <= 3; ++m) {
    EXPECT_NEAR(f.cos_coef[m], m == 3 ? 1.0 : 0.0, 1e-15);
    EXPECT_NEAR(f.sin_coef[m], 0.0, 1e-15);
  }
  for (int k = 0; k < 50; ++k) {
    const double phi = 0.13 * k;
    EXPECT_NEAR(f.value(phi), std::cos(3 * phi), 1e-14);
    EXPECT_NEAR(f.derivative(phi), -3 * std::sin(3 * phi), 1e-13);
  }
}

TEST(AngleObjective, BasisCube) {
  const TrigPolynomial f = angle_objective(e1_power(3));
  for (double phi : {0.0, 0.5, 1.7, 3.0}) EXPECT_NEAR(f.value(phi), std::pow(std::cos(phi), 3), 1e-15);
}

TEST(AngleObjective, MatchesDirectEvaluation) {
  Rng rng(5);
  for (std::size_t d : {3, 4, 5, 6}) {
    const Tensor t = rng.gaussian_symmetric(2, d);
    const TrigPolynomial f = angle_objective(t);
    for (int k = 0; k < 100; ++k) {
      const double phi = 2 * pi * k / 100.0 + 0.01;
      const double want = oracle::circle_value(t, phi);
      EXPECT_NEAR(f.value(phi), want, 1e-12);
      EXPECT_NEAR(f.fourier_value(phi), want, 1e-12);
      EXPECT_NEAR(f.derivative(phi), oracle::circle_derivative(t, phi), 1e-12);
    }
  }
}

TEST(AngleObjective, RejectsNonsymmetric) {
  Rng rng(6);
  EXPECT_THROW(angle_objective(rng.gaussian_tensor({2, 2, 2})), DomainError);
}

TEST(Enumerate, FamilySixPoints) {
  const auto pts = enumerate_critical_points(family_tensor({0.0, 1.0}));
  ASSERT_EQ(pts.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR(pts[k].angle, k * pi / 3, 1e-9);
    EXPECT_NEAR(pts[k].value, k % 2 == 0 ? 1.0 : -1.0, 1e-12);
    EXPECT_LE(pts[k].residual, 1e-9);
  }
}

TEST(Enumerate, DiagonalCube) {
  const auto pts = enumerate_critical_points(diagonal_cube(3));
  auto find = [&](double a) {
    for (const auto& p : pts) {
      if (angular_distance(p.angle, a) < 1e-9) return p.value;
    }
    return std::nan("");
  };
  EXPECT_NEAR(find(0.0), 1.0, 1e-12);
  EXPECT_NEAR(find(pi / 2), 1.0, 1e-12);
  EXPECT_NEAR(find(pi / 4), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(find(pi), -1.0, 1e-12);
}

TEST(Enumerate, SortedAndAtMostThreeClassesForCubics) {
  Rng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const auto pts = enumerate_critical_points(rng.gaussian_symmetric(2, 3));
    for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i - 1].angle, pts[i].angle);
    const auto g = genericity_check(pts, 3);
    EXPECT_LE(g.classes, 3u);
    EXPECT_EQ(pts.size(), 2 * g.classes);
  }
}

TEST(Enumerate, Degenerate) {
  EXPECT_THROW(enumerate_critical_points(Tensor::zeros({2, 2, 2})), DegenerateError);
  // <T, x^4> = (x1^2 + x2^2)^2 is constant on the circle.
  EXPECT_THROW(enumerate_critical_points(symmetric_from_counts(4, {1, 0, 1.0 / 3, 0, 1})), DegenerateError);
}

TEST(Enumerate, MatchesGridOracle) {
  Rng rng(8);
  for (std::size_t d : {3, 4, 5}) {
    for (int rep = 0; rep < 100; ++rep) {
      const Tensor t = rng.gaussian_symmetric(2, d);
      const auto pts = enumerate_critical_points(t);
      const auto grid = oracle::grid_critical_angles(t, 100000);
      for (double a : grid) {
        double best = INFINITY;
        for (const auto& p : pts) best = std::min(best, angular_distance(a, p.angle));
        EXPECT_LE(best, 1e-6) << "d=" << d << " rep=" << rep;
      }
      for (const auto& p : pts) {
        double best = INFINITY;
        for (double a : grid) best = std::min(best, angular_distance(a, p.angle));
        EXPECT_LE(best, 1e-6) << "d=" << d << " rep=" << rep;
        EXPECT_LE(p.residual, 1e-9);
        EXPECT_NEAR(p.value, oracle::circle_value(t, p.angle), 1e-12);
      }
    }
  }
}

TEST(Genericity, Examples) {
  const auto fam = genericity_check(enumerate_critical_points(family_tensor({0.0, 1.0})), 3);
  EXPECT_FALSE(fam.distinct_values);
  EXPECT_TRUE(fam.pairing_ok);
  EXPECT_NEAR(fam.uniqueness_gap, 0.0, 1e-12);
  const auto quartic = genericity_check(enumerate_critical_points(diagonal_cube(4)), 4);
  EXPECT_FALSE(quartic.distinct_values);
  EXPECT_TRUE(quartic.pairing_ok);
}

TEST(Genericity, RandomTensorsAreGeneric) {
  Rng rng(9);
  for (std::size_t d : {3, 4, 5}) {
    int distinct = 0;
    for (int rep = 0; rep < 100; ++rep) {
      const auto g = genericity_check(enumerate_critical_points(rng.gaussian_symmetric(2, d)), d);
      EXPECT_TRUE(g.pairing_ok);
      distinct += g.distinct_values;
    }
    EXPECT_GE(distinct, 98) << "d=" << d;
  }
}

TEST(SphereEigenpair, Examples) {
  const BinaryForm f = BinaryForm::from_tensor(diagonal_cube(3));
  const EigenpairSolution a = sphere_to_eigenpair(make_critical_point(f, 0.0), 3);
  EXPECT_NEAR(a.x[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(a.x[1]), 0.0, 1e-15);
  EXPECT_EQ(a.system_sign, 1);
  const EigenpairSolution b = sphere_to_eigenpair(make_critical_point(f, pi / 4), 3);
  EXPECT_NEAR(b.x[0].real(), 1.0, 1e-14);
  EXPECT_NEAR(b.x[1].real(), 1.0, 1e-14);
  const EigenpairSolution c = sphere_to_eigenpair(make_critical_point(f, pi), 3);
  EXPECT_EQ(c.system_sign, -1);
  const EigenpairSolution cp = to_positive_system(c, 3);
  EXPECT_NEAR(cp.x[0].real(), 1.0, 1e-15);
  EXPECT_EQ(cp.system_sign, 1);
  CriticalPoint zero = make_critical_point(f, 0.0);
  zero.value = 0.0;
  EXPECT_THROW(sphere_to_eigenpair(zero, 3), DegenerateError);
}

TEST(SphereEigenpair, RoundTrip) {
  Rng rng(10);
  for (std::size_t d : {3, 4, 5}) {
    for (int rep = 0; rep < 100; ++rep) {
      const BinaryForm f = BinaryForm::from_tensor(rng.gaussian_symmetric(2, d));
      for (const auto& p : enumerate_critical_points(f)) {
        const EigenpairSolution s = sphere_to_eigenpair(p, d);
        const Vector x = s.real_part();
        const auto g = f.contract_vec({x[0], x[1]});
        EXPECT_LE(std::hypot(g[0].real() - s.system_sign * x[0], g[1].real() - s.system_sign * x[1]),
                  1e-8 * std::max(1.0, norm2(x)));
        const CriticalPoint q = eigenpair_to_sphere(f, s);
        EXPECT_NEAR(q.angle, p.angle, 1e-10);
        EXPECT_NEAR(q.value, p.value, 1e-10 * std::max(1.0, std::abs(p.value)));
      }
    }
  }
}

TEST(Census, DiagonalCube) {
  const CensusReport r = eigenpair_census(diagonal_cube(3));
  EXPECT_TRUE(r.conclusive);
  EXPECT_EQ(r.complex_count, 3u);
  EXPECT_EQ(r.real_count_pos, 3u);
  EXPECT_EQ(r.bound_complex, 3u);
  EXPECT_EQ(r.bound_real, 3u);
  ASSERT_TRUE(r.bounds_satisfied.has_value());
  EXPECT_TRUE(*r.bounds_satisfied);
  const std::vector<std::array<Complex, 2>> want{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  for (const auto& s : r.solutions) EXPECT_LE(min_distance(s.x, want), 1e-10);
}

TEST(Census, Family) {
  const CensusReport r = eigenpair_census(family_tensor({0.0, 1.0}));
  EXPECT_TRUE(r.conclusive);
  EXPECT_EQ(r.complex_count, 3u);
  EXPECT_EQ(r.real_count_pos, 3u);
  EXPECT_FALSE(r.distinct_critical_values);
  EXPECT_TRUE(r.antipodal_pairing_ok);
  const double s3 = std::sqrt(3.0) / 2;
  const std::vector<std::array<Complex, 2>> want{{1.0, 0.0}, {-0.5, s3}, {-0.5, -s3}};
  for (const auto& s : r.solutions) EXPECT_LE(min_distance(s.x, want), 1e-10);
}

TEST(Census, GenericQuintic) {
  Rng rng(11);
  int full = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const CensusReport r = eigenpair_census(rng.gaussian_symmetric(2, 5));
    EXPECT_EQ(r.bound_complex, 15u);
    EXPECT_EQ(r.bound_real, 5u);
    EXPECT_LE(r.complex_count, 15u);
    if (r.conclusive) {
      EXPECT_LE(r.real_count_pos, 5u);
      EXPECT_TRUE(*r.bounds_satisfied);
      full += r.complex_count == 15;
    }
  }
  EXPECT_GE(full, 19);
}

TEST(Census, RealCountsMatchEnumeration) {
  Rng rng(12);
  for (std::size_t d : {3, 4, 5}) {
    for (int rep = 0; rep < 30; ++rep) {
      const Tensor t = rng.gaussian_symmetric(2, d);
      const CensusReport r = eigenpair_census(t);
      if (!r.conclusive) continue;
      std::size_t pos = 0, neg = 0;
      for (const auto& p : enumerate_critical_points(t)) (p.value > 0 ? pos : neg)++;
      if (d % 2 == 1) {
        // +-y are both critical; only one of each pair solves T x^{d-1} = x.
        EXPECT_EQ(r.real_count_pos, pos);
        EXPECT_EQ(r.real_count_neg, neg);
      } else {
        EXPECT_EQ(r.real_count_pos, pos);
        EXPECT_EQ(r.real_count_neg, neg);
        EXPECT_LE(r.real_count_pos + r.real_count_neg, r.bound_real);
      }
    }
  }
}

TEST(Census, MatchesDirectionOracle) {
  Rng rng(13);
  for (std::size_t d : {3, 4, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      const Tensor t = rng.gaussian_symmetric(2, d);
      const CensusReport r = eigenpair_census(t);
      ASSERT_TRUE(r.conclusive);
      for (int sign : {1, -1}) {
        if (sign < 0 && d % 2 == 1) continue;
        const auto want = oracle::direction_solutions(t, sign);
        std::size_t count = 0;
        for (const auto& s : r.solutions) {
          if (s.system_sign != sign) continue;
          ++count;
          const double scale = std::max(1.0, std::hypot(std::abs(s.x[0]), std::abs(s.x[1])));
          EXPECT_LE(min_distance(s.x, want), 1e-7 * scale) << "d=" << d;
        }
        EXPECT_EQ(count, want.size()) << "d=" << d;
      }
    }
  }
}

TEST(Census, RootsOfUnityOrbit) {
  Rng rng(14);
  for (std::size_t d : {4, 5, 6}) {
    const CensusReport r = eigenpair_census(rng.gaussian_symmetric(2, d));
    ASSERT_TRUE(r.conclusive);
    const std::size_t k = d - 2;
    std::vector<std::array<Complex, 2>> pos;
    for (const auto& s : r.solutions) {
      if (s.system_sign == 1) pos.push_back({s.x[0], s.x[1]});
    }
    for (const auto& x : pos) {
      for (std::size_t j = 1; j < k; ++j) {
        const Complex z = std::polar(1.0, 2 * pi * j / k);
        EXPECT_LE(min_distance({z * x[0], z * x[1]}, pos), 1e-8 * std::max(1.0, std::abs(x[0]) + std::abs(x[1])));
      }
    }
  }
}

TEST(Census, Rejections) {
  Rng rng(15);
  EXPECT_THROW(eigenpair_census(rng.gaussian_symmetric(2, 2)), DomainError);
  EXPECT_THROW(eigenpair_census(Tensor::zeros({2, 2, 2})), DegenerateError);
}

TEST(Sensitivity, ClosedFormFixture) {
  const Tensor t = diagonal_cube(3);
  const PerturbationCheck c = eigenpair_sensitivity(t, e1_power(3), EigenpairSolution::real({1, 0}));
  EXPECT_EQ(c.predicted_overlap, -1.0);
  EXPECT_NEAR(c.fd_overlap, -1.0, 1e-9);
  EXPECT_LE(c.rel_error, 1e-9);
}

TEST(Sensitivity, OrthogonalDirection) {
  const Tensor t = diagonal_cube(3);
  Vector tau(4, 0.0);
  tau[3] = 1.0;
  const PerturbationCheck c = eigenpair_sensitivity(t, symmetric_from_counts(3, tau), EigenpairSolution::real({1, 0}));
  EXPECT_EQ(c.predicted_overlap, 0.0);
  EXPECT_LE(std::abs(c.fd_overlap), 1e-8);
}

TEST(Sensitivity, RandomQuartics) {
  Rng rng(16);
  int checked = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const Tensor t = rng.gaussian_symmetric(2, 4);
    const Tensor s = rng.gaussian_symmetric(2, 4);
    for (const auto& sol : eigenpair_census(t).solutions) {
      if (sol.system_sign != 1 || !sol.is_real() || sol.multiple) continue;
      const PerturbationCheck c = eigenpair_sensitivity(t, s, sol);
      EXPECT_LE(c.rel_error, 1e-5);
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Sensitivity, Rejections) {
  const Tensor t = diagonal_cube(3);
  EXPECT_THROW(eigenpair_sensitivity(t, t, EigenpairSolution::real({0.5, 0})), DomainError);
  EXPECT_THROW(eigenpair_sensitivity(t, t, EigenpairSolution::real({1, 0}, -1)), DomainError);
  // T x^2 = x at x = e1 with (d-1) T x - I = diag(1, 0).
  const Tensor flat = symmetric_from_counts(3, {1, 0, 0.5, 0});
  EXPECT_THROW(eigenpair_sensitivity(flat, t, EigenpairSolution::real({1, 0})), DegenerateError);
}

}  // namespace
}  // namespace rank1

#ifndef RANK1_POLY_ROOTS_HPP
#define RANK1_POLY_ROOTS_HPP

// Complex roots of univariate polynomials as eigenvalues of the balanced
// companion matrix, followed by Newton polishing.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "rank1/error.hpp"

namespace rank1 {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Horner evaluation; coefficients ascending.
template <typename C, typename X>
auto poly_eval(std::span<const C> coeffs, X x) {
  using R = decltype(C{} * x);
  R acc{};
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

// Value and derivative.
inline std::pair<Complex, Complex> poly_eval_deriv(std::span<const Complex> coeffs, Complex x) {
  Complex p{}, dp{};
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    dp = dp * x + p;
    p = p * x + coeffs[i];
  }
  return {p, dp};
}

namespace detail {

// Parlett-Reinsch diagonal balancing with powers of two.
inline void balance(Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  bool changed = true;
  for (int pass = 0; changed && pass < 100; ++pass) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row += std::abs(m(i, j));
        col += std::abs(m(j, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent != 0) {
        const double f = std::ldexp(1.0, exponent);
        if ((col * f + row / f) < 0.95 * (col + row)) {
          m.col(i) *= f;
          m.row(i) /= f;
          changed = true;
        }
      }
    }
  }
}

}  // namespace detail

// Newton iterations on p starting at z; keeps the best iterate.
inline Complex polish_root(std::span<const Complex> coeffs, Complex z, int iters = 8) {
  Complex best = z;
  double best_abs = std::abs(poly_eval(coeffs, z));
  for (int k = 0; k < iters && best_abs > 0.0; ++k) {
    auto [p, dp] = poly_eval_deriv(coeffs, z);
    if (dp == Complex{}) break;
    z -= p / dp;
    const double a = std::abs(poly_eval(coeffs, z));
    if (!(a < best_abs)) break;
    best = z;
    best_abs = a;
  }
  return best;
}

// All complex roots of sum_k coeffs[k] x^k, with multiplicity. Leading
// coefficients below rel_tol * max|c| are treated as zero, which lowers the
// degree; the count of returned roots is the effective degree.
inline ComplexVector polynomial_roots(std::span<const Complex> coeffs, double rel_tol = 1e-14) {
  double cmax = 0.0;
  for (const auto& c : coeffs) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) throw DegenerateError("polynomial_roots: zero polynomial");
  std::size_t hi = coeffs.size();
  while (hi > 0 && std::abs(coeffs[hi - 1]) <= rel_tol * cmax) --hi;
  std::size_t lo = 0;
  while (lo < hi && coeffs[lo] == Complex{}) ++lo;
  ComplexVector roots(lo, Complex{});
  const std::size_t degree = hi - 1 - lo;
  if (degree == 0) return roots;
  std::span<const Complex> core = coeffs.subspan(lo, hi - lo);
  const Complex lead = core[degree];
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(degree, degree);
  for (std::size_t i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < degree; ++i) comp(i, degree - 1) = -core[i] / lead;
  detail::balance(comp);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) {
    throw DegenerateError("polynomial_roots: companion eigenvalue iteration failed");
  }
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    roots.push_back(polish_root(core, solver.eigenvalues()[i]));
  }
  return roots;
}

inline ComplexVector polynomial_roots(std::span<const double> coeffs, double rel_tol = 1e-14) {
  ComplexVector c(coeffs.begin(), coeffs.end());
  return polynomial_roots(std::span<const Complex>(c), rel_tol);
}

}  // namespace rank1

#endif  // RANK1_POLY_ROOTS_HPP

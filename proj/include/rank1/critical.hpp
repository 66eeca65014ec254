#ifndef RANK1_CRITICAL_HPP
#define RANK1_CRITICAL_HPP

// Complete critical-point and eigenpair enumeration for symmetric tensors
// over R^2.
//
// On the circle x(phi) = (cos phi, sin phi) the objective <T, x^d> is a
// trigonometric polynomial of frequency <= d, so its critical angles are
// the unit-modulus roots of a degree-2d polynomial in z = exp(i phi).
//
// The eigensystem T x^{d-1} = x over C^2 is solved by eliminating x_2 with
// a Sylvester resultant (in a generically rotated frame), finding the
// roots of the resultant, back-substituting and polishing with Newton's
// method in C^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "rank1/matrix.hpp"
#include "rank1/poly_roots.hpp"
#include "rank1/tensor.hpp"

namespace rank1 {

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// A symmetric tensor in Sym(2, d) is determined by d+1 numbers: tau[k] is
// the entry whose index has k coordinates equal to the second basis vector.
struct BinaryForm {
  std::size_t d = 0;
  Vector tau;

  static BinaryForm from_tensor(const Tensor& t, double rel_tol = 1e-12) {
    if (t.order() < 1 || !t.is_cubical() || t.extent(0) != 2) {
      throw DomainError("expected a symmetric tensor over R^2");
    }
    if (!is_symmetric(t, rel_tol * hs_norm(t))) throw DomainError("tensor is not symmetric");
    BinaryForm f;
    f.d = t.order();
    for (std::size_t k = 0; k <= f.d; ++k) {
      MultiIndex idx(f.d, 0);
      for (std::size_t i = f.d - k; i < f.d; ++i) idx[i] = 1;
      f.tau.push_back(t(idx));
    }
    return f;
  }

  Tensor to_tensor() const { return symmetric_from_counts(d, tau); }

  // (T x^{d-1})_i for complex x.
  std::array<Complex, 2> contract_vec(const std::array<Complex, 2>& x) const {
    std::array<Complex, 2> g{};
    const std::size_t m = d - 1;
    for (std::size_t k = 0; k <= m; ++k) {
      const Complex mono = binomial(m, k) * std::pow(x[0], static_cast<int>(m - k)) *
                           std::pow(x[1], static_cast<int>(k));
      g[0] += tau[k] * mono;
      g[1] += tau[k + 1] * mono;
    }
    return g;
  }

  // T x^{d-2}, a symmetric 2x2 matrix.
  std::array<std::array<Complex, 2>, 2> contract_mat(const std::array<Complex, 2>& x) const {
    std::array<std::array<Complex, 2>, 2> a{};
    const std::size_t m = d - 2;
    for (std::size_t k = 0; k <= m; ++k) {
      const Complex mono = binomial(m, k) * std::pow(x[0], static_cast<int>(m - k)) *
                           std::pow(x[1], static_cast<int>(k));
      a[0][0] += tau[k] * mono;
      a[0][1] += tau[k + 1] * mono;
      a[1][1] += tau[k + 2] * mono;
    }
    a[1][0] = a[0][1];
    return a;
  }

  double norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k <= d; ++k) s += binomial(d, k) * tau[k] * tau[k];
    return std::sqrt(s);
  }

  // The form of T transformed by the rotation y = R(alpha) x.
  BinaryForm rotated(double alpha) const {
    const Tensor t = to_tensor();
    const Vector r0{std::cos(alpha), -std::sin(alpha)};
    const Vector r1{std::sin(alpha), std::cos(alpha)};
    BinaryForm out{d, Vector(d + 1)};
    for (std::size_t k = 0; k <= d; ++k) {
      std::vector<Vector> xs(d, r0);
      for (std::size_t i = d - k; i < d; ++i) xs[i] = r1;
      out.tau[k] = multilinear(t, xs);
    }
    return out;
  }
};

// f(phi) = <T, x(phi)^d> for T in Sym(2, d), kept both as
// sum_k monomial[k] cos^{d-k} sin^k and as a Fourier series
// cos_coef[0] + sum_m (cos_coef[m] cos m phi + sin_coef[m] sin m phi).
struct TrigPolynomial {
  std::size_t d = 0;
  Vector monomial;
  Vector cos_coef;
  Vector sin_coef;

  double value(double phi) const {
    const double c = std::cos(phi), s = std::sin(phi);
    double v = 0.0;
    for (std::size_t k = 0; k <= d; ++k) {
      v += monomial[k] * std::pow(c, static_cast<double>(d - k)) * std::pow(s, static_cast<double>(k));
    }
    return v;
  }
  // k-th derivative from the Fourier form.
  double derivative(double phi, int order = 1) const {
    double v = order == 0 ? cos_coef[0] : 0.0;
    for (std::size_t m = 1; m <= d; ++m) {
      const double w = static_cast<double>(m);
      const double scale = std::pow(w, order);
      // d^k/dphi^k of cos(w phi) = w^k cos(w phi + k pi/2)
      const double shift = order * std::numbers::pi / 2.0;
      v += scale * (cos_coef[m] * std::cos(w * phi + shift) + sin_coef[m] * std::sin(w * phi + shift));
    }
    return v;
  }
  double fourier_value(double phi) const { return derivative(phi, 0); }
};

inline TrigPolynomial angle_objective(const BinaryForm& form) {
  TrigPolynomial f;
  f.d = form.d;
  for (std::size_t k = 0; k <= form.d; ++k) f.monomial.push_back(binomial(form.d, k) * form.tau[k]);
  // A DFT on N > 2d samples recovers the Fourier coefficients exactly.
  const std::size_t n = 4 * (form.d + 1);
  f.cos_coef.assign(form.d + 1, 0.0);
  f.sin_coef.assign(form.d + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    const double v = f.value(phi);
    f.cos_coef[0] += v / static_cast<double>(n);
    for (std::size_t m = 1; m <= form.d; ++m) {
      f.cos_coef[m] += 2.0 * v * std::cos(static_cast<double>(m) * phi) / static_cast<double>(n);
      f.sin_coef[m] += 2.0 * v * std::sin(static_cast<double>(m) * phi) / static_cast<double>(n);
    }
  }
  return f;
}

inline TrigPolynomial angle_objective(const Tensor& t) {
  return angle_objective(BinaryForm::from_tensor(t));
}

struct CriticalPoint {
  UnitVector point;
  double value;     // <T, point^d>
  double angle;     // in [0, 2 pi)
  double residual;  // || T point^{d-1} - value point ||
};

inline double wrap_angle(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  if (phi < 0) phi += two_pi;
  if (phi >= two_pi) phi -= two_pi;
  return phi;
}

inline double angular_distance(double a, double b) {
  const double diff = std::abs(wrap_angle(a - b));
  return std::min(diff, 2.0 * std::numbers::pi - diff);
}

inline CriticalPoint make_critical_point(const BinaryForm& form, double phi) {
  phi = wrap_angle(phi);
  const std::array<Complex, 2> x{std::cos(phi), std::sin(phi)};
  const auto g = form.contract_vec(x);
  const double lambda = g[0].real() * x[0].real() + g[1].real() * x[1].real();
  const double r0 = g[0].real() - lambda * x[0].real();
  const double r1 = g[1].real() - lambda * x[1].real();
  return {UnitVector::normalized({x[0].real(), x[1].real()}), lambda, phi, std::hypot(r0, r1)};
}

struct EnumerationOptions {
  double unit_circle_tol = 1e-8;
  double dedupe_tol = 1e-9;
};

// Every critical point of <T, x^d> on the unit circle, sorted by angle.
inline std::vector<CriticalPoint> enumerate_critical_points(const BinaryForm& form,
                                                            EnumerationOptions opts = {}) {
  const std::size_t d = form.d;
  const TrigPolynomial f = angle_objective(form);
  double fmax = 0.0, dmax = 0.0;
  for (std::size_t m = 0; m <= d; ++m) {
    fmax = std::max({fmax, std::abs(f.cos_coef[m]), std::abs(f.sin_coef[m])});
    if (m > 0) dmax = std::max({dmax, std::abs(f.cos_coef[m]), std::abs(f.sin_coef[m])});
  }
  if (fmax == 0.0) throw DegenerateError("enumerate_critical_points: objective vanishes identically");
  if (dmax <= 1e-14 * fmax) throw DegenerateError("enumerate_critical_points: objective is constant on the circle");

  // z^d f'(phi) with z = exp(i phi): the coefficient of z^{d+m} is
  // m (b_m + i a_m) / 2 and that of z^{d-m} is m (b_m - i a_m) / 2.
  ComplexVector p(2 * d + 1, Complex{});
  for (std::size_t m = 1; m <= d; ++m) {
    const double w = static_cast<double>(m);
    p[d + m] = w * Complex(f.sin_coef[m], f.cos_coef[m]) / 2.0;
    p[d - m] = w * Complex(f.sin_coef[m], -f.cos_coef[m]) / 2.0;
  }
  const ComplexVector roots = polynomial_roots(std::span<const Complex>(p));

  std::vector<double> angles;
  for (const Complex& z : roots) {
    if (std::abs(std::abs(z) - 1.0) > opts.unit_circle_tol) continue;
    double phi = std::arg(z);
    // Newton on f' along the circle.
    double best = std::abs(f.derivative(phi, 1));
    for (int k = 0; k < 8 && best > 0.0; ++k) {
      const double f2 = f.derivative(phi, 2);
      if (f2 == 0.0) break;
      const double next = phi - f.derivative(phi, 1) / f2;
      const double val = std::abs(f.derivative(next, 1));
      if (!(val < best)) break;
      phi = next;
      best = val;
    }
    angles.push_back(wrap_angle(phi));
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> unique;
  for (double a : angles) {
    if (unique.empty() || angular_distance(a, unique.back()) > opts.dedupe_tol) unique.push_back(a);
  }
  if (unique.size() > 1 && angular_distance(unique.front(), unique.back()) <= opts.dedupe_tol) {
    unique.pop_back();
  }
  std::vector<CriticalPoint> out;
  for (double a : unique) out.push_back(make_critical_point(form, a));
  return out;
}

inline std::vector<CriticalPoint> enumerate_critical_points(const Tensor& t, EnumerationOptions opts = {}) {
  return enumerate_critical_points(BinaryForm::from_tensor(t), opts);
}

struct GenericityReport {
  bool distinct_values = false;  // nonzero |values| distinct across antipodal classes
  bool pairing_ok = false;       // every point has its antipode with the expected value
  double uniqueness_gap = 0.0;   // largest |value| minus the second largest, over classes
  std::size_t classes = 0;       // number of antipodal pairs
};

// Checks the structure of a complete enumeration: points come in antipodal
// pairs +-x, with values -l / l for odd d and l / l for even d, and the
// nonzero |values| of different pairs are pairwise distinct.
inline GenericityReport genericity_check(const std::vector<CriticalPoint>& points, std::size_t d,
                                         double tol = 1e-9) {
  GenericityReport rep;
  const bool odd = d % 2 == 1;
  double vmax = 0.0;
  for (const auto& p : points) vmax = std::max(vmax, std::abs(p.value));
  const double vtol = tol * std::max(1.0, vmax);
  rep.pairing_ok = !points.empty();
  for (const auto& p : points) {
    const auto it = std::find_if(points.begin(), points.end(), [&](const CriticalPoint& q) {
      return angular_distance(q.angle, p.angle + std::numbers::pi) <= 1e-7 &&
             std::abs(q.value - (odd ? -p.value : p.value)) <= vtol;
    });
    if (it == points.end()) rep.pairing_ok = false;
  }
  std::vector<double> mags;
  for (const auto& p : points) {
    if (p.angle < std::numbers::pi - 1e-7) mags.push_back(std::abs(p.value));
  }
  rep.classes = mags.size();
  std::sort(mags.rbegin(), mags.rend());
  rep.distinct_values = rep.pairing_ok && !mags.empty();
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (mags[i] <= vtol) rep.distinct_values = false;
    if (i + 1 < mags.size() && mags[i] - mags[i + 1] <= vtol) rep.distinct_values = false;
  }
  if (!mags.empty()) rep.uniqueness_gap = mags[0] - (mags.size() > 1 ? mags[1] : 0.0);
  return rep;
}

// A solution of T x^{d-1} = system_sign * x, x != 0.
struct EigenpairSolution {
  ComplexVector x;
  int system_sign = 1;
  bool multiple = false;  // Jacobian (d-1) T x^{d-2} - sign I singular
  double residual = 0.0;

  bool is_real(double tol = 1e-8) const {
    double n = 0.0, im = 0.0;
    for (const auto& c : x) {
      n += std::norm(c);
      im = std::max(im, std::abs(c.imag()));
    }
    return im <= tol * std::max(1.0, std::sqrt(n));
  }
  Vector real_part() const {
    Vector r;
    for (const auto& c : x) r.push_back(c.real());
    return r;
  }
  static EigenpairSolution real(const Vector& v, int sign = 1) {
    EigenpairSolution s;
    for (double c : v) s.x.emplace_back(c, 0.0);
    s.system_sign = sign;
    return s;
  }
};

// Critical point (y, l), l != 0, to the eigensystem solution
// x = |l|^{-1/(d-2)} y of T x^{d-1} = sign(l) x. For odd d the negative
// system's solutions are exactly the negatives of the positive system's.
inline EigenpairSolution sphere_to_eigenpair(const CriticalPoint& p, std::size_t d) {
  if (d < 3) throw DomainError("sphere_to_eigenpair: needs d >= 3");
  if (p.value == 0.0) throw DegenerateError("sphere_to_eigenpair: zero critical value");
  const double r = std::pow(std::abs(p.value), -1.0 / static_cast<double>(d - 2));
  Vector x = p.point.coords();
  for (double& c : x) c *= r;
  auto s = EigenpairSolution::real(x, p.value > 0 ? 1 : -1);
  s.residual = p.residual * std::pow(r, static_cast<double>(d - 1));
  return s;
}

// Inverse map: y = x / ||x||, l = sign * ||x||^{-(d-2)}.
inline CriticalPoint eigenpair_to_sphere(const BinaryForm& form, const EigenpairSolution& s) {
  if (!s.is_real()) throw DomainError("eigenpair_to_sphere: complex solution");
  const Vector x = s.real_part();
  const double n = norm2(x);
  if (!(n > 0.0)) throw DegenerateError("eigenpair_to_sphere: zero solution");
  const double lambda = s.system_sign * std::pow(n, -static_cast<double>(form.d - 2));
  CriticalPoint p = make_critical_point(form, std::atan2(x[1], x[0]));
  const auto g = form.contract_vec({p.point[0], p.point[1]});
  p.value = lambda;
  p.residual = std::hypot(g[0].real() - lambda * p.point[0], g[1].real() - lambda * p.point[1]);
  return p;
}

// For odd d: the positive-system solution -x equivalent to a negative-system x.
inline EigenpairSolution to_positive_system(const EigenpairSolution& s, std::size_t d) {
  if (s.system_sign > 0) return s;
  if (d % 2 == 0) throw DomainError("to_positive_system: only odd d maps between systems");
  EigenpairSolution out = s;
  for (auto& c : out.x) c = -c;
  out.system_sign = 1;
  return out;
}

namespace detail {

using C2 = std::array<Complex, 2>;

inline double c2_norm(const C2& x) { return std::sqrt(std::norm(x[0]) + std::norm(x[1])); }

// F(x) = T x^{d-1} - x.
inline C2 eig_residual(const BinaryForm& f, const C2& x) {
  auto g = f.contract_vec(x);
  return {g[0] - x[0], g[1] - x[1]};
}

// Newton's method for T x^{d-1} = x in C^2.
inline C2 newton_c2(const BinaryForm& f, C2 x, int iters = 60) {
  const double m = static_cast<double>(f.d - 1);
  double best = c2_norm(eig_residual(f, x));
  for (int k = 0; k < iters && best > 0.0; ++k) {
    const C2 r = eig_residual(f, x);
    auto a = f.contract_mat(x);
    const Complex j00 = m * a[0][0] - 1.0, j01 = m * a[0][1];
    const Complex j10 = m * a[1][0], j11 = m * a[1][1] - 1.0;
    const Complex det = j00 * j11 - j01 * j10;
    if (det == Complex{}) break;
    const C2 step{(j11 * r[0] - j01 * r[1]) / det, (-j10 * r[0] + j00 * r[1]) / det};
    const C2 next{x[0] - step[0], x[1] - step[1]};
    const double val = c2_norm(eig_residual(f, next));
    if (!(val < best)) {
      if (!(val <= best * 1.0000001)) break;
    }
    x = next;
    best = std::min(best, val);
    if (c2_norm(step) <= 1e-16 * std::max(1.0, c2_norm(x))) break;
  }
  return x;
}

inline Complex jacobian_det(const BinaryForm& f, const C2& x) {
  const double m = static_cast<double>(f.d - 1);
  auto a = f.contract_mat(x);
  return (m * a[0][0] - 1.0) * (m * a[1][1] - 1.0) - m * a[0][1] * m * a[1][0];
}

struct UnitSystemSolve {
  std::vector<C2> solutions;
  bool conclusive = false;
  double leading_coefficient = 0.0;  // |lead| / max |coef| of the resultant
};

// Nonzero complex solutions of T x^{d-1} = x for ||T|| = 1.
inline UnitSystemSolve solve_unit_system(const BinaryForm& f) {
  const std::size_t d = f.d;
  const std::size_t deg = (d - 1) * (d - 1);
  const std::size_t expected = deg - 1;
  UnitSystemSolve best;
  for (double alpha : {0.4137, 1.0291, 2.3417, 0.9087}) {
    const BinaryForm g = f.rotated(alpha);
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    // p(y1, y2) and q(y1, y2) as polynomials in y2 for fixed y1.
    auto coeffs = [&](Complex y1) {
      std::vector<Complex> p(d), q(d);
      for (std::size_t k = 0; k < d; ++k) {
        const Complex mono = binomial(d - 1, k) * std::pow(y1, static_cast<int>(d - 1 - k));
        p[k] = g.tau[k] * mono;
        q[k] = g.tau[k + 1] * mono;
      }
      p[0] -= y1;
      q[1] -= 1.0;
      return std::pair{p, q};
    };
    // Resultant in y1 by evaluation on a circle and an inverse DFT.
    const std::size_t n = deg + 4;
    std::vector<Complex> values(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex y1 = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
      auto [p, q] = coeffs(y1);
      values[j] = sylvester_resultant(p, q);
    }
    std::vector<Complex> res(n);
    double cmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex s{};
      for (std::size_t j = 0; j < n; ++j) {
        s += values[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j * k % n) / static_cast<double>(n));
      }
      res[k] = s / static_cast<double>(n);
      cmax = std::max(cmax, std::abs(res[k]));
    }
    UnitSystemSolve attempt;
    if (cmax == 0.0) continue;
    attempt.leading_coefficient = std::abs(res[deg]) / cmax;
    double spill = 0.0;
    for (std::size_t k = deg + 1; k < n; ++k) spill = std::max(spill, std::abs(res[k]) / cmax);
    res.resize(deg + 1);
    const bool degree_ok = attempt.leading_coefficient > 1e-10 && spill < 1e-8;
    ComplexVector roots;
    try {
      roots = polynomial_roots(std::span<const Complex>(res), 1e-12);
    } catch (const DegenerateError&) {
      continue;
    }
    bool all_converged = true;
    for (const Complex& y1 : roots) {
      auto [p, q] = coeffs(y1);
      ComplexVector y2s;
      try {
        y2s = polynomial_roots(std::span<const Complex>(p));
      } catch (const DegenerateError&) {
        y2s = {Complex{}};
      }
      if (y2s.empty()) y2s = {Complex{}};
      Complex y2 = y2s.front();
      double qbest = std::abs(poly_eval(std::span<const Complex>(q), y2));
      for (const Complex& c : y2s) {
        const double v = std::abs(poly_eval(std::span<const Complex>(q), c));
        if (v < qbest) {
          qbest = v;
          y2 = c;
        }
      }
      // Back to the original frame: x = R^T y.
      C2 x{ca * y1 + sa * y2, -sa * y1 + ca * y2};
      x = newton_c2(f, x);
      const double nx = c2_norm(x);
      if (nx <= 1e-6) continue;  // the trivial solution
      if (c2_norm(eig_residual(f, x)) > 1e-9 * std::max(1.0, nx)) {
        all_converged = false;
        continue;
      }
      const bool dup = std::any_of(attempt.solutions.begin(), attempt.solutions.end(), [&](const C2& s) {
        return c2_norm({s[0] - x[0], s[1] - x[1]}) <= 1e-7 * std::max(1.0, nx);
      });
      if (!dup) attempt.solutions.push_back(x);
    }
    attempt.conclusive = degree_ok && all_converged && attempt.solutions.size() == expected;
    if (attempt.conclusive) return attempt;
    if (best.solutions.size() < attempt.solutions.size() || best.solutions.empty()) best = attempt;
  }
  best.conclusive = false;
  return best;
}

}  // namespace detail

struct CensusReport {
  std::size_t d = 0;
  std::size_t n = 2;
  std::size_t complex_count = 0;      // solutions of T x^{d-1} = x
  std::size_t complex_count_neg = 0;  // solutions of T x^{d-1} = -x
  std::size_t real_count_pos = 0;
  std::size_t real_count_neg = 0;
  std::size_t bound_complex = 0;      // (d-1)^n - 1
  std::size_t bound_real = 0;         // odd d: per system; even d: both systems jointly
  bool conclusive = false;
  std::optional<bool> bounds_satisfied;  // unknown when inconclusive
  bool distinct_critical_values = false;
  bool antipodal_pairing_ok = false;
  double uniqueness_gap = 0.0;
  std::vector<EigenpairSolution> solutions;  // both systems
};

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Counts complex and real solutions of T x^{d-1} = +-x (n = 2) and
// compares them to (d-1)^n - 1 and the real bounds.
inline CensusReport eigenpair_census(const BinaryForm& form) {
  const std::size_t d = form.d;
  if (d < 3) throw DomainError("eigenpair_census: needs d >= 3");
  const double c = form.norm();
  if (c == 0.0) throw DegenerateError("eigenpair_census: zero tensor");
  CensusReport rep;
  rep.d = d;
  rep.bound_complex = ipow(d - 1, 2) - 1;
  rep.bound_real = (d % 2 == 1) ? rep.bound_complex / (d - 2) : 2 * rep.bound_complex / (d - 2);
  rep.conclusive = true;

  const double back = std::pow(c, -1.0 / static_cast<double>(d - 2));
  const std::vector<int> signs = d % 2 == 1 ? std::vector<int>{1} : std::vector<int>{1, -1};
  for (int sign : signs) {
    BinaryForm unit{d, form.tau};
    for (double& v : unit.tau) v *= sign / c;
    const auto solved = detail::solve_unit_system(unit);
    rep.conclusive = rep.conclusive && solved.conclusive;
    for (const auto& xs : solved.solutions) {
      EigenpairSolution s;
      s.system_sign = sign;
      s.x = {xs[0] * back, xs[1] * back};
      s.multiple = std::abs(detail::jacobian_det(unit, xs)) <= 1e-8;
      const auto g = form.contract_vec({s.x[0], s.x[1]});
      s.residual = std::hypot(std::abs(g[0] - double(sign) * s.x[0]), std::abs(g[1] - double(sign) * s.x[1]));
      if (s.is_real()) {
        for (auto& v : s.x) v = Complex(v.real(), 0.0);
        (sign > 0 ? rep.real_count_pos : rep.real_count_neg)++;
      }
      (sign > 0 ? rep.complex_count : rep.complex_count_neg)++;
      rep.solutions.push_back(std::move(s));
    }
  }
  if (d % 2 == 1) {
    // Solutions of the negative system are the negatives of these.
    rep.complex_count_neg = rep.complex_count;
    rep.real_count_neg = rep.real_count_pos;
  }
  if (rep.conclusive) {
    const bool complex_ok = rep.complex_count <= rep.bound_complex && rep.complex_count_neg <= rep.bound_complex;
    const bool real_ok = d % 2 == 1 ? rep.real_count_pos <= rep.bound_real
                                     : rep.real_count_pos + rep.real_count_neg <= rep.bound_real;
    rep.bounds_satisfied = complex_ok && real_ok;
  }
  try {
    const auto points = enumerate_critical_points(form);
    const auto g = genericity_check(points, d);
    rep.distinct_critical_values = g.distinct_values;
    rep.antipodal_pairing_ok = g.pairing_ok;
    rep.uniqueness_gap = g.uniqueness_gap;
  } catch (const DegenerateError&) {
    rep.distinct_critical_values = false;
    rep.antipodal_pairing_ok = false;
  }
  return rep;
}

inline CensusReport eigenpair_census(const Tensor& t) { return eigenpair_census(BinaryForm::from_tensor(t)); }

// First-order change of a simple eigenpair of T x^{d-1} = x under T + eps S.
struct PerturbationCheck {
  Tensor direction;
  EigenpairSolution base;
  double predicted_overlap = 0.0;  // x^T x_1 = <S, x^d> / (2 - d)
  double fd_overlap = 0.0;         // x^T (x(eps) - x(-eps)) / (2 eps)
  double rel_error = 0.0;          // |predicted - fd| / max(1, |predicted|)
};

namespace detail {

// (T x^{d-1}, T x^{d-2}) for real x of any dimension.
inline std::pair<Vector, Matrix> real_contractions(const Tensor& t, const Vector& x) {
  const std::size_t d = t.order();
  std::vector<Vector> xs(d, x);
  Vector g = contract_all_but(t, xs, 0);
  Assignment as;
  for (std::size_t m = 2; m < d; ++m) as.emplace_back(m, x);
  return {std::move(g), to_matrix(contract(t, as))};
}

inline Vector solve_linear(Matrix a, Vector b) {
  const std::size_t n = a.rows;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    }
    if (a(piv, k) == 0.0) throw DegenerateError("singular linear system");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

inline double eig_residual_real(const Tensor& t, const Vector& x) {
  auto [g, a] = real_contractions(t, x);
  for (std::size_t i = 0; i < x.size(); ++i) g[i] -= x[i];
  return norm2(g);
}

// Newton's method for T x^{d-1} = x from a real start.
inline Vector newton_real(const Tensor& t, Vector x, double tol) {
  const double m = static_cast<double>(t.order() - 1);
  for (int k = 0; k < 50; ++k) {
    auto [g, a] = real_contractions(t, x);
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = -(g[i] - x[i]);
    if (norm2(r) == 0.0) break;
    Matrix j = a;
    for (auto& v : j.a) v *= m;
    for (std::size_t i = 0; i < x.size(); ++i) j(i, i) -= 1.0;
    const Vector step = solve_linear(std::move(j), std::move(r));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += step[i];
    if (norm2(step) <= 1e-15 * std::max(1.0, norm2(x))) break;
  }
  if (eig_residual_real(t, x) <= tol * std::max(1.0, norm2(x))) return x;
  throw DegenerateError("Newton continuation did not converge");
}

}  // namespace detail

// Compares x^T x_1 = <S, x^d> / (2 - d) with central differences of the
// continued solution of (T + eps S) x^{d-1} = x.
inline PerturbationCheck eigenpair_sensitivity(const Tensor& t, const Tensor& s, const EigenpairSolution& base,
                                               double eps = 1e-6) {
  const std::size_t d = t.order();
  if (d < 3) throw DomainError("eigenpair_sensitivity: needs d >= 3");
  if (s.shape() != t.shape()) throw DimensionError("eigenpair_sensitivity: shape mismatch");
  if (base.system_sign != 1 || !base.is_real()) {
    throw DomainError("eigenpair_sensitivity: needs a real solution of T x^{d-1} = x");
  }
  const Vector x = base.real_part();
  if (x.size() != t.extent(0)) throw DimensionError("eigenpair_sensitivity: length mismatch");
  if (detail::eig_residual_real(t, x) > 1e-8 * std::max(1.0, norm2(x))) {
    throw DomainError("eigenpair_sensitivity: x does not solve the eigensystem");
  }
  {
    auto [g, a] = detail::real_contractions(t, x);
    Matrix j = a;
    for (auto& v : j.a) v *= static_cast<double>(d - 1);
    for (std::size_t i = 0; i < x.size(); ++i) j(i, i) -= 1.0;
    if (std::abs(determinant(j)) <= 1e-10) throw DegenerateError("eigenpair_sensitivity: eigenpair is not simple");
  }
  PerturbationCheck out{s, base, 0.0, 0.0, 0.0};
  out.predicted_overlap = multilinear(s, std::vector<Vector>(d, x)) / (2.0 - static_cast<double>(d));
  const Vector xp = detail::newton_real(t + eps * s, x, 1e-12);
  const Vector xm = detail::newton_real(t - eps * s, x, 1e-12);
  double ov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ov += x[i] * (xp[i] - xm[i]);
  out.fd_overlap = ov / (2.0 * eps);
  out.rel_error = std::abs(out.predicted_overlap - out.fd_overlap) / std::max(1.0, std::abs(out.predicted_overlap));
  return out;
}

}  // namespace rank1

#endif  // RANK1_CRITICAL_HPP

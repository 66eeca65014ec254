#ifndef RANK1_TESTS_ORACLES_HPP
#define RANK1_TESTS_ORACLES_HPP

// Independent reference computations used only by the tests. Nothing here
// calls into the contraction, root-finding or enumeration code it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "rank1/tensor.hpp"

namespace rank1::oracle {

// Calls f(index, value) for every entry, by explicit recursion over modes.
inline void for_each_entry(const Tensor& t, const std::function<void(const MultiIndex&, double)>& f) {
  MultiIndex idx(t.order(), 0);
  std::size_t flat = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t m) {
    if (m == t.order()) {
      f(idx, t.values()[flat++]);
      return;
    }
    for (std::size_t i = 0; i < t.extent(m); ++i) {
      idx[m] = i;
      rec(m + 1);
    }
  };
  rec(0);
}

inline double naive_sum_squares(const Tensor& t) {
  double s = 0.0;
  for_each_entry(t, [&](const MultiIndex&, double v) { s += v * v; });
  return s;
}

// <T, x_1 (x) ... (x) x_d> by direct summation.
inline double naive_form(const Tensor& t, const std::vector<Vector>& xs) {
  double s = 0.0;
  for_each_entry(t, [&](const MultiIndex& idx, double v) {
    double p = v;
    for (std::size_t m = 0; m < idx.size(); ++m) p *= xs[m][idx[m]];
    s += p;
  });
  return s;
}

inline std::vector<std::vector<double>> outer(const Vector& a, const Vector& b) {
  std::vector<std::vector<double>> m(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) m[i][j] = a[i] * b[j];
  }
  return m;
}

// Contraction of a 3-mode tensor along `mode` with x, as nested loops.
inline std::vector<std::vector<double>> naive_contract3(const Tensor& t, std::size_t mode, const Vector& x) {
  const std::size_t n0 = t.extent(0), n1 = t.extent(1), n2 = t.extent(2);
  const std::size_t r = mode == 0 ? n1 : n0;
  const std::size_t c = mode == 2 ? n1 : n2;
  std::vector<std::vector<double>> out(r, std::vector<double>(c, 0.0));
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      for (std::size_t k = 0; k < n2; ++k) {
        const double v = t.at({i, j, k});
        if (mode == 0) out[j][k] += v * x[i];
        if (mode == 1) out[i][k] += v * x[j];
        if (mode == 2) out[i][j] += v * x[k];
      }
    }
  }
  return out;
}

// Vector T x_{j != mode} x_j by direct summation.
inline Vector naive_contract_all_but(const Tensor& t, const std::vector<Vector>& xs, std::size_t mode) {
  Vector out(t.extent(mode), 0.0);
  for_each_entry(t, [&](const MultiIndex& idx, double v) {
    double p = v;
    for (std::size_t m = 0; m < idx.size(); ++m) {
      if (m != mode) p *= xs[m][idx[m]];
    }
    out[idx[mode]] += p;
  });
  return out;
}

// f(phi) = <T, x(phi)^d> and f'(phi) = d <T, x' (x) x^{d-1}> by summation.
inline double circle_value(const Tensor& t, double phi) {
  return naive_form(t, std::vector<Vector>(t.order(), Vector{std::cos(phi), std::sin(phi)}));
}
inline double circle_derivative(const Tensor& t, double phi) {
  std::vector<Vector> xs(t.order(), Vector{std::cos(phi), std::sin(phi)});
  xs[0] = {-std::sin(phi), std::cos(phi)};
  return static_cast<double>(t.order()) * naive_form(t, xs);
}

// c[k] = sum of the entries with exactly k indices equal to 2, so that
// f(phi) = sum_k c[k] cos^{d-k} sin^k for any tensor over R^2.
inline std::vector<double> circle_coefficients(const Tensor& t) {
  std::vector<double> c(t.order() + 1, 0.0);
  for_each_entry(t, [&](const MultiIndex& idx, double v) {
    c[static_cast<std::size_t>(std::count(idx.begin(), idx.end(), 1))] += v;
  });
  return c;
}

inline double circle_derivative(const std::vector<double>& c, double phi) {
  const double cs = std::cos(phi), sn = std::sin(phi);
  const int d = static_cast<int>(c.size()) - 1;
  double s = 0.0;
  for (int k = 0; k <= d; ++k) {
    const int a = d - k;
    if (a > 0) s -= c[k] * a * std::pow(cs, a - 1) * std::pow(sn, k + 1);
    if (k > 0) s += c[k] * k * std::pow(cs, a + 1) * std::pow(sn, k - 1);
  }
  return s;
}

// Sign changes of f' on a uniform grid, refined by bisection.
inline std::vector<double> grid_critical_angles(const Tensor& t, std::size_t samples) {
  const auto c = circle_coefficients(t);
  auto fp = [&](double phi) { return circle_derivative(c, phi); };
  std::vector<double> out;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(samples);
  double prev = fp(0.0);
  for (std::size_t j = 1; j <= samples; ++j) {
    const double phi = h * static_cast<double>(j);
    const double cur = fp(phi);
    if ((prev < 0) != (cur < 0) && prev != 0.0) {
      double lo = phi - h, hi = phi, flo = prev;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fp(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double a = 0.5 * (lo + hi);
      if (a >= 2.0 * std::numbers::pi) a -= 2.0 * std::numbers::pi;
      out.push_back(a);
    }
    prev = cur;
  }
  return out;
}

// Durand-Kerner iteration for the roots of a complex polynomial
// (ascending coefficients, nonzero leading coefficient).
inline std::vector<std::complex<double>> durand_kerner(std::vector<std::complex<double>> c) {
  using C = std::complex<double>;
  const std::size_t n = c.size() - 1;
  const C lead = c.back();
  for (auto& v : c) v /= lead;
  double bound = 1.0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, 1.0 + std::abs(c[i]));
  std::vector<C> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::polar(0.5 * bound, 0.4 + 2.0 * std::numbers::pi * i / n);
  auto eval = [&](C x) {
    C acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  for (int it = 0; it < 5000; ++it) {
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      C den = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) den *= (z[i] - z[j]);
      }
      const C step = eval(z[i]) / den;
      z[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-15) break;
  }
  return z;
}

// Complex solutions of T x^{d-1} = sign * x for T in Sym(2, d), from the
// eigen-direction form: x = r y where y solves y_1 g_2(y) - y_2 g_1(y) = 0
// (g = T y^{d-1}) and r^{d-2} = sign / mu with g(y) = mu y. Every direction
// is taken in the chart y = (1, s) or y = (0, 1).
inline std::vector<std::array<std::complex<double>, 2>> direction_solutions(const Tensor& t, int sign) {
  using C = std::complex<double>;
  const std::size_t d = t.order();
  auto g = [&](C y1, C y2) {
    std::array<C, 2> out{};
    for_each_entry(t, [&](const MultiIndex& idx, double v) {
      C p = v;
      for (std::size_t m = 1; m < d; ++m) p *= idx[m] == 0 ? y1 : y2;
      out[idx[0]] += p;
    });
    return out;
  };
  // h(s) = g_2(1, s) - s g_1(1, s): coefficients by exact sampling.
  const std::size_t deg = d;
  std::vector<C> h(deg + 1, 0.0);
  {
    // Solve the Vandermonde system at s = 0..deg via Newton divided differences.
    std::vector<double> xsamp(deg + 1);
    std::vector<C> ys(deg + 1);
    for (std::size_t i = 0; i <= deg; ++i) {
      xsamp[i] = static_cast<double>(i) - static_cast<double>(deg) / 2.0;
      auto gv = g(1.0, xsamp[i]);
      ys[i] = gv[1] - xsamp[i] * gv[0];
    }
    std::vector<C> coef = ys;
    for (std::size_t j = 1; j <= deg; ++j) {
      for (std::size_t i = deg; i >= j; --i) coef[i] = (coef[i] - coef[i - 1]) / (xsamp[i] - xsamp[i - j]);
    }
    std::vector<C> poly{coef[deg]};
    for (std::size_t k = deg; k-- > 0;) {
      std::vector<C> next(poly.size() + 1, 0.0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + 1] += poly[i];
        next[i] -= poly[i] * xsamp[k];
      }
      next[0] += coef[k];
      poly = next;
    }
    h.assign(poly.begin(), poly.end());
    h.resize(deg + 1);
  }
  std::vector<std::array<C, 2>> dirs;
  double hmax = 0.0;
  for (auto& v : h) hmax = std::max(hmax, std::abs(v));
  std::size_t top = deg;
  while (top > 0 && std::abs(h[top]) < 1e-12 * hmax) --top;
  if (top < deg) dirs.push_back({0.0, 1.0});  // root at infinity
  if (top > 0) {
    std::vector<C> hp(h.begin(), h.begin() + static_cast<long>(top) + 1);
    for (const C& s : durand_kerner(hp)) dirs.push_back({1.0, s});
  }
  std::vector<std::array<C, 2>> sols;
  for (const auto& y : dirs) {
    auto gv = g(y[0], y[1]);
    const C mu = std::abs(y[0]) > std::abs(y[1]) ? gv[0] / y[0] : gv[1] / y[1];
    const C target = static_cast<double>(sign) / mu;
    const std::size_t k = d - 2;
    for (std::size_t j = 0; j < k; ++j) {
      const C r = std::polar(std::pow(std::abs(target), 1.0 / k),
                             (std::arg(target) + 2.0 * std::numbers::pi * j) / k);
      sols.push_back({r * y[0], r * y[1]});
    }
  }
  return sols;
}

}  // namespace rank1::oracle

#endif  // RANK1_TESTS_ORACLES_HPP

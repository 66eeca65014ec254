#ifndef RANK1_MATRIX_HPP
#define RANK1_MATRIX_HPP

// The order-2 baseline: symmetric eigendecomposition by cyclic Jacobi
// rotations, the leading singular triple, best rank-one approximation of
// (symmetric) matrices, and two determinantal detectors for spectral
// degeneracy: the discriminant of the characteristic polynomial and the
// determinant of the Kronecker sum A (x) I + I (x) A.
//
// Matrices are order-2 Tensors at the API boundary.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <utility>
#include <vector>

#include "rank1/tensor.hpp"

namespace rank1 {

// Small dense row-major matrix used inside the numerical kernels.
template <typename Scalar>
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Scalar> a;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Scalar(0)) {}

  Scalar& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Scalar operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }
};

using Matrix = DenseMatrix<double>;

inline Matrix to_matrix(const Tensor& t) {
  if (t.order() != 2) throw DimensionError("expected an order-2 tensor (matrix)");
  Matrix m(t.extent(0), t.extent(1));
  std::copy(t.data().begin(), t.data().end(), m.a.begin());
  return m;
}

inline Tensor to_tensor(const Matrix& m) { return Tensor({m.rows, m.cols}, m.a); }

inline Tensor matrix_from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) throw DimensionError("matrix_from_rows: no rows");
  Vector data;
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw DimensionError("matrix_from_rows: ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor({rows.size(), rows.front().size()}, std::move(data));
}

inline Vector matvec(const Matrix& m, const Vector& x) {
  if (x.size() != m.cols) throw DimensionError("matvec: length mismatch");
  Vector y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) y[i] += m(i, j) * x[j];
  }
  return y;
}

inline Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  }
  return t;
}

inline Matrix gram(const Matrix& m) {
  Matrix g(m.cols, m.cols);
  for (std::size_t i = 0; i < m.cols; ++i) {
    for (std::size_t j = i; j < m.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.rows; ++k) s += m(k, i) * m(k, j);
      g(i, j) = g(j, i) = s;
    }
  }
  return g;
}

inline double frobenius(const Matrix& m) { return norm2(m.a); }

// Flips v so that its first coordinate with |v_i| > 1e-14 is positive.
inline Vector canonical_sign(Vector v) {
  for (double x : v) {
    if (std::abs(x) > 1e-14) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      break;
    }
  }
  return v;
}

struct SymSpectrum {
  Vector eigenvalues;                     // descending
  std::vector<UnitVector> eigenvectors;   // eigenvectors[i] belongs to eigenvalues[i]
};

inline SymSpectrum sym_eigen(const Matrix& input) {
  const std::size_t n = input.rows;
  if (n == 0 || input.cols != n) throw DimensionError("sym_eigen: matrix must be square");
  const double scale = std::max(frobenius(input), 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > 1e-12 * scale) {
        throw DomainError("sym_eigen: matrix is not symmetric");
      }
    }
  }
  Matrix a = input;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (input(i, j) + input(j, i));
  }
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > 1e-14 * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymSpectrum out;
  for (std::size_t i : order) {
    out.eigenvalues.push_back(a(i, i));
    Vector col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v(k, i);
    out.eigenvectors.push_back(UnitVector::normalized(canonical_sign(std::move(col))));
  }
  return out;
}

inline SymSpectrum sym_eigen(const Tensor& a) { return sym_eigen(to_matrix(a)); }

// Leading singular triple: A v = sigma u, A^T u = sigma v.
struct MatrixRank1 {
  double sigma;
  UnitVector left;
  UnitVector right;
};

inline MatrixRank1 best_rank1_matrix(const Matrix& a) {
  if (frobenius(a) == 0.0) throw DegenerateError("best_rank1_matrix: zero matrix");
  // Eigen-decompose the Gram matrix of the smaller side.
  const bool wide = a.rows < a.cols;
  const Matrix m = wide ? transpose(a) : a;
  const SymSpectrum spec = sym_eigen(gram(m));
  const Vector& v = spec.eigenvectors.front().coords();
  Vector w = matvec(m, v);
  const double sigma = norm2(w);
  if (!(sigma > 0.0)) throw DegenerateError("best_rank1_matrix: zero leading singular value");
  UnitVector u = UnitVector::normalized(std::move(w));
  UnitVector vv = spec.eigenvectors.front();
  if (wide) return {sigma, std::move(vv), std::move(u)};
  return {sigma, std::move(u), std::move(vv)};
}

inline MatrixRank1 best_rank1_matrix(const Tensor& a) { return best_rank1_matrix(to_matrix(a)); }

// sigma_1, with 0 for the zero matrix.
inline double spectral_norm(const Matrix& a) {
  if (frobenius(a) == 0.0) return 0.0;
  return best_rank1_matrix(a).sigma;
}

struct SymmetricRank1 {
  Rank1Approx approx;     // lambda * v (x) v
  bool nonsym_possible;   // lambda_1 == -lambda_n: nonsymmetric optima exist
};

// Best rank-one approximation of a symmetric matrix. The optimum is
// lambda v v^T for the extreme eigenvalue of largest magnitude; when
// |lambda_1| and |lambda_n| tie the positive one is returned.
inline SymmetricRank1 sym_best_rank1(const Matrix& a, double rel_tol = 1e-10) {
  const double scale = frobenius(a);
  if (scale == 0.0) throw DegenerateError("sym_best_rank1: zero matrix");
  const SymSpectrum spec = sym_eigen(a);
  const double l1 = spec.eigenvalues.front();
  const double ln = spec.eigenvalues.back();
  const bool tie = std::abs(std::abs(l1) - std::abs(ln)) <= rel_tol * scale;
  const bool pick_first = tie ? l1 >= -ln : std::abs(l1) > std::abs(ln);
  const std::size_t j = pick_first ? 0 : spec.eigenvalues.size() - 1;
  SymmetricRank1 out{{spec.eigenvalues[j], {spec.eigenvectors[j], spec.eigenvectors[j]}},
                     std::abs(l1 + ln) <= rel_tol * scale};
  return out;
}

inline SymmetricRank1 sym_best_rank1(const Tensor& a, double rel_tol = 1e-10) {
  return sym_best_rank1(to_matrix(a), rel_tol);
}

// Determinant by Gaussian elimination with partial pivoting.
template <typename Scalar>
Scalar determinant(DenseMatrix<Scalar> m) {
  const std::size_t n = m.rows;
  if (m.cols != n) throw DimensionError("determinant: matrix must be square");
  Scalar det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    }
    if (m(piv, k) == Scalar(0)) return Scalar(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Scalar f = m(i, k) / m(k, k);
      if (f == Scalar(0)) continue;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

// Coefficients c_0..c_n (ascending, c_n = 1) of det(xI - A), by the
// Faddeev-LeVerrier recursion in extended precision.
inline std::vector<long double> characteristic_polynomial(const Matrix& a) {
  const std::size_t n = a.rows;
  if (a.cols != n) throw DimensionError("characteristic_polynomial: matrix must be square");
  using LD = long double;
  DenseMatrix<LD> al(n, n);
  for (std::size_t i = 0; i < n * n; ++i) al.a[i] = a.a[i];
  std::vector<LD> c(n + 1, 0.0L);
  c[n] = 1.0L;
  DenseMatrix<LD> mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    DenseMatrix<LD> next(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        LD s = 0.0L;
        for (std::size_t l = 0; l < n; ++l) s += al(i, l) * mk(l, j);
        next(i, j) = s + (i == j ? c[n - k + 1] : 0.0L);
      }
    }
    mk = std::move(next);
    LD tr = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) tr += al(i, l) * mk(l, i);
    }
    c[n - k] = -tr / static_cast<LD>(k);
  }
  return c;
}

// Sylvester resultant of two polynomials given by ascending coefficients.
template <typename Scalar>
Scalar sylvester_resultant(const std::vector<Scalar>& p, const std::vector<Scalar>& q) {
  const std::size_t m = p.size() - 1;  // deg p
  const std::size_t k = q.size() - 1;  // deg q
  const std::size_t size = m + k;
  if (size == 0) return Scalar(1);
  DenseMatrix<Scalar> s(size, size);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j <= m; ++j) s(r, r + j) = p[m - j];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j <= k; ++j) s(k + r, r + j) = q[k - j];
  }
  return determinant(std::move(s));
}

// Discriminant of the characteristic polynomial: prod_{i<j} (l_i - l_j)^2,
// computed as (-1)^{n(n-1)/2} Res(p, p') for monic p. Zero exactly when A
// has a repeated eigenvalue.
inline double char_discriminant(const Matrix& a) {
  const std::size_t n = a.rows;
  if (n == 0 || a.cols != n) throw DimensionError("char_discriminant: matrix must be square");
  if (n == 1) return 1.0;
  const auto p = characteristic_polynomial(a);
  std::vector<long double> dp(n);
  for (std::size_t i = 1; i <= n; ++i) dp[i - 1] = static_cast<long double>(i) * p[i];
  const long double res = sylvester_resultant(p, dp);
  const bool negate = ((n * (n - 1) / 2) % 2) == 1;
  return static_cast<double>(negate ? -res : res);
}

inline double char_discriminant(const Tensor& a) { return char_discriminant(to_matrix(a)); }

// det(A (x) I_n + I_n (x) A) = prod_{i,j} (l_i + l_j); zero exactly when
// some pair of eigenvalues sums to zero (in particular l_1 = -l_n).
inline double kronecker_sum_det(const Matrix& a) {
  const std::size_t n = a.rows;
  if (a.cols != n) throw DimensionError("kronecker_sum_det: matrix must be square");
  const std::size_t big = n * n;
  DenseMatrix<long double> k(big, big);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t q = 0; q < n; ++q) {
          long double v = 0.0L;
          if (p == q) v += a(i, j);  // A (x) I
          if (i == j) v += a(p, q);  // I (x) A
          k(i * n + p, j * n + q) = v;
        }
      }
    }
  }
  return static_cast<double>(determinant(std::move(k)));
}

inline double kronecker_sum_det(const Tensor& a) { return kronecker_sum_det(to_matrix(a)); }

}  // namespace rank1

#endif  // RANK1_MATRIX_HPP

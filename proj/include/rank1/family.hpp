#ifndef RANK1_FAMILY_HPP
#define RANK1_FAMILY_HPP

// The exceptional ray in Sym(2,3):
//
//   t111 = cos(theta), t112 = sin(theta), t122 = -cos(theta), t222 = -sin(theta)
//
// (times a positive scale). These are the only symmetric 2x2x2 tensors with
// nonsymmetric best rank-one approximations: every u (x) v (x) w(u, v) with
// w(u, v) = normalize(A(u) v), A(u) = T x_1 u, is optimal, and there are
// exactly three symmetric optima.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "rank1/critical.hpp"
#include "rank1/matrix.hpp"
#include "rank1/tensor.hpp"

namespace rank1 {

struct FamilyParams {
  double theta = 0.0;  // [0, 2 pi)
  double scale = 1.0;  // > 0
};

inline Tensor family_tensor(const FamilyParams& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  return symmetric_from_counts(3, {p.scale * c, p.scale * s, -p.scale * c, -p.scale * s});
}

struct SliceTraceReport {
  // Trailing index (i_3..i_d), row-major, paired with tr [t_{i,j,i_3..i_d}].
  std::vector<std::pair<MultiIndex, double>> traces;
  bool all_traceless = false;
  double max_abs_trace = 0.0;
};

// Traces of the 2x2 leading slices of T in Sym(2, d). all_traceless uses
// the absolute tolerance rel_tol * ||T||.
inline SliceTraceReport slice_traces(const Tensor& t, double rel_tol = 1e-12) {
  if (t.order() < 2 || !t.is_cubical() || t.extent(0) != 2) {
    throw DomainError("slice_traces: expected a tensor over R^2 of order >= 2");
  }
  SliceTraceReport rep;
  const Shape trailing(t.order() - 2, 2);
  MultiIndex rest(trailing.size(), 0);
  do {
    MultiIndex a{0, 0}, b{1, 1};
    a.insert(a.end(), rest.begin(), rest.end());
    b.insert(b.end(), rest.begin(), rest.end());
    const double tr = t(a) + t(b);
    rep.traces.emplace_back(rest, tr);
    rep.max_abs_trace = std::max(rep.max_abs_trace, std::abs(tr));
  } while (!trailing.empty() && detail::next_index(rest, trailing));
  rep.all_traceless = rep.max_abs_trace <= rel_tol * hs_norm(t);
  return rep;
}

// (theta, scale) if T is proportional to the exceptional tensor, i.e.
// t122 = -t111 and t222 = -t112 within rel_tol * ||T||.
inline std::optional<FamilyParams> detect_family(const Tensor& t, double rel_tol = 1e-10) {
  const double tn = hs_norm(t);
  if (tn == 0.0) throw DegenerateError("detect_family: zero tensor");
  const BinaryForm f = BinaryForm::from_tensor(t);
  if (f.d != 3) throw DomainError("detect_family: expected an order-3 tensor");
  const double tol = rel_tol * tn;
  if (std::abs(f.tau[2] + f.tau[0]) > tol || std::abs(f.tau[3] + f.tau[1]) > tol) return std::nullopt;
  FamilyParams p;
  p.scale = std::hypot(f.tau[0], f.tau[1]);
  p.theta = wrap_angle(std::atan2(f.tau[1], f.tau[0]));
  return p;
}

// A_1(theta) scaled: the first frontal slice of the family tensor.
inline Matrix family_slice(double theta, double scale) {
  Matrix a(2, 2);
  a(0, 0) = scale * std::cos(theta);
  a(0, 1) = a(1, 0) = scale * std::sin(theta);
  a(1, 1) = -scale * std::cos(theta);
  return a;
}

// ||A(x(phi)) - scale * A_1(theta - phi)||_F where A(x) = T x_1 x.
inline double rotation_identity_check(const FamilyParams& p, double phi) {
  const Tensor t = family_tensor(p);
  const Matrix ax = to_matrix(contract(t, 0, {std::cos(phi), std::sin(phi)}));
  const Matrix rot = family_slice(p.theta - phi, p.scale);
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += (ax.a[i] - rot.a[i]) * (ax.a[i] - rot.a[i]);
  return std::sqrt(s);
}

struct FamilySolutions {
  Tensor tensor;
  // Critical points with positive value; each gives the symmetric optimum
  // value * y (x) y (x) y.
  std::vector<CriticalPoint> symmetric;

  // w(u, v) = normalize(A(u) v).
  UnitVector w(const UnitVector& u, const UnitVector& v) const {
    const Matrix a = to_matrix(contract(tensor, 0, u.coords()));
    return UnitVector::normalized(matvec(a, v.coords()));
  }
};

inline FamilySolutions family_solutions(const FamilyParams& p) {
  FamilySolutions out{family_tensor(p), {}};
  for (auto& cp : enumerate_critical_points(out.tensor)) {
    if (cp.value > 0) out.symmetric.push_back(cp);
  }
  return out;
}

}  // namespace rank1

#endif  // RANK1_FAMILY_HPP

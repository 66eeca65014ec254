#ifndef RANK1_TENSOR_HPP
#define RANK1_TENSOR_HPP

// Dense real d-mode tensors, rank-one tensors, contractions and the
// symmetry structure of the mode set.
//
// Storage is row-major with the last index running fastest. A tensor with
// an empty shape is a scalar (one entry); contractions over every mode
// produce such scalars.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rank1/error.hpp"

namespace rank1 {

using Shape = std::vector<std::size_t>;
using MultiIndex = std::vector<std::size_t>;
using Vector = std::vector<double>;

namespace detail {

inline std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

inline std::string shape_string(const Shape& shape) {
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + ")";
}

// Advances a row-major multi-index; returns false after the last one.
inline bool next_index(MultiIndex& idx, const Shape& shape) {
  for (std::size_t m = shape.size(); m-- > 0;) {
    if (++idx[m] < shape[m]) return true;
    idx[m] = 0;
  }
  return false;
}

}  // namespace detail

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: length " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

class Tensor {
 public:
  // The scalar zero.
  Tensor() : data_(1, 0.0) {}

  Tensor(Shape shape, Vector data) : shape_(std::move(shape)), data_(std::move(data)) {
    for (std::size_t n : shape_) {
      if (n == 0) throw DimensionError("tensor extents must be positive");
    }
    if (data_.size() != detail::shape_size(shape_)) {
      throw DimensionError("tensor of shape " + detail::shape_string(shape_) +
                           " needs " + std::to_string(detail::shape_size(shape_)) +
                           " entries, got " + std::to_string(data_.size()));
    }
    for (double v : data_) {
      if (!std::isfinite(v)) throw DomainError("tensor entries must be finite");
    }
    strides_.assign(shape_.size(), 1);
    for (std::size_t m = shape_.size(); m-- > 1;) {
      strides_[m - 1] = strides_[m] * shape_[m];
    }
  }

  static Tensor zeros(Shape shape) {
    const std::size_t size = detail::shape_size(shape);
    return Tensor(std::move(shape), Vector(size, 0.0));
  }

  static Tensor scalar(double value) { return Tensor({}, {value}); }

  // Fills every entry from f(multi_index).
  template <typename F>
  static Tensor generate(Shape shape, F&& f) {
    Vector data(detail::shape_size(shape));
    MultiIndex idx(shape.size(), 0);
    std::size_t k = 0;
    do {
      data[k++] = f(static_cast<const MultiIndex&>(idx));
    } while (detail::next_index(idx, shape));
    return Tensor(std::move(shape), std::move(data));
  }

  std::size_t order() const { return shape_.size(); }
  const Shape& shape() const { return shape_; }
  std::size_t extent(std::size_t mode) const { return shape_.at(mode); }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::size_t size() const { return data_.size(); }
  std::span<const double> data() const { return data_; }
  const Vector& values() const { return data_; }

  std::size_t offset(std::span<const std::size_t> idx) const {
    if (idx.size() != shape_.size()) {
      throw DimensionError("index of length " + std::to_string(idx.size()) +
                           " for order-" + std::to_string(shape_.size()) +
                           " tensor");
    }
    std::size_t off = 0;
    for (std::size_t m = 0; m < idx.size(); ++m) {
      if (idx[m] >= shape_[m]) throw DimensionError("index out of range");
      off += idx[m] * strides_[m];
    }
    return off;
  }

  double operator()(std::span<const std::size_t> idx) const {
    return data_[offset(idx)];
  }
  double at(std::initializer_list<std::size_t> idx) const {
    return (*this)(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  // Value of a scalar (order-0) tensor.
  double value() const {
    if (!shape_.empty()) throw DimensionError("value() on a non-scalar tensor");
    return data_[0];
  }

  bool is_cubical() const {
    return std::all_of(shape_.begin(), shape_.end(),
                       [&](std::size_t n) { return n == shape_.front(); });
  }

  Tensor operator+(const Tensor& o) const { return combine(o, 1.0); }
  Tensor operator-(const Tensor& o) const { return combine(o, -1.0); }
  Tensor operator*(double c) const {
    Vector d = data_;
    for (double& v : d) v *= c;
    return Tensor(shape_, std::move(d));
  }
  friend Tensor operator*(double c, const Tensor& t) { return t * c; }

  bool operator==(const Tensor& o) const {
    return shape_ == o.shape_ && data_ == o.data_;
  }

 private:
  Tensor combine(const Tensor& o, double sign) const {
    if (shape_ != o.shape_) {
      throw DimensionError("shape mismatch " + detail::shape_string(shape_) +
                           " vs " + detail::shape_string(o.shape_));
    }
    Vector d = data_;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += sign * o.data_[i];
    return Tensor(shape_, std::move(d));
  }

  Shape shape_;
  std::vector<std::size_t> strides_;
  Vector data_;
};

// A point of the unit sphere. Construction either normalizes or validates.
class UnitVector {
 public:
  static UnitVector normalized(Vector v) {
    const double n = norm2(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw DegenerateError("cannot normalize a zero vector");
    }
    for (double& x : v) x /= n;
    return UnitVector(std::move(v));
  }

  static UnitVector from_unit(Vector v, double tol = 1e-12) {
    if (std::abs(norm2(v) - 1.0) > tol) {
      throw DomainError("vector is not of unit length");
    }
    return UnitVector(std::move(v));
  }

  static UnitVector basis(std::size_t n, std::size_t k) {
    Vector v(n, 0.0);
    v.at(k) = 1.0;
    return UnitVector(std::move(v));
  }

  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const Vector& coords() const { return coords_; }
  std::span<const double> span() const { return coords_; }
  UnitVector operator-() const {
    Vector v = coords_;
    for (double& x : v) x = -x;
    return UnitVector(std::move(v));
  }
  bool operator==(const UnitVector&) const = default;

 private:
  explicit UnitVector(Vector v) : coords_(std::move(v)) {}
  Vector coords_;
};

inline double inner(const Tensor& s, const Tensor& t) {
  if (s.shape() != t.shape()) {
    throw DimensionError("inner: shape mismatch " +
                         detail::shape_string(s.shape()) + " vs " +
                         detail::shape_string(t.shape()));
  }
  return dot(s.data(), t.data());
}

// Hilbert-Schmidt norm.
inline double hs_norm(const Tensor& t) { return std::sqrt(inner(t, t)); }

inline Tensor decomposable(const std::vector<Vector>& factors) {
  if (factors.empty()) throw DimensionError("decomposable: no factors");
  Shape shape;
  for (const auto& f : factors) {
    if (f.empty()) throw DimensionError("decomposable: empty factor");
    shape.push_back(f.size());
  }
  return Tensor::generate(shape, [&](const MultiIndex& idx) {
    double p = 1.0;
    for (std::size_t m = 0; m < idx.size(); ++m) p *= factors[m][idx[m]];
    return p;
  });
}

inline Tensor decomposable(const std::vector<UnitVector>& factors) {
  std::vector<Vector> raw;
  raw.reserve(factors.size());
  for (const auto& f : factors) raw.push_back(f.coords());
  return decomposable(raw);
}

// d copies of x.
inline Tensor power(const Vector& x, std::size_t d) {
  return decomposable(std::vector<Vector>(d, x));
}

struct Rank1Approx {
  double scale = 0.0;
  std::vector<UnitVector> factors;

  Tensor to_tensor() const { return scale * decomposable(factors); }
  std::size_t order() const { return factors.size(); }
};

// <T, x_1 (x) ... (x) x_d> without materializing the rank-one tensor.
inline double multilinear(const Tensor& t, const std::vector<Vector>& xs) {
  if (xs.size() != t.order()) throw DimensionError("multilinear: wrong factor count");
  for (std::size_t m = 0; m < xs.size(); ++m) {
    if (xs[m].size() != t.extent(m)) throw DimensionError("multilinear: length mismatch");
  }
  const auto& shape = t.shape();
  MultiIndex idx(shape.size(), 0);
  double s = 0.0;
  std::size_t k = 0;
  const auto data = t.data();
  do {
    double p = data[k++];
    for (std::size_t m = 0; m < idx.size() && p != 0.0; ++m) p *= xs[m][idx[m]];
    s += p;
  } while (detail::next_index(idx, shape));
  return s;
}

inline double multilinear(const Tensor& t, const std::vector<UnitVector>& us) {
  std::vector<Vector> xs;
  xs.reserve(us.size());
  for (const auto& u : us) xs.push_back(u.coords());
  return multilinear(t, xs);
}

// Contraction of every mode except `mode`; the vector T x_{j != mode} x_j.
inline Vector contract_all_but(const Tensor& t, const std::vector<Vector>& xs,
                               std::size_t mode) {
  if (xs.size() != t.order() || mode >= t.order()) {
    throw DimensionError("contract_all_but: wrong factor count or mode");
  }
  for (std::size_t m = 0; m < xs.size(); ++m) {
    if (m != mode && xs[m].size() != t.extent(m)) {
      throw DimensionError("contract_all_but: length mismatch in mode " +
                           std::to_string(m));
    }
  }
  Vector out(t.extent(mode), 0.0);
  const auto& shape = t.shape();
  MultiIndex idx(shape.size(), 0);
  std::size_t k = 0;
  const auto data = t.data();
  do {
    double p = data[k++];
    for (std::size_t m = 0; m < idx.size(); ++m) {
      if (m != mode) p *= xs[m][idx[m]];
    }
    out[idx[mode]] += p;
  } while (detail::next_index(idx, shape));
  return out;
}

using Assignment = std::vector<std::pair<std::size_t, Vector>>;

// T x_{j in beta} x_j: sums out the assigned modes and keeps the others in
// their original order. Assigning every mode gives a scalar tensor.
inline Tensor contract(const Tensor& t, const Assignment& assignments) {
  const std::size_t d = t.order();
  std::vector<const Vector*> vec(d, nullptr);
  for (const auto& [mode, x] : assignments) {
    if (mode >= d) {
      throw DimensionError("contract: mode " + std::to_string(mode) +
                           " out of range for order " + std::to_string(d));
    }
    if (vec[mode]) throw DimensionError("contract: mode assigned twice");
    if (x.size() != t.extent(mode)) {
      throw DimensionError("contract: vector length " + std::to_string(x.size()) +
                           " does not match extent " +
                           std::to_string(t.extent(mode)) + " of mode " +
                           std::to_string(mode));
    }
    vec[mode] = &x;
  }
  Shape out_shape;
  std::vector<std::size_t> kept;
  for (std::size_t m = 0; m < d; ++m) {
    if (!vec[m]) {
      kept.push_back(m);
      out_shape.push_back(t.extent(m));
    }
  }
  std::vector<std::size_t> out_strides(kept.size(), 1);
  for (std::size_t j = kept.size(); j-- > 1;) {
    out_strides[j - 1] = out_strides[j] * out_shape[j];
  }
  Vector out(detail::shape_size(out_shape), 0.0);
  MultiIndex idx(d, 0);
  std::size_t k = 0;
  const auto data = t.data();
  do {
    double p = data[k++];
    std::size_t off = 0;
    std::size_t j = 0;
    for (std::size_t m = 0; m < d; ++m) {
      if (vec[m]) {
        p *= (*vec[m])[idx[m]];
      } else {
        off += idx[m] * out_strides[j++];
      }
    }
    out[off] += p;
  } while (detail::next_index(idx, t.shape()));
  return Tensor(std::move(out_shape), std::move(out));
}

// Single-mode contraction T x_mode x.
inline Tensor contract(const Tensor& t, std::size_t mode, const Vector& x) {
  return contract(t, Assignment{{mode, x}});
}

// Modes are 0-based throughout the library.
using ModeSet = std::vector<std::size_t>;

// A partition of {0..d-1} into disjoint nonempty blocks. Blocks are kept
// sorted internally and ordered by their smallest element.
class ModePartition {
 public:
  ModePartition(std::size_t d, std::vector<ModeSet> blocks) : d_(d), blocks_(std::move(blocks)) {
    std::vector<int> seen(d, 0);
    for (auto& b : blocks_) {
      if (b.empty()) throw DomainError("partition: empty block");
      std::sort(b.begin(), b.end());
      for (std::size_t m : b) {
        if (m >= d) throw DomainError("partition: mode out of range");
        if (seen[m]++) throw DomainError("partition: blocks overlap");
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw DomainError("partition: blocks do not cover every mode");
    }
    std::sort(blocks_.begin(), blocks_.end());
  }

  static ModePartition singletons(std::size_t d) {
    std::vector<ModeSet> b;
    for (std::size_t m = 0; m < d; ++m) b.push_back({m});
    return ModePartition(d, std::move(b));
  }
  static ModePartition whole(std::size_t d) {
    ModeSet all(d);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return ModePartition(d, {all});
  }

  std::size_t order() const { return d_; }
  const std::vector<ModeSet>& blocks() const { return blocks_; }
  std::size_t block_of(std::size_t mode) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (std::binary_search(blocks_[b].begin(), blocks_[b].end(), mode)) return b;
    }
    throw DomainError("partition: mode out of range");
  }
  bool operator==(const ModePartition&) const = default;

 private:
  std::size_t d_;
  std::vector<ModeSet> blocks_;
};

// True iff every transposition of two modes in alpha leaves T unchanged
// (entrywise |difference| <= eps). Unequal extents give false.
inline bool is_symmetric_wrt(const Tensor& t, const ModeSet& alpha, double eps = 0.0) {
  for (std::size_t m : alpha) {
    if (m >= t.order()) throw DimensionError("is_symmetric_wrt: mode out of range");
  }
  for (std::size_t a = 0; a < alpha.size(); ++a) {
    for (std::size_t b = a + 1; b < alpha.size(); ++b) {
      if (t.extent(alpha[a]) != t.extent(alpha[b])) return false;
    }
  }
  const auto& strides = t.strides();
  const auto data = t.data();
  for (std::size_t a = 0; a < alpha.size(); ++a) {
    for (std::size_t b = a + 1; b < alpha.size(); ++b) {
      const std::size_t p = alpha[a], q = alpha[b];
      if (p == q) continue;
      MultiIndex idx(t.order(), 0);
      std::size_t k = 0;
      do {
        if (idx[p] < idx[q]) {
          const std::size_t swapped = k + (idx[q] - idx[p]) * strides[p] -
                                      (idx[q] - idx[p]) * strides[q];
          if (std::abs(data[k] - data[swapped]) > eps) return false;
        }
        ++k;
      } while (detail::next_index(idx, t.shape()));
    }
  }
  return true;
}

inline bool is_symmetric(const Tensor& t, double eps = 0.0) {
  return is_symmetric_wrt(t, ModePartition::whole(t.order()).blocks().front(), eps);
}

// The coarsest partition of the modes into blocks on which T is symmetric:
// the transitive closure of pairwise symmetry. Pairwise symmetry inside a
// block is enough since transpositions generate the symmetric group.
inline ModePartition symmetric_decomposition(const Tensor& t, double eps = 0.0) {
  const std::size_t d = t.order();
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = p + 1; q < d; ++q) {
      if (find(p) != find(q) && is_symmetric_wrt(t, {p, q}, eps)) {
        parent[find(q)] = find(p);
      }
    }
  }
  std::vector<ModeSet> blocks;
  std::vector<long> block_of_root(d, -1);
  for (std::size_t m = 0; m < d; ++m) {
    const std::size_t r = find(m);
    if (block_of_root[r] < 0) {
      block_of_root[r] = static_cast<long>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(block_of_root[r])].push_back(m);
  }
  return ModePartition(d, std::move(blocks));
}

// Average of T over all permutations of the modes inside each block.
// Every entry is computed from the block-sorted representative of its
// index, so the result is exactly symmetric on each block.
inline Tensor symmetrize(const Tensor& t, const ModePartition& part) {
  if (part.order() != t.order()) throw DimensionError("symmetrize: partition order does not match tensor");
  const auto& blocks = part.blocks();
  for (const auto& b : blocks) {
    for (std::size_t m : b) {
      if (t.extent(m) != t.extent(b.front())) throw DimensionError("symmetrize: extents differ inside a block");
    }
  }
  const std::size_t d = t.order();
  std::vector<std::vector<std::size_t>> perms(blocks.size());
  double count = 1.0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (std::size_t i = 1; i <= blocks[k].size(); ++i) count *= static_cast<double>(i);
  }
  MultiIndex sorted(d), permuted(d);
  std::function<double(std::size_t)> sum = [&](std::size_t k) -> double {
    if (k == blocks.size()) return t(permuted);
    const auto& b = blocks[k];
    auto& perm = perms[k];
    perm.resize(b.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double acc = 0.0;
    do {
      for (std::size_t i = 0; i < b.size(); ++i) permuted[b[i]] = sorted[b[perm[i]]];
      acc += sum(k + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
  };
  return Tensor::generate(t.shape(), [&](const MultiIndex& idx) {
    sorted = idx;
    for (const auto& b : blocks) {
      MultiIndex vals;
      for (std::size_t m : b) vals.push_back(idx[m]);
      std::sort(vals.begin(), vals.end());
      for (std::size_t i = 0; i < b.size(); ++i) sorted[b[i]] = vals[i];
    }
    return sum(0) / count;
  });
}

// Average of T over all permutations of its modes.
inline Tensor symmetrize(const Tensor& t) {
  if (!t.is_cubical()) throw DimensionError("symmetrize: extents differ");
  return symmetrize(t, ModePartition::whole(t.order()));
}

// The symmetric tensor of order d over R^2 whose entry with k indices equal
// to 2 (0-based: k ones) is coeffs[k].
inline Tensor symmetric_from_counts(std::size_t d, const Vector& coeffs) {
  if (coeffs.size() != d + 1) throw DimensionError("symmetric_from_counts: need d+1 values");
  return Tensor::generate(Shape(d, 2), [&](const MultiIndex& idx) {
    return coeffs[static_cast<std::size_t>(std::count(idx.begin(), idx.end(), 1))];
  });
}

}  // namespace rank1

#endif  // RANK1_TENSOR_HPP

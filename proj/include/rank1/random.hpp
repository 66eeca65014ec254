#ifndef RANK1_RANDOM_HPP
#define RANK1_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <random>

#include "rank1/tensor.hpp"

namespace rank1 {

// SplitMix64, usable as a standard uniform random bit generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Independent child stream, e.g. one per restart or sample.
  SplitMix64 fork(std::uint64_t stream) const {
    SplitMix64 mixer(state_ ^ (stream * 0xd1b54a32d192ed03ULL));
    return SplitMix64(mixer());
  }

 private:
  std::uint64_t state_;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  Vector gaussian_vector(std::size_t n) {
    Vector v(n);
    for (double& x : v) x = gaussian();
    return v;
  }

  UnitVector unit_vector(std::size_t n) {
    for (;;) {
      Vector v = gaussian_vector(n);
      if (norm2(v) > 1e-12) return UnitVector::normalized(std::move(v));
    }
  }

  Tensor gaussian_tensor(const Shape& shape) {
    return Tensor::generate(shape, [&](const MultiIndex&) { return gaussian(); });
  }

  // I.i.d. Gaussian entries, then averaged over mode permutations.
  Tensor gaussian_symmetric(std::size_t n, std::size_t d) {
    return symmetrize(gaussian_tensor(Shape(d, n)));
  }

  SplitMix64& engine() { return engine_; }

 private:
  SplitMix64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace rank1

#endif  // RANK1_RANDOM_HPP

#ifndef RANK1_OPTIMIZER_HPP
#define RANK1_OPTIMIZER_HPP

// Best rank-one approximation by alternating maximization of the
// multilinear form <T, x_1 (x) ... (x) x_d> over unit vectors.
//
// One engine handles every variant: the modes are grouped into blocks whose
// factors are tied together. Singleton blocks give the classical higher
// order power method (each update is an exact block maximizer). A block of
// two or more tied modes is updated towards sign(f) * T x_{others} with a
// damped step x <- normalize((1 - g) x + g x_new), halving g until |f| does
// not decrease. The whole mode set as one block is the symmetric problem.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "rank1/matrix.hpp"
#include "rank1/random.hpp"
#include "rank1/tensor.hpp"

namespace rank1 {

struct SolverConfig {
  int max_iters = 20000;   // sweeps per restart
  double tol = 1e-10;      // stationarity residual, relative to ||T||
  int restarts = 16;
  std::uint64_t seed = 0;
  bool symmetric_mode = false;
  bool record_trace = false;

  void validate() const {
    if (!(tol > 0.0)) throw DomainError("solver tol must be positive");
    if (restarts < 1) throw DomainError("solver needs at least one restart");
    if (max_iters < 1) throw DomainError("solver needs at least one iteration");
  }
};

struct SolveResult {
  Rank1Approx approx;   // scale == value
  double value = 0.0;   // <T, (x) u_j>, signed
  double residual = 0.0;  // max_i || T x_{j != i} u_j - value u_i ||
  int iterations = 0;
  int restart_index = 0;
  bool converged = false;
  // |objective| never decreased (beyond 1e-13 ||T|| rounding noise) in any
  // block update of any restart.
  bool monotone = true;
  // Largest observed decrease of |objective| over all updates, relative to ||T||.
  double worst_decrease = 0.0;
  // |objective| after every block update of the returned restart.
  std::vector<double> trace;
};

// Stationarity residual of the multilinear problem at the given factors.
inline double stationarity_residual(const Tensor& t, const std::vector<Vector>& xs, double value) {
  double worst = 0.0;
  for (std::size_t m = 0; m < t.order(); ++m) {
    Vector g = contract_all_but(t, xs, m);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= value * xs[m][i];
    worst = std::max(worst, norm2(g));
  }
  return worst;
}

inline double stationarity_residual(const Tensor& t, const std::vector<UnitVector>& us) {
  std::vector<Vector> xs;
  for (const auto& u : us) xs.push_back(u.coords());
  return stationarity_residual(t, xs, multilinear(t, xs));
}

// normalize(T x_{j != mode} u_j).
inline UnitVector hopm_step(const Tensor& t, const std::vector<UnitVector>& factors, std::size_t mode) {
  std::vector<Vector> xs;
  for (const auto& u : factors) xs.push_back(u.coords());
  Vector g = contract_all_but(t, xs, mode);
  if (!(norm2(g) > 0.0)) throw DegenerateError("hopm_step: zero contraction");
  return UnitVector::normalized(std::move(g));
}

namespace detail {

inline std::vector<Vector> expand(const ModePartition& part, const std::vector<Vector>& block_x) {
  std::vector<Vector> xs(part.order());
  for (std::size_t b = 0; b < part.blocks().size(); ++b) {
    for (std::size_t m : part.blocks()[b]) xs[m] = block_x[b];
  }
  return xs;
}

// Basis vector e_k maximizing ||T x_mode e_k||, i.e. the heaviest slice.
inline Vector dominant_slice(const Tensor& t, std::size_t mode) {
  const std::size_t n = t.extent(mode);
  Vector mass(n, 0.0);
  MultiIndex idx(t.order(), 0);
  std::size_t k = 0;
  do {
    mass[idx[mode]] += t.data()[k] * t.data()[k];
    ++k;
  } while (next_index(idx, t.shape()));
  Vector e(n, 0.0);
  e[static_cast<std::size_t>(std::max_element(mass.begin(), mass.end()) - mass.begin())] = 1.0;
  return e;
}

struct RestartOutcome {
  bool ok = false;
  std::vector<Vector> block_x;
  double value = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
  double worst_decrease = 0.0;
  std::vector<double> trace;
};

struct DegenerateStart {};

// ||g - <g, x> x|| for unit x.
inline double tangent_norm(const Vector& g, const Vector& x) {
  const double c = dot(g, x);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += (g[i] - c * x[i]) * (g[i] - c * x[i]);
  return std::sqrt(s);
}

inline RestartOutcome run_restart(const Tensor& t, const ModePartition& part,
                                  std::vector<Vector> block_x, const SolverConfig& cfg,
                                  double tnorm) {
  RestartOutcome out;
  const auto& blocks = part.blocks();
  std::vector<Vector> xs = expand(part, block_x);
  double f = multilinear(t, xs);
  const double noise = 1e-13 * tnorm;
  const double flat = 1e-14 * tnorm;
  auto note = [&](double before, double after) {
    const double drop = std::abs(before) - std::abs(after);
    if (drop > 0.0) out.worst_decrease = std::max(out.worst_decrease, drop / tnorm);
    if (drop > noise) out.monotone = false;
    if (cfg.record_trace) out.trace.push_back(std::abs(after));
  };

  for (int it = 1; it <= cfg.max_iters; ++it) {
    bool stalled = true;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::size_t rep = blocks[b].front();
      Vector g = contract_all_but(t, xs, rep);
      const double gn = norm2(g);
      if (!(gn > 0.0)) throw DegenerateStart{};
      const double before = f;
      if (blocks[b].size() == 1) {
        for (double& v : g) v /= gn;
        block_x[b] = std::move(g);
        xs[rep] = block_x[b];
        f = multilinear(t, xs);
        stalled = false;
      } else {
        // Damped step towards the sign-aligned gradient direction. Once |f|
        // is flat to rounding, a step is still taken when it lowers the
        // block residual.
        const double s = f < 0.0 ? -1.0 : 1.0;
        const double res_now = tangent_norm(g, block_x[b]);
        for (double& v : g) v *= s / gn;
        double gamma = 1.0;
        bool moved = false;
        while (gamma > 1e-10) {
          Vector cand(g.size());
          for (std::size_t i = 0; i < g.size(); ++i) {
            cand[i] = (1.0 - gamma) * block_x[b][i] + gamma * g[i];
          }
          const double cn = norm2(cand);
          if (cn > 1e-300) {
            for (double& v : cand) v /= cn;
            std::vector<Vector> trial = xs;
            for (std::size_t m : blocks[b]) trial[m] = cand;
            const double fc = multilinear(t, trial);
            bool accept = std::abs(fc) > std::abs(f) + flat;
            if (!accept && std::abs(fc) >= std::abs(f) - flat) {
              accept = tangent_norm(contract_all_but(t, trial, rep), cand) < res_now;
            }
            if (accept) {
              block_x[b] = std::move(cand);
              xs = std::move(trial);
              f = fc;
              moved = true;
              break;
            }
          }
          gamma *= 0.5;
        }
        stalled = stalled && !moved;
      }
      note(before, f);
    }
    out.iterations = it;
    out.residual = stationarity_residual(t, xs, f);
    if (out.residual <= cfg.tol * tnorm) {
      out.converged = true;
      break;
    }
    if (stalled) break;
  }
  out.ok = true;
  out.block_x = std::move(block_x);
  out.value = f;
  return out;
}

}  // namespace detail

// Multi-start alternating maximization with the factors tied inside each
// block of `part`. T must be symmetric with respect to every block.
inline SolveResult solve_tied(const Tensor& t, const ModePartition& part, const SolverConfig& cfg) {
  cfg.validate();
  if (part.order() != t.order()) throw DimensionError("solve_tied: partition order does not match tensor");
  const double tnorm = hs_norm(t);
  if (tnorm == 0.0) throw DegenerateError("solve_tied: zero tensor");
  for (const auto& b : part.blocks()) {
    if (b.size() > 1 && !is_symmetric_wrt(t, b, 1e-12 * tnorm)) {
      throw DomainError("solve_tied: tensor is not symmetric on a tied block");
    }
  }
  const auto& blocks = part.blocks();

  SolveResult best;
  bool have = false;
  bool all_monotone = true;
  double worst_decrease = 0.0;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(SplitMix64(cfg.seed).fork(static_cast<std::uint64_t>(r))());
    std::vector<Vector> start;
    for (const auto& b : blocks) {
      start.push_back(r == 0 ? detail::dominant_slice(t, b.front())
                             : rng.unit_vector(t.extent(b.front())).coords());
    }
    detail::RestartOutcome o;
    for (int attempt = 0; attempt < 16 && !o.ok; ++attempt) {
      try {
        o = detail::run_restart(t, part, start, cfg, tnorm);
      } catch (const detail::DegenerateStart&) {
        // Zero contraction: draw a fresh start for this restart.
        start.clear();
        for (const auto& b : blocks) start.push_back(rng.unit_vector(t.extent(b.front())).coords());
      }
    }
    if (!o.ok) continue;
    all_monotone = all_monotone && o.monotone;
    worst_decrease = std::max(worst_decrease, o.worst_decrease);
    if (!have || std::abs(o.value) > std::abs(best.value)) {
      have = true;
      std::vector<UnitVector> factors;
      for (const auto& x : detail::expand(part, o.block_x)) factors.push_back(UnitVector::normalized(x));
      best.approx = Rank1Approx{o.value, std::move(factors)};
      best.value = o.value;
      best.residual = o.residual;
      best.iterations = o.iterations;
      best.restart_index = r;
      best.converged = o.converged;
      best.trace = std::move(o.trace);
    }
  }
  if (!have) throw DegenerateError("solve_tied: every restart degenerated");
  best.monotone = all_monotone;
  best.worst_decrease = worst_decrease;
  return best;
}

inline SolveResult solve_general(const Tensor& t, const SolverConfig& cfg) {
  return solve_tied(t, ModePartition::singletons(t.order()), cfg);
}

// All factors equal; T must be symmetric.
inline SolveResult solve_symmetric(const Tensor& t, const SolverConfig& cfg) {
  if (!t.is_cubical()) throw DomainError("solve_symmetric: extents differ");
  if (!is_symmetric(t, 1e-12 * hs_norm(t))) throw DomainError("solve_symmetric: tensor is not symmetric");
  return solve_tied(t, ModePartition::whole(t.order()), cfg);
}

inline SolveResult solve(const Tensor& t, const SolverConfig& cfg) {
  return cfg.symmetric_mode ? solve_symmetric(t, cfg) : solve_general(t, cfg);
}

struct Certificate {
  bool is_stationary = false;
  double residual = 0.0;         // stationarity residual at the factors
  double pythagoras_gap = 0.0;   // |l^2 + ||T - l (x)u||^2 - ||T||^2| / ||T||^2
  double cert_gap = 0.0;         // max over mode pairs |sigma_1(T x_{others} u) - |l||
};

// Necessary optimality checks for a candidate with unit factors. Besides
// stationarity and the Pythagoras identity, |l| must equal the top singular
// value of every doubly contracted matrix.
inline Certificate certify(const Tensor& t, const Rank1Approx& a, double tol = 1e-10) {
  if (a.factors.size() != t.order()) throw DimensionError("certify: wrong number of factors");
  std::vector<Vector> xs;
  for (const auto& u : a.factors) xs.push_back(u.coords());
  const double lambda = multilinear(t, xs);
  const double tn2 = inner(t, t);
  Certificate c;
  c.residual = stationarity_residual(t, xs, lambda);
  c.is_stationary = c.residual <= tol * std::sqrt(tn2);
  const Tensor diff = t - lambda * decomposable(xs);
  c.pythagoras_gap = tn2 > 0.0 ? std::abs(lambda * lambda + inner(diff, diff) - tn2) / tn2 : 0.0;
  const std::size_t d = t.order();
  if (d == 1) {
    c.cert_gap = std::abs(std::sqrt(tn2) - std::abs(lambda));
  }
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = p + 1; q < d; ++q) {
      Assignment as;
      for (std::size_t m = 0; m < d; ++m) {
        if (m != p && m != q) as.emplace_back(m, xs[m]);
      }
      const double sigma = spectral_norm(to_matrix(contract(t, as)));
      c.cert_gap = std::max(c.cert_gap, std::abs(sigma - std::abs(lambda)));
    }
  }
  return c;
}

// Every candidate obtained by permuting the factors inside each block of
// the partition, with its value re-evaluated on T. Identical factor lists
// are reported once.
inline std::vector<Rank1Approx> permuted_solutions(const Tensor& t, const Rank1Approx& a,
                                                   const ModePartition& part) {
  if (a.factors.size() != t.order() || part.order() != t.order()) {
    throw DimensionError("permuted_solutions: order mismatch");
  }
  std::vector<std::vector<UnitVector>> lists{a.factors};
  for (const auto& block : part.blocks()) {
    std::vector<std::vector<UnitVector>> next;
    for (const auto& base : lists) {
      std::vector<std::size_t> perm(block.size());
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      do {
        std::vector<UnitVector> cand = base;
        for (std::size_t i = 0; i < block.size(); ++i) cand[block[i]] = base[block[perm[i]]];
        if (std::find(next.begin(), next.end(), cand) == next.end()) next.push_back(std::move(cand));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    lists = std::move(next);
  }
  std::vector<Rank1Approx> out;
  for (auto& f : lists) {
    const double v = multilinear(t, f);
    out.push_back(Rank1Approx{v, std::move(f)});
  }
  return out;
}

}  // namespace rank1

#endif  // RANK1_OPTIMIZER_HPP

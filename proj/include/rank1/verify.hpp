#ifndef RANK1_VERIFY_HPP
#define RANK1_VERIFY_HPP

// Seeded verification experiments and their JSON reports. Each sample
// draws its own stream from the experiment seed, so a report depends only
// on the spec.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rank1/critical.hpp"
#include "rank1/family.hpp"
#include "rank1/optimizer.hpp"
#include "rank1/random.hpp"
#include "rank1/tensor.hpp"

namespace rank1 {

using Json = nlohmann::ordered_json;

enum class ExperimentKind {
  approx,
  enum_critical,
  census,
  detect_family,
  symdecomp,
  verify_symmetric,
  verify_partial_symmetry,
  verify_perturbation,
};

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::approx: return "approx";
    case ExperimentKind::enum_critical: return "enum-critical";
    case ExperimentKind::census: return "census";
    case ExperimentKind::detect_family: return "detect-family";
    case ExperimentKind::symdecomp: return "symdecomp";
    case ExperimentKind::verify_symmetric: return "verify-symmetric";
    case ExperimentKind::verify_partial_symmetry: return "verify-partial-symmetry";
    case ExperimentKind::verify_perturbation: return "verify-perturbation";
  }
  return "unknown";
}

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::verify_symmetric;
  std::size_t n = 2;
  std::size_t d = 3;
  int samples = 1;
  std::uint64_t seed = 0;
  int restarts = 32;
  // "value" is the pass threshold on value gaps; "sensitivity" bounds the
  // relative error of the first-order eigenpair formula.
  std::map<std::string, double> tolerances{{"value", 1e-6}, {"sensitivity", 1e-5}};
  std::optional<std::string> output_path;
  std::optional<Tensor> input;             // replaces the random model
  std::optional<std::string> input_path;   // echoed only
  std::optional<double> theta;             // family generator
  std::optional<ModePartition> partition;  // verify-partial-symmetry
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

  double tol(const std::string& key) const {
    const auto it = tolerances.find(key);
    if (it == tolerances.end()) throw DomainError("missing tolerance '" + key + "'");
    return it->second;
  }

  void validate() const {
    if (samples < 1) throw DomainError("samples must be >= 1");
    if (restarts < 1) throw DomainError("restarts must be >= 1");
    for (const auto& [k, v] : tolerances) {
      if (!(v > 0.0)) throw DomainError("tolerance '" + k + "' must be positive");
    }
    if (input) return;
    if (n < 1 || d < 1) throw DomainError("n and d must be positive");
    const bool needs_n2 = kind == ExperimentKind::enum_critical || kind == ExperimentKind::census ||
                          kind == ExperimentKind::verify_perturbation;
    if (needs_n2 && n != 2) throw DomainError(to_string(kind) + " requires n = 2");
    if (kind == ExperimentKind::verify_perturbation && d < 3) throw DomainError("verify-perturbation requires d >= 3");
    if (kind == ExperimentKind::verify_symmetric && d < 2) throw DomainError("verify-symmetric requires d >= 2");
    if (kind == ExperimentKind::verify_perturbation) {
      if (eps_list.empty()) throw DomainError("eps list is empty");
      for (double e : eps_list) {
        if (!(e > 0.0)) throw DomainError("eps values must be positive");
      }
    }
    if (partition && partition->order() != d) throw DomainError("partition order differs from d");
  }
};

inline Json to_json(const ModePartition& p) {
  // 1-based modes, as printed everywhere else.
  Json out = Json::array();
  for (const auto& b : p.blocks()) {
    Json block = Json::array();
    for (std::size_t m : b) block.push_back(m + 1);
    out.push_back(block);
  }
  return out;
}

inline Json to_json(const ExperimentSpec& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  j["n"] = s.n;
  j["d"] = s.d;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["restarts"] = s.restarts;
  j["tolerances"] = s.tolerances;
  j["random_model"] = "iid standard Gaussian entries, averaged over the symmetry group";
  j["input"] = s.input_path ? Json(*s.input_path) : Json(nullptr);
  j["theta"] = s.theta ? Json(*s.theta) : Json(nullptr);
  j["partition"] = s.partition ? to_json(*s.partition) : Json(nullptr);
  if (s.kind == ExperimentKind::verify_perturbation) j["eps_list"] = s.eps_list;
  return j;
}

inline Json to_json(const UnitVector& u) { return u.coords(); }

inline Json to_json(const Rank1Approx& a) {
  Json f = Json::array();
  for (const auto& u : a.factors) f.push_back(to_json(u));
  return {{"scale", a.scale}, {"factors", f}};
}

inline Json to_json(const SolveResult& r) {
  return {{"value", r.value},
          {"abs_value", std::abs(r.value)},
          {"residual", r.residual},
          {"iterations", r.iterations},
          {"restart_index", r.restart_index},
          {"converged", r.converged},
          {"monotone", r.monotone},
          {"approx", to_json(r.approx)}};
}

inline Json to_json(const Certificate& c) {
  return {{"is_stationary", c.is_stationary},
          {"residual", c.residual},
          {"pythagoras_gap", c.pythagoras_gap},
          {"cert_gap", c.cert_gap}};
}

inline Json to_json(const CriticalPoint& p) {
  return {{"angle", p.angle}, {"point", p.point.coords()}, {"value", p.value}, {"residual", p.residual}};
}

inline Json to_json(const EigenpairSolution& s) {
  Json re = Json::array(), im = Json::array();
  for (const auto& c : s.x) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return {{"system_sign", s.system_sign}, {"re", re}, {"im", im}, {"real", s.is_real()},
          {"multiple", s.multiple}, {"residual", s.residual}};
}

// Flat census record; bounds_satisfied is null when inconclusive.
inline Json to_json(const CensusReport& r, bool with_solutions = false) {
  Json j;
  j["d"] = r.d;
  j["n"] = r.n;
  j["complex_count"] = r.complex_count;
  j["complex_count_neg"] = r.complex_count_neg;
  j["real_count_pos"] = r.real_count_pos;
  j["real_count_neg"] = r.real_count_neg;
  j["bound_complex"] = r.bound_complex;
  j["bound_real"] = r.bound_real;
  j["conclusive"] = r.conclusive;
  j["bounds_satisfied"] = r.bounds_satisfied ? Json(*r.bounds_satisfied) : Json(nullptr);
  j["distinct_critical_values"] = r.distinct_critical_values;
  j["antipodal_pairing_ok"] = r.antipodal_pairing_ok;
  j["uniqueness_gap"] = r.uniqueness_gap;
  if (with_solutions) {
    Json sols = Json::array();
    for (const auto& s : r.solutions) sols.push_back(to_json(s));
    j["solutions"] = sols;
  }
  return j;
}

struct VerifyReport {
  ExperimentSpec spec;
  std::vector<Json> samples;  // one flat record per sample, each with "pass"
  Json aggregate = Json::object();
  bool exhaustive = false;
  double wall_ms = 0.0;

  std::size_t passed() const {
    std::size_t k = 0;
    for (const auto& s : samples) k += s.at("pass").get<bool>();
    return k;
  }
  double pass_rate() const { return samples.empty() ? 0.0 : double(passed()) / double(samples.size()); }
  bool all_pass() const { return !samples.empty() && passed() == samples.size(); }

  Json to_json(bool timing = true) const {
    Json agg = aggregate;
    agg["passed"] = passed();
    agg["total"] = samples.size();
    agg["pass_rate"] = pass_rate();
    agg["all_pass"] = all_pass();
    agg["exhaustive"] = exhaustive;
    Json j;
    j["spec"] = rank1::to_json(spec);
    j["samples"] = samples;
    j["aggregate"] = agg;
    j["wall_ms"] = timing ? Json(wall_ms) : Json(nullptr);
    return j;
  }
};

namespace detail {

inline std::uint64_t sample_seed(std::uint64_t seed, std::size_t i) {
  return SplitMix64(seed).fork(static_cast<std::uint64_t>(i))();
}

inline SolverConfig sample_config(const ExperimentSpec& spec, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.restarts = spec.restarts;
  cfg.seed = seed;
  return cfg;
}

// Stationary and Pythagoras-consistent at the solver tolerance.
inline bool certificate_ok(const Certificate& c) { return c.is_stationary && c.pythagoras_gap <= 1e-10; }

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// tau = (a, b, -a, -b, a, ...): every 2x2 leading slice is traceless.
inline Tensor traceless_form(std::size_t d, double a, double b) {
  Vector tau(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    const double base = k % 2 == 0 ? a : b;
    tau[k] = (k / 2) % 2 == 0 ? base : -base;
  }
  return symmetric_from_counts(d, tau);
}

}  // namespace detail

// Best symmetric value against best general value on random symmetric
// tensors; for n = 2 both are also checked against the exhaustive
// enumeration of critical points.
inline VerifyReport run_verify_symmetric(const ExperimentSpec& spec) {
  spec.validate();
  detail::Stopwatch clock;
  VerifyReport rep;
  rep.spec = spec;
  const double tol = spec.tol("value");
  const int count = spec.input || spec.theta ? 1 : spec.samples;
  double max_gap = 0.0;
  std::size_t generic = 0, n2 = 0;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = detail::sample_seed(spec.seed, static_cast<std::size_t>(i));
    Tensor t = spec.input ? *spec.input
             : spec.theta ? family_tensor({*spec.theta, 1.0})
                          : Rng(seed).gaussian_symmetric(spec.n, spec.d);
    if (!t.is_cubical() || !is_symmetric(t, 1e-12 * hs_norm(t))) {
      throw DomainError("verify symmetric: input tensor is not symmetric");
    }
    const SolverConfig cfg = detail::sample_config(spec, seed);
    const SolveResult sym = solve_symmetric(t, cfg);
    const SolveResult gen = solve_general(t, cfg);
    const Certificate cs = certify(t, sym.approx, 1e-9);
    const Certificate cg = certify(t, gen.approx, 1e-9);
    Json r;
    r["sample"] = i;
    r["symmetric_value"] = sym.value;
    r["general_value"] = gen.value;
    r["value_gap"] = std::abs(std::abs(sym.value) - std::abs(gen.value));
    r["symmetric_certificate_ok"] = detail::certificate_ok(cs);
    r["general_certificate_ok"] = detail::certificate_ok(cg);
    r["cert_gap"] = std::max(cs.cert_gap, cg.cert_gap);
    double gap = r["value_gap"].get<double>();
    bool pass = r["symmetric_certificate_ok"].get<bool>() && r["general_certificate_ok"].get<bool>();
    if (t.extent(0) == 2 && t.order() >= 2) {
      ++n2;
      const auto pts = enumerate_critical_points(t);
      double emax = 0.0;
      for (const auto& p : pts) emax = std::max(emax, std::abs(p.value));
      const auto g = genericity_check(pts, t.order());
      r["enumeration_max"] = emax;
      r["symmetric_enum_gap"] = std::abs(std::abs(sym.value) - emax);
      r["general_enum_gap"] = std::abs(std::abs(gen.value) - emax);
      r["uniqueness_gap"] = g.uniqueness_gap;
      r["nongeneric"] = !g.distinct_values;
      generic += g.distinct_values;
      gap = std::max({gap, r["symmetric_enum_gap"].get<double>(), r["general_enum_gap"].get<double>()});
    }
    r["tol"] = tol;
    pass = pass && gap <= tol;
    max_gap = std::max(max_gap, gap);
    r["pass"] = pass;
    rep.samples.push_back(std::move(r));
  }
  rep.exhaustive = n2 == rep.samples.size();
  rep.aggregate["max_gap"] = max_gap;
  if (n2 > 0) rep.aggregate["generic_fraction"] = double(generic) / double(n2);
  rep.wall_ms = clock.ms();
  return rep;
}

// Tied-block optimum against the free optimum on tensors symmetric with
// respect to a partition of the modes.
inline VerifyReport run_verify_partial_symmetry(const ExperimentSpec& spec) {
  spec.validate();
  detail::Stopwatch clock;
  VerifyReport rep;
  rep.spec = spec;
  const double tol = spec.tol("value");
  const int count = spec.input ? 1 : spec.samples;
  double max_gap = 0.0;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = detail::sample_seed(spec.seed, static_cast<std::size_t>(i));
    ModePartition part = spec.partition ? *spec.partition
                       : spec.input     ? symmetric_decomposition(*spec.input, 1e-12 * hs_norm(*spec.input))
                                        : ModePartition(spec.d, {{0, 1}, [&] {
                                            ModeSet rest;
                                            for (std::size_t m = 2; m < spec.d; ++m) rest.push_back(m);
                                            return rest;
                                          }()});
    Tensor t = spec.input ? *spec.input : symmetrize(Rng(seed).gaussian_tensor(Shape(spec.d, spec.n)), part);
    if (part.order() != t.order()) throw DomainError("partition order differs from the tensor order");
    const SolverConfig cfg = detail::sample_config(spec, seed);
    const SolveResult free = solve_general(t, cfg);
    const SolveResult tied = solve_tied(t, part, cfg);
    const Certificate cf = certify(t, free.approx, 1e-9);
    const Certificate ct = certify(t, tied.approx, 1e-9);
    Json r;
    r["sample"] = i;
    r["partition"] = to_json(part);
    r["free_value"] = free.value;
    r["tied_value"] = tied.value;
    r["value_gap"] = std::abs(std::abs(free.value) - std::abs(tied.value));
    r["free_certificate_ok"] = detail::certificate_ok(cf);
    r["tied_certificate_ok"] = detail::certificate_ok(ct);
    r["tol"] = tol;
    const double gap = r["value_gap"].get<double>();
    max_gap = std::max(max_gap, gap);
    r["pass"] = gap <= tol && r["free_certificate_ok"].get<bool>() && r["tied_certificate_ok"].get<bool>();
    rep.samples.push_back(std::move(r));
  }
  rep.exhaustive = false;
  rep.aggregate["max_gap"] = max_gap;
  rep.wall_ms = clock.ms();
  return rep;
}

// Traceless-slice tensors T (the exceptional family for d = 3) perturbed
// to T + eps S with S = e1^d: symmetric optima at every eps, their value
// gap to the optimum of T shrinking with eps, and the limit point being an
// optimum of T. Also checks the first-order eigenpair formula on every
// simple real solution of T x^{d-1} = x.
inline VerifyReport run_verify_perturbation(const ExperimentSpec& spec) {
  spec.validate();
  detail::Stopwatch clock;
  VerifyReport rep;
  rep.spec = spec;
  const double tol = spec.tol("value");
  const double sens_tol = spec.tol("sensitivity");
  const int count = spec.input || spec.theta ? 1 : spec.samples;
  std::vector<double> eps = spec.eps_list;
  std::sort(eps.rbegin(), eps.rend());
  double worst_sens = 0.0;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = detail::sample_seed(spec.seed, static_cast<std::size_t>(i));
    Tensor t;
    if (spec.input) {
      t = *spec.input;
    } else if (spec.theta) {
      t = detail::traceless_form(spec.d, std::cos(*spec.theta), std::sin(*spec.theta));
    } else {
      Rng rng(seed);
      const double a = rng.gaussian(), b = rng.gaussian();
      t = detail::traceless_form(spec.d, a, b);
    }
    const std::size_t d = t.order();
    Vector e1(t.extent(0), 0.0);
    e1[0] = 1.0;
    const Tensor s = power(e1, d);
    double best = 0.0;
    for (const auto& p : enumerate_critical_points(t)) best = std::max(best, std::abs(p.value));

    Json r;
    r["sample"] = i;
    r["traceless"] = slice_traces(t).all_traceless;
    r["best_value"] = best;
    Json values = Json::array(), gaps = Json::array(), sym_ok = Json::array();
    std::vector<double> gap_seq;
    std::optional<CriticalPoint> last;
    bool all_sym = true;
    bool general_converged = true;
    for (double e : eps) {
      const Tensor te = t + e * s;
      std::optional<CriticalPoint> top;
      for (const auto& p : enumerate_critical_points(te)) {
        if (!top || std::abs(p.value) > std::abs(top->value)) top = p;
      }
      if (!top) throw DegenerateError("verify perturbation: no critical points");
      // The symmetric optimum must not be beaten by the unconstrained
      // multi-start value. An unconverged run still gives a lower bound.
      SolverConfig cfg = detail::sample_config(spec, seed);
      cfg.max_iters = 2000;
      const SolveResult gen = solve_general(te, cfg);
      general_converged = general_converged && gen.converged;
      const bool ok = std::abs(top->value) >= std::abs(gen.value) - tol;
      all_sym = all_sym && ok;
      values.push_back(top->value);
      gap_seq.push_back(std::abs(std::abs(top->value) - best));
      gaps.push_back(gap_seq.back());
      sym_ok.push_back(ok);
      last = top;
    }
    bool shrinking = true;
    for (std::size_t k = 1; k < gap_seq.size(); ++k) {
      if (gap_seq[k] > gap_seq[k - 1] + 1e-14) shrinking = false;
    }
    r["values_by_eps"] = values;
    r["value_gaps_by_eps"] = gaps;
    r["symmetric_optimum_by_eps"] = sym_ok;
    r["gaps_shrinking"] = shrinking;
    r["general_converged"] = general_converged;
    double limit_gap = INFINITY;
    if (last) {
      const double v = multilinear(t, std::vector<Vector>(d, last->point.coords()));
      limit_gap = std::abs(std::abs(v) - best);
      r["limit_point"] = last->point.coords();
      r["limit_value"] = v;
    }
    r["limit_gap"] = limit_gap;

    // First-order eigenpair check along the same direction S.
    double sens = 0.0;
    int checked = 0;
    const CensusReport census = eigenpair_census(t);
    for (const auto& sol : census.solutions) {
      if (sol.system_sign != 1 || !sol.is_real() || sol.multiple) continue;
      try {
        const PerturbationCheck c = eigenpair_sensitivity(t, s, sol);
        sens = std::max(sens, c.rel_error);
        ++checked;
      } catch (const DegenerateError&) {
        // Not simple at this tolerance; skipped and counted below.
      }
    }
    r["sensitivity_checked"] = checked;
    r["sensitivity_max_rel_error"] = sens;
    r["tol"] = tol;
    r["sensitivity_tol"] = sens_tol;
    worst_sens = std::max(worst_sens, sens);
    r["pass"] = all_sym && shrinking && limit_gap <= tol && sens <= sens_tol;
    rep.samples.push_back(std::move(r));
  }
  rep.exhaustive = true;
  rep.aggregate["max_sensitivity_rel_error"] = worst_sens;
  rep.wall_ms = clock.ms();
  return rep;
}

inline VerifyReport run_verify(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::verify_symmetric: return run_verify_symmetric(spec);
    case ExperimentKind::verify_partial_symmetry: return run_verify_partial_symmetry(spec);
    case ExperimentKind::verify_perturbation: return run_verify_perturbation(spec);
    default: throw DomainError("run_verify: not a verify experiment");
  }
}

}  // namespace rank1

#endif  // RANK1_VERIFY_HPP

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rank1/rank1.hpp"

namespace {

using namespace rank1;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;
constexpr int kInconclusive = 3;

struct Options {
  std::string in;
  std::string out;
  std::uint64_t seed = 0;
  int samples = 100;
  int restarts = 32;
  std::optional<double> tol;
  std::size_t n = 2;
  std::size_t d = 3;
  std::optional<double> theta;
  std::string eps_list;
  std::string partition;
  double eps = 0.0;
  bool symmetric = false;
  bool no_timing = false;
  bool solutions = false;
};

// "1,2|3" -> {{0,1},{2}}
ModePartition parse_partition(const std::string& text, std::size_t d) {
  std::vector<ModeSet> blocks;
  std::stringstream outer(text);
  std::string block;
  while (std::getline(outer, block, '|')) {
    ModeSet b;
    std::stringstream inner(block);
    std::string mode;
    while (std::getline(inner, mode, ',')) {
      std::size_t pos = 0;
      long v = 0;
      try {
        v = std::stol(mode, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || v < 1) throw DomainError("bad mode '" + mode + "' in partition '" + text + "'");
      b.push_back(static_cast<std::size_t>(v - 1));
    }
    blocks.push_back(b);
  }
  return ModePartition(d, blocks);
}

std::vector<double> parse_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) throw DomainError("bad number '" + item + "' in list");
    out.push_back(v);
  }
  return out;
}

Tensor load_input(const Options& o) {
  if (!o.in.empty()) return read_tensor_file(o.in);
  if (o.theta) return family_tensor({*o.theta, 1.0});
  throw DomainError("no input: pass --in PATH or --theta");
}

std::string vec_string(const Vector& v) {
  std::string s = "(";
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.10g", i ? ", " : "", v[i]);
    s += buf;
  }
  return s + ")";
}

Json spec_echo(const std::string& kind, const Options& o) {
  Json j;
  j["kind"] = kind;
  j["input"] = o.in.empty() ? Json(nullptr) : Json(o.in);
  j["theta"] = o.theta ? Json(*o.theta) : Json(nullptr);
  return j;
}

void emit(const Options& o, const Json& report) {
  if (o.out.empty()) return;
  std::ofstream f(o.out);
  if (!f) throw DomainError("cannot write " + o.out);
  f << report.dump(2) << "\n";
}

Json single_report(Json spec, Json record, double ms, const Options& o) {
  Json j;
  j["spec"] = std::move(spec);
  j["samples"] = Json::array({std::move(record)});
  j["aggregate"] = Json::object();
  j["wall_ms"] = o.no_timing ? Json(nullptr) : Json(ms);
  return j;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_approx(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tensor t = load_input(o);
  SolverConfig cfg;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  if (o.tol) cfg.tol = *o.tol;
  SolveResult r;
  std::string mode = "general";
  if (!o.partition.empty()) {
    r = solve_tied(t, parse_partition(o.partition, t.order()), cfg);
    mode = "tied " + o.partition;
  } else if (o.symmetric) {
    r = solve_symmetric(t, cfg);
    mode = "symmetric";
  } else {
    r = solve_general(t, cfg);
  }
  const Certificate c = certify(t, r.approx, 10 * cfg.tol);
  std::printf("mode        %s\n", mode.c_str());
  std::printf("value       %.12g\n", r.value);
  for (std::size_t m = 0; m < r.approx.factors.size(); ++m) {
    std::printf("factor %-4zu %s\n", m + 1, vec_string(r.approx.factors[m].coords()).c_str());
  }
  std::printf("residual    %.3e\n", r.residual);
  std::printf("iterations  %d (restart %d)\n", r.iterations, r.restart_index);
  std::printf("pythagoras  %.3e\n", c.pythagoras_gap);
  std::printf("cert_gap    %.3e\n", c.cert_gap);
  std::printf("stationary  %s\n", c.is_stationary ? "yes" : "no");

  Json spec = spec_echo("approx", o);
  spec["mode"] = mode;
  spec["restarts"] = o.restarts;
  spec["seed"] = o.seed;
  spec["tol"] = cfg.tol;
  Json rec = to_json(r);
  rec.erase("approx");
  rec["factors"] = to_json(r.approx)["factors"];
  rec["is_stationary"] = c.is_stationary;
  rec["pythagoras_gap"] = c.pythagoras_gap;
  rec["cert_gap"] = c.cert_gap;
  rec["pass"] = c.is_stationary;
  emit(o, single_report(spec, rec, elapsed_ms(t0), o));
  return c.is_stationary ? kOk : kFailed;
}

int cmd_enum(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tensor t = load_input(o);
  const auto pts = enumerate_critical_points(t);
  const auto g = genericity_check(pts, t.order());
  std::printf("%-4s %-14s %-30s %-16s %s\n", "#", "angle", "point", "value", "residual");
  Json list = Json::array();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& p = pts[k];
    std::printf("%-4zu %-14.10f %-30s %-16.12g %.2e\n", k + 1, p.angle, vec_string(p.point.coords()).c_str(),
                p.value, p.residual);
    list.push_back(to_json(p));
  }
  std::printf("points %zu, classes %zu, uniqueness gap %.3e%s\n", pts.size(), g.classes, g.uniqueness_gap,
              g.distinct_values ? "" : ", nongeneric");
  Json rec;
  rec["count"] = pts.size();
  rec["classes"] = g.classes;
  rec["uniqueness_gap"] = g.uniqueness_gap;
  rec["nongeneric"] = !g.distinct_values;
  rec["pairing_ok"] = g.pairing_ok;
  rec["points"] = list;
  rec["pass"] = g.pairing_ok;
  emit(o, single_report(spec_echo("enum-critical", o), rec, elapsed_ms(t0), o));
  return kOk;
}

int cmd_census(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tensor t = load_input(o);
  const CensusReport r = eigenpair_census(t);
  std::printf("d                %zu\n", r.d);
  std::printf("complex_count    %zu (bound %zu)\n", r.complex_count, r.bound_complex);
  if (r.d % 2 == 0) std::printf("complex_count -x %zu\n", r.complex_count_neg);
  std::printf("real positive    %zu\n", r.real_count_pos);
  std::printf("real negative    %zu\n", r.real_count_neg);
  std::printf("real bound       %zu%s\n", r.bound_real, r.d % 2 == 0 ? " (both systems)" : "");
  std::printf("conclusive       %s\n", r.conclusive ? "yes" : "no");
  std::printf("bounds           %s\n", !r.bounds_satisfied ? "unknown" : *r.bounds_satisfied ? "satisfied" : "VIOLATED");
  std::printf("uniqueness gap   %.3e\n", r.uniqueness_gap);
  if (!r.distinct_critical_values) std::printf("nongeneric\n");
  Json rec = to_json(r, o.solutions);
  rec["nongeneric"] = !r.distinct_critical_values;
  rec["pass"] = r.bounds_satisfied.value_or(false);
  emit(o, single_report(spec_echo("census", o), rec, elapsed_ms(t0), o));
  if (!r.conclusive) return kInconclusive;
  return *r.bounds_satisfied ? kOk : kFailed;
}

int cmd_detect_family(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tensor t = load_input(o);
  const SliceTraceReport tr = slice_traces(t);
  const auto p = detect_family(t);
  std::printf("max |slice trace| %.3e\n", tr.max_abs_trace);
  Json rec;
  rec["max_abs_trace"] = tr.max_abs_trace;
  rec["member"] = p.has_value();
  if (p) {
    std::printf("member  theta %.12g  scale %.12g\n", p->theta, p->scale);
    rec["theta"] = p->theta;
    rec["scale"] = p->scale;
  } else {
    std::printf("not a member\n");
  }
  rec["pass"] = true;
  emit(o, single_report(spec_echo("detect-family", o), rec, elapsed_ms(t0), o));
  return kOk;
}

int cmd_symdecomp(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tensor t = load_input(o);
  const ModePartition p = symmetric_decomposition(t, o.eps);
  const Json blocks = to_json(p);
  std::printf("blocks %s\n", blocks.dump().c_str());
  Json spec = spec_echo("symdecomp", o);
  spec["eps"] = o.eps;
  Json rec;
  rec["blocks"] = blocks;
  rec["pass"] = true;
  emit(o, single_report(spec, rec, elapsed_ms(t0), o));
  return kOk;
}

int cmd_verify(ExperimentKind kind, const Options& o) {
  ExperimentSpec s;
  s.kind = kind;
  s.n = o.n;
  s.d = o.d;
  s.samples = o.samples;
  s.seed = o.seed;
  s.restarts = o.restarts;
  s.theta = o.theta;
  if (o.tol) s.tolerances["value"] = *o.tol;
  if (!o.out.empty()) s.output_path = o.out;
  if (!o.in.empty()) {
    s.input = read_tensor_file(o.in);
    s.input_path = o.in;
    s.n = s.input->extent(0);
    s.d = s.input->order();
  }
  if (!o.partition.empty()) s.partition = parse_partition(o.partition, s.d);
  if (!o.eps_list.empty()) s.eps_list = parse_csv(o.eps_list);
  const VerifyReport r = run_verify(s);
  std::printf("%-8s %-6s %s\n", "sample", "pass", "gap");
  for (const auto& rec : r.samples) {
    double gap = 0.0;
    for (const char* key : {"value_gap", "general_enum_gap", "symmetric_enum_gap", "limit_gap"}) {
      if (rec.contains(key)) gap = std::max(gap, rec.at(key).get<double>());
    }
    std::printf("%-8d %-6s %.3e\n", rec.at("sample").get<int>(), rec.at("pass").get<bool>() ? "yes" : "NO", gap);
  }
  std::printf("passed %zu/%zu (%.1f%%)%s\n", r.passed(), r.samples.size(), 100.0 * r.pass_rate(),
              r.exhaustive ? ", exhaustive" : ", multi-start evidence");
  emit(o, r.to_json(!o.no_timing));
  return r.all_pass() ? kOk : kFailed;
}

void add_input(CLI::App* c, Options& o) {
  c->add_option("--in", o.in, "tensor file");
  c->add_option("--theta", o.theta, "use the exceptional family tensor at this angle");
  c->add_option("--out", o.out, "JSON report path");
  c->add_flag("--no-timing", o.no_timing, "write wall_ms as null");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best rank-one approximation of real tensors"};
  app.require_subcommand(1);
  Options o;

  auto* approx = app.add_subcommand("approx", "best rank-one approximation by multi-start HOPM");
  add_input(approx, o);
  approx->add_option("--restarts", o.restarts)->check(CLI::PositiveNumber);
  approx->add_option("--seed", o.seed);
  approx->add_option("--tol", o.tol, "stationarity tolerance relative to ||T||")->check(CLI::PositiveNumber);
  approx->add_flag("--symmetric", o.symmetric, "tie all factors");
  approx->add_option("--partition", o.partition, "tie factors within blocks, e.g. 1,2|3");

  auto* enumerate = app.add_subcommand("enum", "all critical points on the circle (binary symmetric tensors)");
  add_input(enumerate, o);

  auto* census = app.add_subcommand("census", "complex and real eigenpair counts (binary symmetric tensors)");
  add_input(census, o);
  census->add_flag("--solutions", o.solutions, "include every solution in the JSON");

  auto* detect = app.add_subcommand("detect-family", "test for the traceless binary cubic family");
  add_input(detect, o);

  auto* symdecomp = app.add_subcommand("symdecomp", "maximal blocks of modes the tensor is symmetric in");
  add_input(symdecomp, o);
  symdecomp->add_option("--eps", o.eps, "absolute entry tolerance")->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "seeded verification experiments");
  verify->require_subcommand(1);
  std::vector<std::pair<CLI::App*, ExperimentKind>> verifiers;
  for (auto [name, kind] : {std::pair{"symmetric", ExperimentKind::verify_symmetric},
                            std::pair{"partial-symmetry", ExperimentKind::verify_partial_symmetry},
                            std::pair{"perturbation", ExperimentKind::verify_perturbation}}) {
    auto* v = verify->add_subcommand(name);
    add_input(v, o);
    v->add_option("--n", o.n)->check(CLI::PositiveNumber);
    v->add_option("--d", o.d)->check(CLI::PositiveNumber);
    v->add_option("--samples", o.samples);
    v->add_option("--seed", o.seed);
    v->add_option("--restarts", o.restarts);
    v->add_option("--tol", o.tol, "pass threshold on value gaps")->check(CLI::PositiveNumber);
    v->add_option("--partition", o.partition, "e.g. 1,2|3");
    v->add_option("--eps-list", o.eps_list, "comma separated");
    verifiers.emplace_back(v, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*approx) return cmd_approx(o);
    if (*enumerate) return cmd_enum(o);
    if (*census) return cmd_census(o);
    if (*detect) return cmd_detect_family(o);
    if (*symdecomp) return cmd_symdecomp(o);
    for (const auto& [v, kind] : verifiers) {
      if (*v) return cmd_verify(kind, o);
    }
  } catch (const rank1::DegenerateError& e) {
    std::fprintf(stderr, "degenerate: %s\n", e.what());
    return kInconclusive;
  } catch (const rank1::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}

#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "CLI11.hpp"
#include "vreach/corpus.hpp"
#include "vreach/montecarlo.hpp"

namespace vreach::cli {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct VerifyOpts {
  std::string model;
  SolverConfig cfg;
  double timeout = 0;
  std::string json;
  bool verbose = false;
};

struct McOpts {
  std::string model;
  MCConfig cfg;
};

struct BenchOpts {
  std::string dir = VREACH_MODELS_DIR;
  std::vector<std::string> names{"T2"};
  SolverConfig cfg;
  double timeout = 0;
  bool mc_sizes = true;
};

void add_solver_flags(CLI::App* app, SolverConfig& cfg, double& timeout) {
  app->add_option("-t,--threads", cfg.workers, "Number of worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("-k,--depth", cfg.k, "Reachability depth (maximum number of jumps)")->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("--delta", cfg.delta, "Precision delta of the reachability check")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--ode-order", cfg.reach.taylor_order, "Taylor order of the ODE enclosure")->capture_default_str()->check(CLI::Range(1, 30));
  app->add_option("--ode-step", cfg.reach.max_step, "Largest ODE enclosure step")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--tsplit", cfg.t, "Share t of epsilon spent on the distribution tails")->capture_default_str();
  app->add_option("--timeout", timeout, "Stop after this many seconds with a sound, wider enclosure")->check(CLI::PositiveNumber);
  app->add_option("--min-width", cfg.min_cell_width, "Smallest width of a bisected cell (0 = automatic)")->capture_default_str();
  app->add_option("--split-target", cfg.split_target, "Pre-bisect rounds with fewer mixed cells up to this count")->capture_default_str();
}

int do_verify(VerifyOpts& o, std::ostream& out) {
  if (o.timeout > 0) o.cfg.timeout = o.timeout;
  const HybridModel model = parse_file(o.model);
  RunRecord rec;
  rec.model = o.model;
  rec.epsilon = o.cfg.epsilon;
  const auto res = solve(model, o.cfg, [&](const ProgressEvent& e) {
    rec.events.push_back(e);
    if (o.verbose)
      out << fmt("%.3fs ", e.elapsed_s) << "[" << fmt("%.17g", e.p_lower) << ", " << fmt("%.17g", e.p_upper)
          << "] cells done " << e.cells_done << ", pending " << e.cells_pending << "\n";
  });
  rec.result = {res.reported.lo(), res.reported.hi(), res.complete};
  out << "P in [" << fmt("%.17g", res.reported.lo()) << ", " << fmt("%.17g", res.reported.hi()) << "]\n";
  out << "width " << fmt("%.3g", width(res.reported)) << ", epsilon " << fmt("%g", o.cfg.epsilon) << ", "
      << (res.complete ? "complete" : "incomplete") << "\n";
  if (o.verbose) {
    out << "cells classified " << res.stats.classified << " (zero " << res.stats.zero << ", one " << res.stats.one
        << ", mixed " << res.stats.mixed << "), rounds " << res.stats.rounds << "\n";
  }
  if (res.timed_out) out << "stopped by timeout\n";
  if (!res.stuck.empty()) out << res.stuck.size() << " mixed cells left at the width floor\n";
  for (const auto& w : res.stats.warnings) out << "warning: " << w << "\n";
  if (!o.json.empty()) emit_json(rec, o.json);
  return res.complete ? 0 : 2;
}

int do_mc(McOpts& o, std::ostream& out) {
  const HybridModel model = parse_file(o.model);
  const std::uint64_t n = chernoff_size(o.cfg.zeta, o.cfg.confidence);
  out << "N = " << n << "\n";
  const MCResult r = estimate(model, o.cfg);
  out << "p = " << fmt("%.10g", r.p_hat) << " (" << r.successes << " of " << r.n_used << ")\n";
  out << "CI [" << fmt("%.10g", r.ci.lo()) << ", " << fmt("%.10g", r.ci.hi()) << "] at confidence "
      << fmt("%g", o.cfg.confidence) << "\n";
  return 0;
}

int do_bench(BenchOpts& o, std::ostream& out) {
  if (o.timeout > 0) o.cfg.timeout = o.timeout;
  const auto all = models(o.dir);
  bool all_complete = true;
  char line[512];
  std::snprintf(line, sizeof line, "%-14s %2s %8s  %-45s %-10s %-41s %-20s %8s\n", "row", "k", "eps", "enclosure",
                "width", "published", "oracle", "time_s");
  out << line;
  for (const auto& name : o.names) {
    const auto& spec = find_model(all, name);
    for (const auto& row : spec.rows) {
      SolverConfig cfg = o.cfg;
      cfg.k = row.k;
      const auto t0 = std::chrono::steady_clock::now();
      const auto res = solve(parse_file(spec.path(row)), cfg);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      all_complete = all_complete && res.complete;
      const std::string enc = "[" + fmt("%.12g", res.reported.lo()) + ", " + fmt("%.12g", res.reported.hi()) + "]";
      const std::string published = "[" + row.lo_text + ", " + row.hi_text + "]";
      std::string oracle = "-";
      if (row.oracle) oracle = fmt("%.12g", *row.oracle) + (res.reported.contains(*row.oracle) ? " in" : " OUT");
      std::snprintf(line, sizeof line, "%-14s %2d %8g  %-45s %-10.3g %-41s %-20s %8.2f%s\n", row.label.c_str(), row.k,
                    cfg.epsilon, enc.c_str(), width(res.reported), published.c_str(), oracle.c_str(), dt,
                    res.complete ? "" : " incomplete");
      out << line;
    }
    if (o.mc_sizes) {
      for (const auto& mc : spec.monte_carlo) {
        const auto n = chernoff_size(mc.zeta, mc.confidence);
        out << "  MC " << mc.label << ": zeta " << fmt("%g", mc.zeta) << ", c " << fmt("%g", mc.confidence) << ", N "
            << n << (n == mc.samples ? " (matches published)" : " (published " + std::to_string(mc.samples) + ")") << "\n";
      }
    }
  }
  return all_complete ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verified probabilistic bounded reachability for hybrid systems with random parameters", "vreach"};
  app.set_version_flag("--version", std::string("vreach ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough(false);

  VerifyOpts v;
  auto* verify = app.add_subcommand("verify", "Enclose the reachability probability within epsilon");
  verify->add_option("model", v.model, "Model file (.pdrh)")->required();
  verify->add_option("-e,--epsilon", v.cfg.epsilon, "Target width of the probability enclosure")->capture_default_str();
  add_solver_flags(verify, v.cfg, v.timeout);
  verify->add_option("--json", v.json, "Write progress events and the result to this JSON file");
  verify->add_flag("--verbose", v.verbose, "Print progress events and statistics");

  McOpts m;
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate with a Chernoff-Hoeffding confidence interval");
  mc->add_option("model", m.model, "Model file (.pdrh)")->required();
  mc->add_option("--zeta", m.cfg.zeta, "Half-width of the confidence interval")->capture_default_str();
  mc->add_option("--conf", m.cfg.confidence, "Coverage probability of the confidence interval")->capture_default_str();
  mc->add_option("--seed", m.cfg.seed, "Random seed")->capture_default_str();
  mc->add_option("--step", m.cfg.step, "Simulation step")->capture_default_str()->check(CLI::PositiveNumber);
  mc->add_option("--max-samples", m.cfg.max_samples, "Refuse runs needing more samples than this")->capture_default_str();
  mc->add_option("-k,--depth", m.cfg.k, "Maximum number of jumps")->capture_default_str()->check(CLI::NonNegativeNumber);
  mc->add_option("-t,--threads", m.cfg.workers, "Number of worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  BenchOpts b;
  b.cfg.epsilon = 1e-4;
  auto* bench = app.add_subcommand("bench", "Run benchmark rows of the corpus and compare with published values");
  bench->add_option("--models-dir", b.dir, "Corpus directory containing expected.json")->capture_default_str();
  bench->add_option("--model", b.names, "Benchmark names (BB, T2, T4, CBB, IG)")->capture_default_str();
  bench->add_option("-e,--epsilon", b.cfg.epsilon, "Target width used for every row")->capture_default_str();
  add_solver_flags(bench, b.cfg, b.timeout);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  try {
    if (verify->parsed()) return do_verify(v, out);
    if (mc->parsed()) return do_mc(m, out);
    if (bench->parsed()) return do_bench(b, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace vreach::cli

#include <hybridvi/bench.hpp>
#include <hybridvi/problems.hpp>
#include <hybridvi/solvers.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

// 0 ok, 2 config error, 3 parse error, 4 iteration cap, 5 numerical breakdown
constexpr int kOk = 0, kOther = 1, kConfig = 2, kParse = 3, kMaxIter = 4, kBreakdown = 5;

int status_code(vi::SolveStatus s) {
  switch (s) {
    case vi::SolveStatus::converged: return kOk;
    case vi::SolveStatus::max_iter_exceeded: return kMaxIter;
    case vi::SolveStatus::numerical_breakdown: return kBreakdown;
  }
  return kOther;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("IOError: cannot open '" + path + "' for writing");
  out << text;
}

struct SolveFlags {
  std::string instance_path;
  std::string algorithm = "alg1";
  double lambda_frac = 0.25;
  double k = 3.0;
  double alpha = 0.5;
  double eps = 1e-3;
  int max_iter = 100000;
  double proj_tol = 0.0;  // 0 = default epsilon/10
  bool monitor = false;
  std::string trace_path;
  std::string out_path;
};

void add_config_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--lambda-frac", f.lambda_frac, "step size as a fraction of 1/L")
      ->capture_default_str();
  cmd->add_option("--k", f.k, "expansion parameter (alg1)")->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "averaging weight in [0,1) (alg3)")->capture_default_str();
  cmd->add_option("--eps", f.eps, "termination tolerance on the natural residual")
      ->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "iteration cap")->capture_default_str();
  cmd->add_option("--proj-tol", f.proj_tol, "inner projection tolerance (default eps/10)");
}

vi::SolverConfig make_config(const SolveFlags& f, double L) {
  vi::SolverConfig cfg;
  cfg.lambda = f.lambda_frac / L;
  cfg.k = f.k;
  cfg.alpha = f.alpha;
  cfg.epsilon = f.eps;
  cfg.max_iter = f.max_iter;
  if (f.proj_tol > 0.0) cfg.proj_tol = f.proj_tol;
  return cfg;
}

int cmd_generate(const std::string& family, int dim, int n_constraints, std::uint64_t seed,
                 const std::string& out_path) {
  vi::ProblemInstance inst;
  if (family == "polytope" || family == "polytope_translation") {
    inst = vi::gen_polytope_translation(dim, n_constraints, seed);
  } else if (family == "hphard") {
    inst = vi::gen_hphard(dim, seed);
  } else {
    std::cerr << "unknown family '" << family << "' (expected polytope | hphard)\n";
    return kConfig;
  }
  vi::save_instance_file(inst, out_path);
  std::printf("%s L=%.17g\n", inst.instance_id.c_str(), inst.L);
  return kOk;
}

int cmd_solve(const SolveFlags& f) {
  const auto alg = vi::algorithm_from_name(f.algorithm);
  if (!alg) {
    std::cerr << "unknown algorithm '" << f.algorithm << "' (expected alg1 | alg3 | alg4)\n";
    return kConfig;
  }
  vi::ProblemInstance inst = vi::load_instance_file(f.instance_path);
  vi::SolveOptions options;
  options.want_trace = !f.trace_path.empty();
  if (f.monitor) {
    if (!inst.known_solution) {
      std::cerr << "config error: --monitor needs an instance with a known_solution\n";
      return kConfig;
    }
    options.monitor_solution = *inst.known_solution;
  }
  const vi::RunRecord rec = vi::solve(inst, *alg, make_config(f, inst.L), options);

  std::ostringstream os;
  os << "instance: " << inst.instance_id << "\n"
     << "algorithm: " << vi::algorithm_name(rec.algorithm) << "\n"
     << "status: " << vi::solve_status_name(rec.status) << "\n"
     << "iterations: " << rec.iterations << "\n"
     << "op_evals: " << rec.counters.op_evals << " (+" << rec.counters.check_op_evals
     << " in termination checks)\n"
     << "projections: " << rec.counters.projections << " (+" << rec.counters.check_projections
     << " in termination checks)\n"
     << "halfspace_projections: " << rec.counters.halfspace_projections << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", rec.wall_seconds);
  os << "wall_seconds: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.6e", rec.final_residual);
  os << "final_residual: " << buf << "\n";
  if (rec.monitor)
    os << "monitor_violations: " << rec.monitor->total_violations() << "\n";
  if (!rec.note.empty()) os << "note: " << rec.note << "\n";
  std::cout << os.str();
  if (!f.out_path.empty()) write_text(f.out_path, os.str());

  if (!f.trace_path.empty()) {
    std::ostringstream ts;
    ts << "n,residual,anchor_dist,z_gap\n";
    char line[128];
    for (const auto& t : rec.trace) {
      std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g", t.n, t.residual, t.anchor_dist,
                    t.z_gap);
      ts << line << "\n";
    }
    write_text(f.trace_path, ts.str());
  }
  return status_code(rec.status);
}

int cmd_compare(const std::string& suite_path, const std::vector<std::string>& instances,
                const std::vector<std::string>& algorithms, const SolveFlags& f,
                const std::string& format_name, int jobs, bool monitor,
                const std::string& out_path) {
  vi::BenchSuite suite;
  if (!suite_path.empty()) {
    suite = vi::load_suite_file(suite_path);
  } else {
    if (instances.empty()) throw CLI::ValidationError("compare", "no --suite and no --instances");
    for (const auto& path : instances)
      for (const auto& name : algorithms) {
        const auto alg = vi::algorithm_from_name(name);
        if (!alg) {
          std::cerr << "unknown algorithm '" << name << "'\n";
          return kConfig;
        }
        vi::BenchJob job;
        job.instance_path = path;
        job.algorithm = *alg;
        job.lambda_frac = f.lambda_frac;
        job.config.k = f.k;
        job.config.alpha = f.alpha;
        job.config.epsilon = f.eps;
        job.config.max_iter = f.max_iter;
        if (f.proj_tol > 0.0) job.config.proj_tol = f.proj_tol;
        job.monitor = monitor;
        suite.jobs.push_back(std::move(job));
      }
  }
  if (!format_name.empty()) {
    if (format_name == "csv") suite.format = vi::TableFormat::csv;
    else if (format_name == "markdown") suite.format = vi::TableFormat::markdown;
    else if (format_name == "json") suite.format = vi::TableFormat::json;
    else {
      std::cerr << "unknown format '" << format_name << "'\n";
      return kConfig;
    }
  }

  const auto results = vi::run_suite(suite, jobs);
  const std::string table = vi::render_table(results, suite.format, true);
  std::cout << table;
  if (!out_path.empty()) write_text(out_path, table);

  for (const auto& r : results) {
    if (!r.ran) return r.error_code == 0 ? kOther : r.error_code;
    if (r.record.status != vi::SolveStatus::converged) return status_code(r.record.status);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational-inequality solver benchmark harness"};
  app.require_subcommand(1);

  std::string family, out_path;
  int dim = 5, n_constraints = 10;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("generate", "generate a seeded problem instance");
  gen->add_option("--family", family, "polytope | hphard")->required();
  gen->add_option("--dim", dim, "problem dimension")->required();
  gen->add_option("--n-constraints", n_constraints, "polytope constraint count")
      ->capture_default_str();
  gen->add_option("--seed", seed, "generator seed")->capture_default_str();
  gen->add_option("--out", out_path, "output instance path")->required();

  SolveFlags sf;
  auto* slv = app.add_subcommand("solve", "run one algorithm on one instance");
  slv->add_option("--instance", sf.instance_path, "instance file")->required();
  slv->add_option("--algorithm", sf.algorithm, "alg1 | alg3 | alg4")->capture_default_str();
  add_config_flags(slv, sf);
  slv->add_flag("--monitor", sf.monitor, "check per-iteration invariants against known_solution");
  slv->add_option("--trace", sf.trace_path, "write a per-iteration trace CSV here");
  slv->add_option("--out", sf.out_path, "also write the report here");

  SolveFlags cf;
  std::string suite_path, format_name, compare_out;
  std::vector<std::string> instances;
  std::vector<std::string> algorithms = {"alg1", "alg3", "alg4"};
  int jobs = 1;
  bool compare_monitor = false;
  auto* cmp = app.add_subcommand("compare", "run a suite and render a results table");
  cmp->add_option("--suite", suite_path, "suite JSON file");
  cmp->add_option("--instances", instances, "instance files (cross product with --algorithms)");
  cmp->add_option("--algorithms", algorithms, "algorithms for the cross product")
      ->capture_default_str();
  add_config_flags(cmp, cf);
  cmp->add_option("--format", format_name, "csv | markdown | json");
  cmp->add_option("--jobs", jobs, "worker threads across jobs (default sequential)")
      ->capture_default_str();
  cmp->add_flag("--monitor", compare_monitor, "enable invariant monitoring on every job");
  cmp->add_option("--out", compare_out, "also write the table here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(family, dim, n_constraints, seed, out_path);
    if (slv->parsed()) return cmd_solve(sf);
    if (cmp->parsed())
      return cmd_compare(suite_path, instances, algorithms, cf, format_name, jobs, compare_monitor,
                         compare_out);
  } catch (const vi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const vi::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}

#include <hybridvi/bench.hpp>

#include <json.hpp>

#include <Eigen/Core>

#include <atomic>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#if __has_include(<sys/utsname.h>)
#include <sys/utsname.h>
#define HYBRIDVI_HAVE_UTSNAME 1
#endif

namespace vi {

namespace {

using json = nlohmann::ordered_json;

TableFormat format_from_name(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "markdown") return TableFormat::markdown;
  if (name == "json") return TableFormat::json;
  throw ParseError("ParseError: unknown table format '" + name + "'");
}

std::string fmt_time(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", seconds);
  return buf;
}

std::string fmt_residual(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", r);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '|') ch = ';';
  return s;
}

struct Row {
  std::string instance, algorithm, iters, time, op_evals, residual;
};

Row make_row(const BenchResult& r) {
  Row row;
  row.instance = sanitize(r.instance_label);
  row.algorithm = algorithm_name(r.algorithm);
  if (r.ran) {
    row.iters = std::to_string(r.record.iterations);
    row.time = fmt_time(r.record.wall_seconds);
    row.op_evals = std::to_string(r.record.counters.op_evals);
    row.residual = fmt_residual(r.record.final_residual);
    if (r.record.status != SolveStatus::converged)
      row.residual += std::string(" (") + solve_status_name(r.record.status) + ")";
  } else {
    row.iters = row.time = row.op_evals = "-";
    row.residual = "failed: " + sanitize(r.error);
  }
  return row;
}

void run_one(const BenchJob& job, BenchResult& out) {
  out.instance_label = job.instance_label.empty() ? job.instance_path : job.instance_label;
  out.algorithm = job.algorithm;
  try {
    ProblemInstance inst = load_instance_file(job.instance_path);
    if (job.instance_label.empty()) out.instance_label = inst.instance_id;
    SolverConfig cfg = job.config;
    cfg.lambda = job.lambda_frac / inst.L;
    SolveOptions options;
    if (job.monitor) {
      if (!inst.known_solution)
        throw std::runtime_error("monitor requested but the instance has no known_solution");
      options.monitor_solution = *inst.known_solution;
    }
    out.record = solve(inst, job.algorithm, cfg, options);
    out.ran = true;
  } catch (const ConfigError& e) {
    out.ran = false;
    out.error = e.what();
    out.error_code = 2;
  } catch (const ParseError& e) {
    out.ran = false;
    out.error = e.what();
    out.error_code = 3;
  } catch (const std::exception& e) {
    out.ran = false;
    out.error = e.what();
    out.error_code = 1;
  }
}

}  // namespace

BenchSuite load_suite(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ParseError: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ParseError("ParseError: suite document must be an object");
    BenchSuite suite;
    suite.format = format_from_name(j.value("format", "csv"));
    if (!j.contains("jobs") || !j["jobs"].is_array() || j["jobs"].empty())
      throw ParseError("ParseError: suite needs a nonempty 'jobs' array");
    for (const auto& item : j["jobs"]) {
      BenchJob job;
      if (!item.contains("instance") || !item["instance"].is_string())
        throw ParseError("ParseError: every job needs an 'instance' path");
      job.instance_path = item["instance"].get<std::string>();
      const std::string alg = item.value("algorithm", "alg1");
      const auto parsed = algorithm_from_name(alg);
      if (!parsed) throw ParseError("ParseError: unknown algorithm '" + alg + "'");
      job.algorithm = *parsed;
      job.instance_label = item.value("label", "");
      job.monitor = item.value("monitor", false);
      if (item.contains("config")) {
        const json& c = item["config"];
        job.lambda_frac = c.value("lambda_frac", 0.25);
        job.config.k = c.value("k", 3.0);
        job.config.alpha = c.value("alpha", 0.5);
        job.config.epsilon = c.value("epsilon", 1e-3);
        job.config.max_iter = c.value("max_iter", 100000);
        if (c.contains("proj_tol")) job.config.proj_tol = c["proj_tol"].get<double>();
      }
      suite.jobs.push_back(std::move(job));
    }
    return suite;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ParseError: ") + e.what());
  }
}

BenchSuite load_suite_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("ParseError: cannot open suite file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_suite(ss.str());
}

std::vector<BenchResult> run_suite(const BenchSuite& suite, int n_threads) {
  std::vector<BenchResult> results(suite.jobs.size());
  if (n_threads <= 1 || suite.jobs.size() <= 1) {
    for (std::size_t i = 0; i < suite.jobs.size(); ++i) run_one(suite.jobs[i], results[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  const int workers = std::min<std::size_t>(n_threads, suite.jobs.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= suite.jobs.size()) return;
        run_one(suite.jobs[i], results[i]);
      }
    });
  for (auto& th : pool) th.join();
  return results;
}

std::string environment_header() {
  std::ostringstream os;
#if defined(__VERSION__)
  os << "# compiler: " << __VERSION__ << "\n";
#endif
#ifdef HYBRIDVI_HAVE_UTSNAME
  utsname u{};
  if (uname(&u) == 0) os << "# platform: " << u.sysname << " " << u.release << " " << u.machine
                         << "\n";
#endif
  os << "# eigen: " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
     << EIGEN_MINOR_VERSION << "\n";
  std::time_t now = std::time(nullptr);
  char buf[64];
  if (std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now)) > 0)
    os << "# date: " << buf << "\n";
  os << "# note: wall times are hardware-bound; iteration and evaluation counts are reproducible\n";
  return os.str();
}

std::string render_table(const std::vector<BenchResult>& results, TableFormat format,
                         bool with_env_header) {
  if (format == TableFormat::json) {
    json out = json::object();
    if (with_env_header) {
      json env = json::array();
      std::istringstream is(environment_header());
      for (std::string line; std::getline(is, line);)
        env.push_back(line.substr(line.rfind("# ", 0) == 0 ? 2 : 0));
      out["environment"] = std::move(env);
    }
    json rows = json::array();
    for (const auto& r : results) {
      json row = json::object();
      row["instance"] = r.instance_label;
      row["algorithm"] = algorithm_name(r.algorithm);
      if (r.ran) {
        row["status"] = solve_status_name(r.record.status);
        row["iterations"] = r.record.iterations;
        row["time_seconds"] = r.record.wall_seconds;
        row["op_evals"] = r.record.counters.op_evals;
        row["check_op_evals"] = r.record.counters.check_op_evals;
        row["projections"] = r.record.counters.projections;
        row["halfspace_projections"] = r.record.counters.halfspace_projections;
        row["residual"] = r.record.final_residual;
        if (r.record.monitor)
          row["monitor_violations"] = r.record.monitor->total_violations();
      } else {
        row["status"] = "failed";
        row["error"] = r.error;
      }
      rows.push_back(std::move(row));
    }
    out["rows"] = std::move(rows);
    return out.dump(2) + "\n";
  }

  std::ostringstream os;
  if (with_env_header) os << environment_header();
  if (format == TableFormat::csv) {
    os << "instance,algorithm,Iter.,Time,op_evals,residual\n";
    for (const auto& r : results) {
      const Row row = make_row(r);
      os << row.instance << ',' << row.algorithm << ',' << row.iters << ',' << row.time << ','
         << row.op_evals << ',' << row.residual << '\n';
    }
  } else {
    os << "| instance | algorithm | Iter. | Time | op_evals | residual |\n";
    os << "| --- | --- | --- | --- | --- | --- |\n";
    for (const auto& r : results) {
      const Row row = make_row(r);
      os << "| " << row.instance << " | " << row.algorithm << " | " << row.iters << " | "
         << row.time << " | " << row.op_evals << " | " << row.residual << " |\n";
    }
  }
  return os.str();
}

}  // namespace vi

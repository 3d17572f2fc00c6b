#pragma once

#include <hybridvi/solvers.hpp>
#include <hybridvi/types.hpp>

#include <string>
#include <vector>

namespace vi {

enum class TableFormat { csv, markdown, json };

struct BenchJob {
  std::string instance_path;
  std::string instance_label;  // defaults to the instance_id on load
  Algorithm algorithm = Algorithm::alg1;
  // lambda is resolved per instance as lambda_frac / L; the remaining config
  // fields are taken verbatim.
  double lambda_frac = 0.25;
  SolverConfig config;
  bool monitor = false;
};

struct BenchSuite {
  std::vector<BenchJob> jobs;
  TableFormat format = TableFormat::csv;
};

struct BenchResult {
  std::string instance_label;
  Algorithm algorithm = Algorithm::alg1;
  bool ran = false;      // false when the job failed before/inside the solver
  std::string error;     // diagnostic for failed jobs
  int error_code = 0;    // 2 config, 3 parse, 1 other (failed jobs only)
  RunRecord record;
};

// Suite document: {"format": "csv", "jobs": [{"instance": path,
// "algorithm": "alg1", "config": {lambda_frac, k, alpha, epsilon, max_iter,
// proj_tol?}, "monitor"?: bool}, ...]}.  Unknown algorithms, empty job lists
// and malformed documents raise ParseError.
BenchSuite load_suite(const std::string& text);
BenchSuite load_suite_file(const std::string& path);

// Runs jobs in order; n_threads > 1 distributes jobs (never a single solve)
// across workers.  Row order always matches job order.
std::vector<BenchResult> run_suite(const BenchSuite& suite, int n_threads = 1);

// Columns: instance,algorithm,Iter.,Time,op_evals,residual.  The same value
// formatting backs every format, so tables agree across them.
std::string render_table(const std::vector<BenchResult>& results, TableFormat format,
                         bool with_env_header);

// "# ..." comment lines describing compiler, platform and date; prepended to
// tables because absolute timings are hardware-bound.
std::string environment_header();

}  // namespace vi

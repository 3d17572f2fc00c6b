#include <hybridvi/bench.hpp>
#include <hybridvi/problems.hpp>

#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

using namespace vi;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// markdown cells: "| a | b |" -> {"a", "b"}
std::vector<std::string> md_cells(const std::string& line) {
  std::vector<std::string> cells;
  for (std::string& cell : split(line, '|')) {
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    while (!cell.empty() && cell.back() == ' ') cell.pop_back();
    if (!cell.empty()) cells.push_back(cell);
  }
  return cells;
}

struct ScratchDir {
  std::filesystem::path path;
  explicit ScratchDir(const char* name) : path(name) {
    std::filesystem::create_directories(path);
  }
  std::string file(const char* base) const { return (path / base).string(); }
};

}  // namespace

TEST_CASE("load_suite applies documented defaults") {
  const BenchSuite suite = load_suite(R"({"jobs": [{"instance": "a.json"}]})");
  CHECK(suite.format == TableFormat::csv);
  REQUIRE(suite.jobs.size() == 1);
  CHECK(suite.jobs[0].instance_path == "a.json");
  CHECK(suite.jobs[0].algorithm == Algorithm::alg1);
  CHECK(suite.jobs[0].lambda_frac == 0.25);
  CHECK(suite.jobs[0].config.k == 3.0);
  CHECK(suite.jobs[0].config.alpha == 0.5);
  CHECK(suite.jobs[0].config.epsilon == 1e-3);
  CHECK(suite.jobs[0].config.max_iter == 100000);
  CHECK(!suite.jobs[0].config.proj_tol.has_value());
  CHECK(!suite.jobs[0].monitor);
  CHECK(suite.jobs[0].instance_label.empty());

  const BenchSuite full = load_suite(R"({
    "format": "markdown",
    "jobs": [{
      "instance": "b.json",
      "algorithm": "alg4",
      "label": "fbf on b",
      "monitor": true,
      "config": {"lambda_frac": 0.1, "k": 4.0, "alpha": 0.2, "epsilon": 1e-5,
                 "max_iter": 50, "proj_tol": 1e-8}
    }]
  })");
  CHECK(full.format == TableFormat::markdown);
  CHECK(full.jobs[0].algorithm == Algorithm::alg4);
  CHECK(full.jobs[0].instance_label == "fbf on b");
  CHECK(full.jobs[0].monitor);
  CHECK(full.jobs[0].lambda_frac == 0.1);
  CHECK(full.jobs[0].config.k == 4.0);
  CHECK(full.jobs[0].config.alpha == 0.2);
  CHECK(full.jobs[0].config.epsilon == 1e-5);
  CHECK(full.jobs[0].config.max_iter == 50);
  REQUIRE(full.jobs[0].config.proj_tol.has_value());
  CHECK(*full.jobs[0].config.proj_tol == 1e-8);
}

TEST_CASE("load_suite rejects malformed documents") {
  CHECK_THROWS_AS(load_suite("not json"), ParseError);
  CHECK_THROWS_AS(load_suite("[]"), ParseError);
  CHECK_THROWS_AS(load_suite(R"({"jobs": []})"), ParseError);
  CHECK_THROWS_AS(load_suite(R"({"format": "csv"})"), ParseError);
  CHECK_THROWS_AS(load_suite(R"({"jobs": [{}]})"), ParseError);
  CHECK_THROWS_AS(load_suite(R"({"jobs": [{"instance": "a", "algorithm": "alg2"}]})"), ParseError);
  CHECK_THROWS_AS(load_suite(R"({"format": "tsv", "jobs": [{"instance": "a"}]})"), ParseError);
  CHECK_THROWS_AS(load_suite_file("missing_suite_file.json"), ParseError);
}

TEST_CASE("run_suite executes jobs in order and renders consistent tables") {
  ScratchDir scratch("bench_scratch");
  const std::string path = scratch.file("hp3.json");
  save_instance_file(gen_hphard(3, 6), path);

  BenchSuite suite;
  for (Algorithm alg : {Algorithm::alg1, Algorithm::alg3, Algorithm::alg4}) {
    BenchJob job;
    job.instance_path = path;
    job.algorithm = alg;
    job.config.epsilon = 1e-3;
    suite.jobs.push_back(job);
  }

  const std::vector<BenchResult> results = run_suite(suite);
  REQUIRE(results.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CAPTURE(i);
    CHECK(results[i].ran);
    CHECK(results[i].record.status == SolveStatus::converged);
    CHECK(results[i].instance_label == "hphard-d3-s6");  // label defaults to the instance id
  }
  CHECK(results[0].algorithm == Algorithm::alg1);
  CHECK(results[2].algorithm == Algorithm::alg4);
  CHECK(results[1].record.counters.op_evals == 2 * results[1].record.iterations);

  const std::string csv = render_table(results, TableFormat::csv, false);
  const auto csv_lines = lines_of(csv);
  REQUIRE(csv_lines.size() == 4);
  CHECK(csv_lines[0] == "instance,algorithm,Iter.,Time,op_evals,residual");
  const auto row0 = split(csv_lines[1], ',');
  REQUIRE(row0.size() == 6);
  CHECK(row0[0] == "hphard-d3-s6");
  CHECK(row0[1] == "alg1");
  CHECK(row0[2] == std::to_string(results[0].record.iterations));
  CHECK(row0[4] == std::to_string(results[0].record.counters.op_evals));

  // markdown carries the same cell values
  const std::string md = render_table(results, TableFormat::markdown, false);
  const auto md_lines = lines_of(md);
  REQUIRE(md_lines.size() == 5);  // header, separator, three rows
  CHECK(md_cells(md_lines[0]) ==
        std::vector<std::string>{"instance", "algorithm", "Iter.", "Time", "op_evals",
                                 "residual"});
  for (std::size_t i = 0; i < 3; ++i) {
    const auto csv_row = split(csv_lines[i + 1], ',');
    const auto md_row = md_cells(md_lines[i + 2]);
    REQUIRE(md_row.size() == 6);
    for (std::size_t cell = 0; cell < 6; ++cell) CHECK(csv_row[cell] == md_row[cell]);
  }

  // json carries the full counter set
  const auto doc = nlohmann::json::parse(render_table(results, TableFormat::json, false));
  REQUIRE(doc.contains("rows"));
  REQUIRE(doc["rows"].size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& row = doc["rows"][i];
    CHECK(row["status"] == "converged");
    CHECK(row["iterations"].get<int>() == results[i].record.iterations);
    CHECK(row["op_evals"].get<std::int64_t>() == results[i].record.counters.op_evals);
    CHECK(row["projections"].get<std::int64_t>() == results[i].record.counters.projections);
    CHECK(row["residual"].get<double>() == results[i].record.final_residual);
    CHECK(!row.contains("monitor_violations"));
  }
}

TEST_CASE("threaded suite runs match the sequential results") {
  ScratchDir scratch("bench_scratch");
  const std::string path = scratch.file("hp2.json");
  save_instance_file(gen_hphard(2, 3), path);
  BenchSuite suite;
  for (int i = 0; i < 6; ++i) {
    BenchJob job;
    job.instance_path = path;
    job.algorithm = i % 2 == 0 ? Algorithm::alg1 : Algorithm::alg4;
    suite.jobs.push_back(job);
  }
  const auto seq = run_suite(suite, 1);
  const auto par = run_suite(suite, 4);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(par[i].algorithm == seq[i].algorithm);
    CHECK(par[i].record.iterations == seq[i].record.iterations);
    CHECK(par[i].record.final_residual == seq[i].record.final_residual);
  }
}

TEST_CASE("failed jobs keep their slot and report error codes") {
  ScratchDir scratch("bench_scratch");
  const std::string good = scratch.file("hp2b.json");
  save_instance_file(gen_hphard(2, 4), good);

  BenchSuite suite;
  BenchJob missing;
  missing.instance_path = scratch.file("nope.json");
  suite.jobs.push_back(missing);
  BenchJob ok;
  ok.instance_path = good;
  suite.jobs.push_back(ok);
  BenchJob bad_cfg;
  bad_cfg.instance_path = good;
  bad_cfg.lambda_frac = 0.9;  // alg1 needs lambda_frac < 0.5
  suite.jobs.push_back(bad_cfg);

  const auto results = run_suite(suite);
  REQUIRE(results.size() == 3);
  CHECK(!results[0].ran);
  CHECK(results[0].error_code == 3);
  CHECK(results[1].ran);
  CHECK(!results[2].ran);
  CHECK(results[2].error_code == 2);

  const auto rows = lines_of(render_table(results, TableFormat::csv, false));
  REQUIRE(rows.size() == 4);
  const auto failed = split(rows[1], ',');
  CHECK(failed[2] == "-");
  CHECK(failed[3] == "-");
  CHECK(failed[4] == "-");
  CHECK(failed[5].rfind("failed: ", 0) == 0);
  // the label for a job that never loaded falls back to the path, sanitized
  CHECK(failed[0].find(',') == std::string::npos);
}

TEST_CASE("monitor jobs need a stored reference solution") {
  ScratchDir scratch("bench_scratch");
  ProblemInstance inst = gen_hphard(2, 5);
  inst.known_solution.reset();
  const std::string path = scratch.file("no-ks.json");
  save_instance_file(inst, path);

  BenchSuite suite;
  BenchJob job;
  job.instance_path = path;
  job.monitor = true;
  suite.jobs.push_back(job);
  const auto results = run_suite(suite);
  CHECK(!results[0].ran);
  CHECK(results[0].error_code == 1);
  CHECK(results[0].error.find("known_solution") != std::string::npos);

  // with the reference available, monitored rows surface the violation count
  const std::string with_ks = scratch.file("with-ks.json");
  save_instance_file(gen_hphard(2, 5), with_ks);
  BenchSuite ok;
  BenchJob mjob;
  mjob.instance_path = with_ks;
  mjob.monitor = true;
  ok.jobs.push_back(mjob);
  const auto mres = run_suite(ok);
  REQUIRE(mres[0].ran);
  const auto doc = nlohmann::json::parse(render_table(mres, TableFormat::json, false));
  REQUIRE(doc["rows"][0].contains("monitor_violations"));
  CHECK(doc["rows"][0]["monitor_violations"].get<std::int64_t>() == 0);
}

TEST_CASE("non-converged rows annotate the residual with the status") {
  ScratchDir scratch("bench_scratch");
  const std::string path = scratch.file("hp2c.json");
  save_instance_file(gen_hphard(2, 7), path);
  BenchSuite suite;
  BenchJob job;
  job.instance_path = path;
  job.config.epsilon = 1e-14;
  job.config.max_iter = 3;
  suite.jobs.push_back(job);
  const auto results = run_suite(suite);
  REQUIRE(results[0].ran);
  CHECK(results[0].record.status == SolveStatus::max_iter_exceeded);
  const auto rows = lines_of(render_table(results, TableFormat::csv, false));
  CHECK(split(rows[1], ',')[5].find("(max_iter_exceeded)") != std::string::npos);
}

TEST_CASE("labels with separator characters are sanitized in tables") {
  BenchResult r;
  r.instance_label = "weird,name|with\nbreaks";
  r.algorithm = Algorithm::alg3;
  r.ran = true;
  r.record.status = SolveStatus::converged;
  r.record.iterations = 2;
  r.record.final_residual = 1e-4;
  const auto rows = lines_of(render_table({r}, TableFormat::csv, false));
  REQUIRE(rows.size() == 2);
  const auto cells = split(rows[1], ',');
  REQUIRE(cells.size() == 6);
  CHECK(cells[0] == "weird;name;with;breaks");
}

TEST_CASE("environment header names the toolchain") {
  const std::string env = environment_header();
  CHECK(env.rfind("# compiler: ", 0) == 0);
  CHECK(env.find("# eigen: ") != std::string::npos);
  CHECK(env.find("# note: ") != std::string::npos);
  // every line is a comment line
  for (const std::string& line : lines_of(env)) CHECK(line.rfind("# ", 0) == 0);
  // tables prepend it on request
  const std::string csv = render_table({}, TableFormat::csv, true);
  CHECK(csv.rfind("# compiler: ", 0) == 0);
  CHECK(csv.find("instance,algorithm,Iter.,Time,op_evals,residual\n") != std::string::npos);
}

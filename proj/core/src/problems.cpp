#include <hybridvi/problems.hpp>
#include <hybridvi/rng.hpp>

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>
#include <vector>

namespace vi {

namespace {

using json = nlohmann::ordered_json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

VectorL simplex_ld(const VectorL& p, long double m) {
  const int n = static_cast<int>(p.size());
  std::vector<long double> u(p.data(), p.data() + n);
  std::sort(u.begin(), u.end(), std::greater<long double>());
  long double css = 0.0L, tau = 0.0L;
  for (int j = 0; j < n; ++j) {
    css += u[j];
    const long double t = (css - m) / (j + 1);
    if (u[j] - t > 0.0L) tau = t;
  }
  VectorL w(n);
  for (int i = 0; i < n; ++i) w[i] = std::max(0.0L, p[i] - tau);
  return w;
}

// Corrected cyclic sweeps as in project_polyhedron_cyclic, in long double.
VectorL polyhedron_ld(const VectorL& p, const std::vector<Halfspace>& faces, long double tol,
                      std::int64_t sweep_cap) {
  const int m = static_cast<int>(faces.size());
  const Eigen::Index d = p.size();
  std::vector<VectorL> a(m);
  std::vector<long double> asq(m), anorm(m), b(m);
  for (int i = 0; i < m; ++i) {
    a[i] = faces[i].a.cast<long double>();
    asq[i] = a[i].squaredNorm();
    anorm[i] = std::sqrt(asq[i]);
    b[i] = faces[i].b;
  }
  VectorL w = p;
  std::vector<VectorL> corr(m, VectorL::Zero(d));
  for (std::int64_t sweep = 0; sweep < sweep_cap; ++sweep) {
    VectorL prev = w;
    for (int i = 0; i < m; ++i) {
      if (asq[i] == 0.0L) continue;
      VectorL y = w + corr[i];
      const long double g = a[i].dot(y) - b[i];
      w = (g > 0.0L) ? VectorL(y - (g / asq[i]) * a[i]) : y;
      corr[i] = y - w;
    }
    long double viol = 0.0L;
    for (int i = 0; i < m; ++i)
      if (asq[i] != 0.0L) viol = std::max(viol, (a[i].dot(w) - b[i]) / anorm[i]);
    const long double scale = std::max(1.0L, w.norm());
    if ((w - prev).norm() <= tol * scale && viol <= tol * scale) return w;
  }
  throw NoConvergence("OracleNoConvergence: long-double cyclic projection stalled");
}

VectorL project_ld(const VectorL& p, const ConvexSet& set, long double tol) {
  return std::visit(
      overloaded{
          [&](const WholeSpace&) -> VectorL { return p; },
          [&](const Halfspace& h) -> VectorL {
            const VectorL a = h.a.cast<long double>();
            const long double asq = a.squaredNorm();
            if (asq == 0.0L) return p;
            const long double g = a.dot(p) - static_cast<long double>(h.b);
            return g <= 0.0L ? p : VectorL(p - (g / asq) * a);
          },
          [&](const Polyhedron& poly) -> VectorL {
            return polyhedron_ld(p, poly.faces, tol, kDefaultSweepCap);
          },
          [&](const ScaledSimplex& sx) -> VectorL {
            return simplex_ld(p, static_cast<long double>(sx.m));
          },
          [&](const Box& box) -> VectorL {
            VectorL w = p;
            for (Eigen::Index i = 0; i < p.size(); ++i)
              w[i] = std::min(static_cast<long double>(box.upper[i]),
                              std::max(static_cast<long double>(box.lower[i]), p[i]));
            return w;
          },
      },
      set);
}

// Projected-gradient fixed point in long double.  The step mu/L^2 makes the
// map a contraction whenever the symmetric part of M is positive definite;
// accumulating in long double keeps the residual from plateauing above tol.
Vector pg_fixed_point(const ProblemInstance& inst, double tol) {
  const MatrixL M = inst.op.M.cast<long double>();
  const VectorL q = inst.op.q.cast<long double>();
  const Matrix sym = 0.5 * (inst.op.M + inst.op.M.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const double mu = es.eigenvalues().minCoeff();
  const long double L = inst.L;
  const long double step =
      mu > 0.0 ? static_cast<long double>(mu) / (L * L) : 0.5L / L;  // fallback: plain small step
  const long double ptol = std::max(static_cast<long double>(tol) * 1e-2L, 1e-17L);

  VectorL x = project_ld(inst.x0.cast<long double>(), inst.set, ptol);
  const std::int64_t cap = 20'000'000;
  for (std::int64_t it = 0; it < cap; ++it) {
    const VectorL ax = M * x + q;
    const VectorL xn = project_ld(x - step * ax, inst.set, ptol);
    const long double res = (x - xn).norm();
    x = xn;
    if (res <= static_cast<long double>(tol)) return x.cast<double>();
  }
  throw NoConvergence("OracleNoConvergence: projected-gradient fixed point hit the iteration cap");
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ParseError("ParseError: " + msg);
}

json vec_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vec_from_json(const json& j, const std::string& where, int expect_dim = -1) {
  require(j.is_array(), where + " must be an array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), where + "[" + std::to_string(i) + "] must be a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    require(std::isfinite(v[static_cast<Eigen::Index>(i)]),
            where + "[" + std::to_string(i) + "] must be finite");
  }
  if (expect_dim >= 0)
    require(static_cast<int>(v.size()) == expect_dim,
            where + " has length " + std::to_string(v.size()) + ", expected " +
                std::to_string(expect_dim));
  return v;
}

const json& field(const json& j, const char* name, const std::string& where) {
  auto it = j.find(name);
  require(it != j.end(), where + " is missing field '" + std::string(name) + "'");
  return *it;
}

}  // namespace

ProblemInstance gen_polytope_translation(int dim, int n_constraints, std::uint64_t seed) {
  if (dim < 1 || n_constraints < 1)
    throw std::invalid_argument("gen_polytope_translation: dim and n_constraints must be >= 1");
  Rng rng(seed);
  Polyhedron poly;
  poly.faces.reserve(n_constraints);
  for (int i = 0; i < n_constraints; ++i) {
    Vector a = rng.unit_sphere(dim);
    const double b = rng.uniform(0.5, 2.0);  // strictly positive: origin interior
    poly.faces.push_back(Halfspace{std::move(a), b});
  }
  const Vector u = rng.uniform_vector(dim, -5.0, 5.0);

  ProblemInstance inst;
  std::ostringstream id;
  id << "polytope-d" << dim << "-c" << n_constraints << "-s" << seed;
  inst.instance_id = id.str();
  inst.dim = dim;
  inst.op = AffineOperator{Matrix::Identity(dim, dim), -u};
  inst.set = poly;
  inst.L = 1.0;
  inst.x0 = Vector::Zero(dim);  // = P_C(0), interior by construction
  inst.z0 = Vector::Zero(dim);
  inst.generator = GeneratorInfo{"polytope_translation",
                                 seed,
                                 {{"dim", static_cast<double>(dim)},
                                  {"n_constraints", static_cast<double>(n_constraints)}}};
  inst.known_solution = solve_oracle(inst, 1e-10);
  return inst;
}

ProblemInstance gen_hphard(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("gen_hphard: dim must be >= 1");
  Rng rng(seed);
  Matrix A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.uniform(-5.0, 5.0);
  Matrix B = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const double v = rng.uniform(-5.0, 5.0);
      B(i, j) = v;
      B(j, i) = -v;
    }
  Vector diag(dim);
  for (int i = 0; i < dim; ++i) diag[i] = rng.uniform(0.0, 0.3);
  Vector q(dim);
  for (int i = 0; i < dim; ++i) q[i] = rng.uniform(-500.0, 0.0);

  Matrix M = A * A.transpose() + B;
  M.diagonal() += diag;

  ProblemInstance inst;
  std::ostringstream id;
  id << "hphard-d" << dim << "-s" << seed;
  inst.instance_id = id.str();
  inst.dim = dim;
  inst.op = AffineOperator{std::move(M), std::move(q)};
  inst.set = ScaledSimplex{static_cast<double>(dim), dim};
  inst.L = spectral_norm(inst.op.M);
  inst.x0 = Vector::Ones(dim);
  inst.z0 = Vector::Ones(dim);
  inst.generator = GeneratorInfo{"hphard", seed, {{"dim", static_cast<double>(dim)}}};
  inst.known_solution = solve_oracle(inst, 1e-12);
  return inst;
}

Vector solve_oracle(const ProblemInstance& instance, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_oracle: tol must be positive");
  if (instance.generator && instance.generator->family == "polytope_translation") {
    if (const auto* poly = std::get_if<Polyhedron>(&instance.set)) {
      // translation operator: the solution is the nearest feasible point to u = -q
      return project_polyhedron_cyclic(-instance.op.q, poly->faces, tol, 50'000'000);
    }
  }
  return pg_fixed_point(instance, tol);
}

double natural_residual(const Vector& x, const ProblemInstance& instance, double lambda,
                        double proj_tol, Counters* counters) {
  if (!(lambda > 0.0)) throw std::invalid_argument("natural_residual: lambda must be positive");
  if (!(proj_tol > 0.0)) throw std::invalid_argument("natural_residual: proj_tol must be positive");
  const Vector ax = apply(instance.op, x, counters ? &counters->check_op_evals : nullptr);
  const Vector w = project(x - lambda * ax, instance.set, proj_tol, nullptr);
  if (counters) ++counters->check_projections;
  return (x - w).norm();
}

std::string save_instance(const ProblemInstance& inst) {
  json j;
  j["schema_version"] = 1;
  j["instance_id"] = inst.instance_id;
  j["dim"] = inst.dim;
  j["operator"] = json::object();
  json rows = json::array();
  for (Eigen::Index i = 0; i < inst.op.M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < inst.op.M.cols(); ++c) row.push_back(inst.op.M(i, c));
    rows.push_back(std::move(row));
  }
  j["operator"]["matrix"] = std::move(rows);
  j["operator"]["q"] = vec_to_json(inst.op.q);
  j["set"] = std::visit(
      overloaded{
          [](const WholeSpace&) -> json {
            throw std::invalid_argument("save_instance: whole-space feasible set is not storable");
          },
          [](const Halfspace& h) -> json {
            return json{{"type", "polyhedron"},
                        {"halfspaces", json::array({json{{"a", vec_to_json(h.a)}, {"b", h.b}}})}};
          },
          [](const Polyhedron& poly) -> json {
            json hs = json::array();
            for (const auto& h : poly.faces)
              hs.push_back(json{{"a", vec_to_json(h.a)}, {"b", h.b}});
            return json{{"type", "polyhedron"}, {"halfspaces", std::move(hs)}};
          },
          [](const ScaledSimplex& sx) -> json {
            return json{{"type", "scaled_simplex"}, {"m", sx.m}};
          },
          [](const Box& box) -> json {
            return json{{"type", "box"},
                        {"lower", vec_to_json(box.lower)},
                        {"upper", vec_to_json(box.upper)}};
          },
      },
      inst.set);
  j["L"] = inst.L;
  j["x0"] = vec_to_json(inst.x0);
  j["z0"] = vec_to_json(inst.z0);
  if (inst.known_solution) j["known_solution"] = vec_to_json(*inst.known_solution);
  if (inst.generator) {
    json params = json::object();
    for (const auto& [k, v] : inst.generator->params) params[k] = v;
    j["generator"] = json{{"family", inst.generator->family},
                          {"seed", inst.generator->seed},
                          {"params", std::move(params)}};
  }
  return j.dump(2) + "\n";
}

ProblemInstance load_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ParseError: ") + e.what());
  }
  try {
    require(j.is_object(), "instance document must be an object");
    require(field(j, "schema_version", "document").get<int>() == 1,
            "unsupported schema_version (expected 1)");

    ProblemInstance inst;
    inst.instance_id = field(j, "instance_id", "document").get<std::string>();
    inst.dim = field(j, "dim", "document").get<int>();
    require(inst.dim >= 1, "dim must be >= 1");

    const json& op = field(j, "operator", "document");
    const json& rows = field(op, "matrix", "operator");
    require(rows.is_array() && static_cast<int>(rows.size()) == inst.dim,
            "operator.matrix must have dim rows");
    Matrix M(inst.dim, inst.dim);
    for (int i = 0; i < inst.dim; ++i) {
      const Vector row = vec_from_json(rows[i], "operator.matrix row", inst.dim);
      M.row(i) = row.transpose();
    }
    inst.op = AffineOperator{std::move(M), vec_from_json(field(op, "q", "operator"), "operator.q",
                                                         inst.dim)};

    const json& set = field(j, "set", "document");
    const std::string type = field(set, "type", "set").get<std::string>();
    if (type == "polyhedron") {
      const json& hs = field(set, "halfspaces", "set");
      require(hs.is_array() && !hs.empty(), "set.halfspaces must be a nonempty array");
      Polyhedron poly;
      for (const auto& h : hs) {
        Halfspace half{vec_from_json(field(h, "a", "halfspace"), "halfspace.a", inst.dim),
                       field(h, "b", "halfspace").get<double>()};
        require(std::isfinite(half.b), "halfspace.b must be finite");
        poly.faces.push_back(std::move(half));
      }
      inst.set = std::move(poly);
    } else if (type == "scaled_simplex") {
      const double m = field(set, "m", "set").get<double>();
      require(std::isfinite(m) && m > 0.0, "set.m must be positive");
      inst.set = ScaledSimplex{m, inst.dim};
    } else if (type == "box") {
      Box box{vec_from_json(field(set, "lower", "set"), "set.lower", inst.dim),
              vec_from_json(field(set, "upper", "set"), "set.upper", inst.dim)};
      require(((box.upper - box.lower).array() >= 0.0).all(),
              "set.box must satisfy lower <= upper");
      inst.set = std::move(box);
    } else {
      require(false, "unknown set type '" + type + "'");
    }

    inst.L = field(j, "L", "document").get<double>();
    require(std::isfinite(inst.L) && inst.L > 0.0, "L must be positive and finite");
    inst.x0 = vec_from_json(field(j, "x0", "document"), "x0", inst.dim);
    inst.z0 = vec_from_json(field(j, "z0", "document"), "z0", inst.dim);
    if (j.contains("known_solution"))
      inst.known_solution = vec_from_json(j["known_solution"], "known_solution", inst.dim);
    if (j.contains("generator")) {
      const json& g = j["generator"];
      GeneratorInfo info;
      info.family = field(g, "family", "generator").get<std::string>();
      info.seed = field(g, "seed", "generator").get<std::uint64_t>();
      if (g.contains("params")) {
        require(g["params"].is_object(), "generator.params must be an object");
        for (const auto& [k, v] : g["params"].items()) {
          require(v.is_number(), "generator.params values must be numbers");
          info.params[k] = v.get<double>();
        }
      }
      inst.generator = std::move(info);
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ParseError: ") + e.what());
  }
}

void save_instance_file(const ProblemInstance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("IOError: cannot open '" + path + "' for writing");
  out << save_instance(instance);
  if (!out) throw std::runtime_error("IOError: short write to '" + path + "'");
}

ProblemInstance load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("ParseError: cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_instance(ss.str());
}

}  // namespace vi

#include "qpdr/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "qpdr/drmatrix.hpp"
#include "qpdr/fockrosly.hpp"
#include "qpdr/group.hpp"
#include "qpdr/gspace.hpp"
#include "qpdr/sampling.hpp"

namespace qpdr {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

[[noreturn]] void fail(const std::string& ptr, const std::string& what) { throw ConfigError(ptr, what); }

double get_number(const Json& j, const std::string& key, const std::string& ptr, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) fail(ptr + "/" + key, "expected a number");
  return j.at(key).get<double>();
}

int get_int(const Json& j, const std::string& key, const std::string& ptr, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) fail(ptr + "/" + key, "expected an integer");
  return j.at(key).get<int>();
}

std::string get_string(const Json& j, const std::string& key, const std::string& ptr,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) fail(ptr + "/" + key, "expected a string");
  return j.at(key).get<std::string>();
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json point_json(const Point& x) {
  Json j;
  j["chart"] = vector_json(x.chart);
  j["g"] = Json::array();
  for (const auto& g : x.g) j["g"].push_back({{"re", matrix_json(g.real())}, {"im", matrix_json(g.imag())}});
  return j;
}

double max_abs(const Multi& m) {
  double s = 0;
  for (double v : m.data()) s = std::max(s, std::abs(v));
  return s;
}

Eigen::MatrixXd matrix_from_json(const Json& j, int n, const std::string& ptr) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) fail(ptr, "expected a square array of size " + std::to_string(n));
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) fail(ptr + "/" + std::to_string(i), "row has wrong length");
    for (int k = 0; k < n; ++k) {
      if (!j[i][k].is_number()) fail(ptr + "/" + std::to_string(i) + "/" + std::to_string(k), "expected a number");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

// Shared state of one scenario run.
struct Run {
  const ScenarioConfig& cfg;
  QuadraticLieAlgebra alg;
  FdOptions fd;
  Rng rng;
  DefectReport report;

  Run(const ScenarioConfig& c, QuadraticLieAlgebra a)
      : cfg(c), alg(std::move(a)), rng(c.seed.value_or(0)) {
    fd.h = c.fd_step;
    fd.richardson = c.richardson;
    report.id = c.id;
    report.kind = c.kind;
    report.fd_step = c.fd_step;
    report.seed = c.seed;
  }

  void add(const std::string& name, Json point, double residual, double default_tol) {
    CheckRecord r;
    r.name = name;
    r.point = std::move(point);
    r.residual = residual;
    r.tolerance = cfg.tolerance(name, default_tol);
    r.pass = std::isfinite(residual) && residual <= r.tolerance;
    report.records.push_back(std::move(r));
  }

  // Degenerate geometry becomes a failed record carrying the reason.
  void guarded(const std::string& name, const Json& point, double default_tol,
               const std::function<void()>& body) {
    try {
      body();
    } catch (const DegeneracyError& e) {
      failed(name, point, default_tol, e.what());
    } catch (const DomainError& e) {
      failed(name, point, default_tol, e.what());
    } catch (const EvaluationError& e) {
      failed(name, point, default_tol, e.what());
    }
  }

  void failed(const std::string& name, const Json& point, double default_tol, const std::string& why) {
    CheckRecord r;
    r.name = name;
    r.point = point;
    r.residual = std::numeric_limits<double>::quiet_NaN();
    r.tolerance = cfg.tolerance(name, default_tol);
    r.pass = false;
    r.reason = why;
    report.records.push_back(std::move(r));
  }

  int samples(int fallback) const { return cfg.samples > 0 ? cfg.samples : fallback; }
  int functions() const { return get_int(cfg.params, "functions", "/params", 5); }
  std::vector<double> grid() const { return cfg.grid.value_or(GridSpec{}).points(); }
};

void require_seed(const ScenarioConfig& c) {
  if (!c.seed) fail("/sampling/seed", "random sampling requires a seed");
}

SectionSetup section_from(const Run& run) {
  const Json& p = run.cfg.params;
  const std::string name = get_string(p, "section", "/params", "paper_su2");
  if (name != "paper_su2") throw LookupError("unknown section preset '" + name + "'");
  if (run.alg.name != "su2") fail("/algebra", "section paper_su2 requires the su2 algebra");
  return su2_section(get_number(p, "beta", "/params", kHalfPi), get_number(p, "gamma", "/params", kHalfPi));
}

bool is_golden(const Run& run) {
  const Json& p = run.cfg.params;
  return std::abs(get_number(p, "beta", "/params", kHalfPi) - kHalfPi) < 1e-15 &&
         std::abs(get_number(p, "gamma", "/params", kHalfPi) - kHalfPi) < 1e-15;
}

Json alpha_json(double a) { return Json{{"alpha", a}}; }

void triple_defects(Run& run, const DynamicalTriple& t, const Eigen::VectorXd& a, const Json& pt, double tol) {
  const Multi om = cartan_omega(run.alg);
  TripleOptions o;
  o.fd = run.fd;
  run.add("compat", pt, max_abs(compat_defect(run.alg, t, a, o)), tol);
  run.add("gdybe", pt, max_abs(gdybe_defect(run.alg, t, om, a, o)), tol);
  run.add("morphism", pt, max_abs(morphism_defect(run.alg, t, a, o)), tol);
}

Point random_point(const ProductManifold& M, Rng& rng, const std::vector<GroupMatrix>& class_bases,
                   const Eigen::VectorXd& chart) {
  Point x;
  x.chart = chart;
  for (int i = 0; i < M.group_factors(); ++i) {
    if (i < static_cast<int>(class_bases.size()))
      x.g.push_back(random_conjugate(M.algebra(), class_bases[i], rng));
    else
      x.g.push_back(random_group_element(M.algebra(), rng));
  }
  return x;
}

// --- kinds ---

void run_quasi_check(Run& run) {
  require_seed(run.cfg);
  const Json& p = run.cfg.params;
  const std::string space = get_string(p, "space", "/params", "group");
  QuasiPoissonSpace S = [&] {
    if (space == "group") return build_pi_G(run.alg);
    if (space == "surface")
      return build_surface_quasi(run.alg, get_int(p, "n", "/params", 2), get_int(p, "genus", "/params", 0));
    fail("/params/space", "expected 'group' or 'surface'");
  }();
  std::vector<GroupMatrix> bases;
  for (int i = 0; i < S.M.group_factors(); ++i)
    if (i < static_cast<int>(S.class_factor.size()) && S.class_factor[i])
      bases.push_back(random_group_element(run.alg, run.rng));
  for (int s = 0; s < run.samples(20); ++s) {
    const Point x = random_point(S.M, run.rng, bases, Eigen::VectorXd());
    for (int t = 0; t < run.functions(); ++t) {
      const ScalarFn f = random_function(S.M, run.rng), g = random_function(S.M, run.rng),
                     h = random_function(S.M, run.rng);
      Json pt = point_json(x);
      pt["sample"] = s;
      pt["triple"] = t;
      run.guarded("quasi_defect", pt, 1e-5,
                  [&] { run.add("quasi_defect", pt, std::abs(quasi_defect(S, f, g, h, x, run.fd)), 1e-5); });
    }
  }
}

void run_decompose(Run& run) {
  const SectionSetup su = section_from(run);
  const DynamicalTriple closed = moduli_triple(run.alg, su);
  for (double al : run.grid()) {
    const Json pt = alpha_json(al);
    run.guarded("decomposition_residual", pt, 1e-8, [&] {
      const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, al);
      const Decomposition D = decompose_on_section(su.space, su.section, a);
      run.add("decomposition_residual", pt, D.residual, 1e-8);
      const double diff = std::max({(D.pi_U - closed.pi_U(a)).cwiseAbs().maxCoeff(),
                                    (D.theta - closed.theta(a)).cwiseAbs().maxCoeff(),
                                    (D.r - closed.r(a)).cwiseAbs().maxCoeff()});
      run.add("closed_form", pt, diff, 1e-8);
    });
  }
}

void run_moduli_triple(Run& run) {
  const SectionSetup su = section_from(run);
  const DynamicalTriple t = moduli_triple(run.alg, su);
  const bool golden = is_golden(run);
  for (double al : run.grid()) {
    const Json pt = alpha_json(al);
    run.guarded(golden ? "golden_r" : "compat", pt, 1e-8, [&] {
      const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, al);
      const Eigen::MatrixXd r = t.r(a), th = t.theta(a), pi = t.pi_U(a);
      run.report.triples.push_back({al, th, r});
      if (golden) {
        Eigen::MatrixXd r0 = Eigen::MatrixXd::Zero(3, 3);
        r0(0, 1) = std::tan(al);
        r0(1, 0) = -std::tan(al);
        Eigen::MatrixXd th0 = Eigen::MatrixXd::Zero(1, 3);
        th0(0, 2) = 1.0;
        run.add("golden_r", pt, (r - r0).cwiseAbs().maxCoeff(), 1e-8);
        run.add("golden_theta", pt, (th - th0).cwiseAbs().maxCoeff(), 1e-8);
        run.add("golden_pi", pt, pi.cwiseAbs().maxCoeff(), 1e-8);
      }
      triple_defects(run, t, a, pt, 1e-6);
    });
  }
}

void run_gauge(Run& run) {
  const SectionSetup su = section_from(run);
  const DynamicalTriple t = moduli_triple(run.alg, su);
  const Json& p = run.cfg.params;
  const std::string map = get_string(p, "map", "/params", "exp_e1");
  const int axis = map == "exp_e1" ? 0 : map == "exp_e2" ? 1 : map == "exp_e3" ? 2 : -1;
  if (axis < 0) throw LookupError("unknown gauge map '" + map + "'");
  const double scale = get_number(p, "scale", "/params", 1.0);
  const QuadraticLieAlgebra alg = run.alg;
  const GroupMapFn gmap = [alg, axis, scale](const Eigen::VectorXd& a) {
    return exponential(alg, scale * a(0) * alg.basis_vector(axis));
  };
  const DynamicalTriple tg = gauge_transform(run.alg, t, gmap);
  for (double al : run.grid()) {
    const Json pt = alpha_json(al);
    run.guarded("compat", pt, 1e-5, [&] {
      const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, al);
      run.report.triples.push_back({al, tg.theta(a), tg.r(a)});
      triple_defects(run, tg, a, pt, 1e-5);
    });
  }
  // {F o Phi, G o Phi}_r = {F,G}_{r^g} o Phi on U x G, Phi(a, y) = (a, g y g^-1)
  require_seed(run.cfg);
  const QuasiPoissonSpace N = build_pi_G(run.alg);
  const QuasiPoissonSpace A = assemble(t, N), B = assemble(tg, N);
  const int pairs = get_int(p, "pairs", "/params", 10);
  auto phi = [gmap](const Point& x) {
    const GroupMatrix g = gmap(x.chart);
    return Point{x.chart, {g * x.g[0] * g.inverse()}};
  };
  for (int s = 0; s < pairs; ++s) {
    const double al = run.rng.uniform(0.1, 1.2) * (run.rng.uniform(0, 1) < 0.5 ? -1 : 1);
    const Point x{Eigen::VectorXd::Constant(1, al), {random_group_element(run.alg, run.rng)}};
    const ScalarFn F = random_function(A.M, run.rng), G = random_function(A.M, run.rng);
    Json pt = point_json(x);
    pt["pair"] = s;
    run.guarded("bracket_identity", pt, 1e-5, [&] {
      const ScalarFn Fp = [F, phi](const Point& y) { return F(phi(y)); };
      const ScalarFn Gp = [G, phi](const Point& y) { return G(phi(y)); };
      const double lhs = poisson_bracket(A.M, A.pi, Fp, Gp, run.fd)(x);
      const double rhs = poisson_bracket(B.M, B.pi, F, G, run.fd)(phi(x));
      run.add("bracket_identity", pt, std::abs(lhs - rhs), 1e-5);
    });
  }
}

Eigen::MatrixXd skew_from_params(const Run& run) {
  const Json& p = run.cfg.params;
  const int n = run.alg.dim;
  if (!p.contains("r") || (p.at("r").is_string() && p.at("r") == "casimir")) return Eigen::MatrixXd::Zero(n, n);
  const Json& r = p.at("r");
  if (!r.is_object() || !r.contains("skew")) fail("/params/r", "expected \"casimir\" or {\"skew\": array}");
  Eigen::MatrixXd s = matrix_from_json(r.at("skew"), n, "/params/r/skew");
  if ((s + s.transpose()).cwiseAbs().maxCoeff() > 1e-12) fail("/params/r/skew", "matrix is not skew");
  return s;
}

void run_fock_rosly(Run& run) {
  require_seed(run.cfg);
  const Json& p = run.cfg.params;
  const int n = get_int(p, "n", "/params", 2), genus = get_int(p, "genus", "/params", 0);
  if (n < 0 || genus < 0 || n + 2 * genus < 1) fail("/params/n", "need n + 2 genus >= 1");
  std::vector<GroupMatrix> bases;
  for (int i = 0; i < n; ++i) bases.push_back(random_group_element(run.alg, run.rng));
  const Eigen::MatrixXd skew = skew_from_params(run);
  const SurfaceScenario S = make_surface(run.alg, n, genus, bases, r_with_casimir(run.alg, skew));
  Eigen::MatrixXd other = run.rng.normal_vector(run.alg.dim * run.alg.dim).reshaped(run.alg.dim, run.alg.dim);
  other -= other.transpose().eval();
  const SurfaceScenario S2 = make_surface(run.alg, n, genus, bases, r_with_casimir(run.alg, other));
  const ProductManifold M = S.manifold();
  const FramedField B = fr_field(S);
  std::optional<QuasiPoissonSpace> fused;
  if (n == 2 && genus == 0) fused = build_surface_quasi(run.alg, 2, 0);
  const Json cy = {{"r_skew", matrix_json(skew)}};
  run.report.records.push_back(CheckRecord{"cybe_norm_info", cy, cybe_check(run.alg, S.r),
                                           std::numeric_limits<double>::infinity(), true, ""});
  for (int s = 0; s < run.samples(10); ++s) {
    const Point x = random_point(M, run.rng, bases, Eigen::VectorXd());
    for (int t = 0; t < run.functions(); ++t) {
      const ScalarFn F = random_invariant_function(M, run.rng), G = random_invariant_function(M, run.rng),
                     H = random_invariant_function(M, run.rng), K = random_function(M, run.rng);
      Json pt = point_json(x);
      pt["sample"] = s;
      pt["triple"] = t;
      run.guarded("invariant_jacobiator", pt, 1e-5, [&] {
        run.add("invariant_jacobiator", pt, std::abs(jacobiator(M, B, F, G, H, x, run.fd)), 1e-5);
        const double v1 = fr_bracket(S, F, K, x, run.fd), v2 = fr_bracket(S2, F, K, x, run.fd);
        run.add("skew_insensitivity", pt, std::abs(v1 - v2), 1e-6);
        run.report.brackets.push_back({s, 4 * t, 4 * t + 3, v1});  // ids in draw order F,G,H,K
        if (fused) {
          const double q = poisson_bracket(fused->M, fused->pi, G, K, run.fd)(x);
          const double c = kPiGScale * poisson_bracket(M, fr_field(make_surface(run.alg, 2, 0, bases, run.alg.Kinv)),
                                                       G, K, run.fd)(x);
          run.add("fusion_coincidence", pt, std::abs(q - c), 1e-5);
        }
      });
    }
  }
}

void run_reduced_bracket(Run& run) {
  require_seed(run.cfg);
  const Json& p = run.cfg.params;
  const int n = get_int(p, "n", "/params", 3), genus = get_int(p, "genus", "/params", 0);
  if (n < 2) fail("/params/n", "the section needs at least two classes");
  const SectionSetup su = section_from(run);
  const DynamicalTriple t = moduli_triple(run.alg, su);
  const QuasiPoissonSpace R = reduced_space(run.alg, t, n, genus);
  std::vector<GroupMatrix> bases;
  for (int i = 0; i < n - 2; ++i) bases.push_back(random_group_element(run.alg, run.rng));
  for (int s = 0; s < run.samples(10); ++s) {
    const double al = run.rng.uniform(0.15, 1.2) * (run.rng.uniform(0, 1) < 0.5 ? -1 : 1);
    const Point x = random_point(R.M, run.rng, bases, Eigen::VectorXd::Constant(1, al));
    for (int k = 0; k < run.functions(); ++k) {
      const ScalarFn f = random_function(R.M, run.rng), g = random_function(R.M, run.rng),
                     h = random_function(R.M, run.rng);
      Json pt = point_json(x);
      pt["sample"] = s;
      pt["triple"] = k;
      run.guarded("jacobiator", pt, 1e-5, [&] {
        run.add("jacobiator", pt, std::abs(jacobiator(R.M, R.pi, f, g, h, x, run.fd)), 1e-5);
        run.report.brackets.push_back({s, 3 * k, 3 * k + 1, poisson_bracket(R.M, R.pi, f, g, run.fd)(x)});
      });
    }
  }
}

void run_gspace(Run& run) {
  require_seed(run.cfg);
  if (run.alg.name != "su2") fail("/algebra", "gspace instances are defined on su2");
  const Json& p = run.cfg.params;
  const std::string inst = get_string(p, "instance", "/params", "kks_su2");
  const int n = run.alg.dim;
  ClassicalDynamicalRMatrix cdr{run.alg, Eigen::MatrixXd::Identity(n, n), nullptr, 0.0};
  Eigen::MatrixXd r0 = Eigen::MatrixXd::Zero(n, n);
  double lo = -1.0, hi = 1.0;
  if (inst == "felder_su2") {
    const double k = get_number(p, "k", "/params", 1.3);
    cdr.h_basis = Eigen::MatrixXd::Zero(n, 1);
    cdr.h_basis(1, 0) = 1.0;
    cdr.A_r = [k](const Eigen::VectorXd& x) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
      A(0, 2) = 0.5 * k / std::tanh(k * x(0));
      A(2, 0) = -A(0, 2);
      return A;
    };
    r0(0, 2) = 0.5 * k;
    r0(2, 0) = -0.5 * k;
    lo = 0.3;
    hi = 1.5;
  } else if (inst != "kks_su2") {
    throw LookupError("unknown gspace instance '" + inst + "'");
  }
  const PoissonSpace pr = build_pi_r_gspace(cdr, r0);
  const PoissonSpace sk = build_sklyanin(run.alg, r0);
  const int m = cdr.h_basis.cols();
  for (int s = 0; s < run.samples(5); ++s) {
    Eigen::VectorXd chart(m);
    for (int i = 0; i < m; ++i) chart(i) = run.rng.uniform(lo, hi);
    const Point a{chart, {random_group_element(run.alg, run.rng)}};
    const GroupMatrix g1 = random_group_element(run.alg, run.rng);
    const GroupMatrix kh = exponential(run.alg, cdr.h_basis * run.rng.normal_vector(m));
    for (int t = 0; t < run.functions(); ++t) {
      const ScalarFn f = random_function(pr.M, run.rng), g = random_function(pr.M, run.rng),
                     h = random_function(pr.M, run.rng);
      Json pt = point_json(a);
      pt["sample"] = s;
      pt["triple"] = t;
      run.guarded("jacobiator", pt, 1e-5, [&] {
        run.add("jacobiator", pt, std::abs(jacobiator(pr.M, pr.pi, f, g, h, a, run.fd)), 1e-5);
        run.add("poisson_action", pt, std::abs(poisson_action_defect(pr, sk, g1, a, f, g, run.fd)), 1e-5);
        run.add("h_invariance", pt, std::abs(h_invariance_defect(cdr, pr, kh, a, f, g, run.fd)), 1e-5);
      });
    }
    run.add("h_equivariance", point_json(a), h_equivariance_residual(cdr, kh, chart), 1e-10);
  }
}

void run_iso21(Run& run) {
  const QuadraticLieAlgebra alg = run.alg.name == "iso21" ? run.alg : iso21();
  const AlgebraInvariants inv = check_invariants(alg);
  const Json none = Json::object();
  run.add("jacobi", none, inv.jacobi, 1e-12);
  run.add("ad_invariance", none, inv.ad_invariance, 1e-12);
  run.add("normalization", none, max_abs(kappa_commutator(alg) + cartan_three_tensor(alg)), 1e-12);
  const Json& p = run.cfg.params;
  Eigen::Matrix3d V = Eigen::Matrix3d::Identity();
  if (p.contains("V")) V = matrix_from_json(p.at("V"), 3, "/params/V");
  const Iso21VecFn zero = [](const Eigen::Vector2d&) { return Eigen::Vector3d::Zero().eval(); };
  const DynamicalTriple t = iso21_triple(zero, zero, zero, zero, [V](double) { return V; });
  for (double psi : {-0.7, 0.0, 0.4}) {
    for (double al : run.grid()) {
      const Eigen::Vector2d c(psi, al);
      const Json pt = {{"psi", psi}, {"alpha", al}};
      TripleOptions o;
      o.fd = run.fd;
      run.add("compat", pt, max_abs(compat_defect(alg, t, c, o)), 1e-10);
    }
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<double> GridSpec::points() const {
  if (!(step > 0)) throw ConfigError("/sampling/grid/step", "step must be positive");
  std::vector<double> out;
  const int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) {
    const double a = from + i * step;
    if (std::abs(a) < exclude_abs_below) continue;
    out.push_back(a);
  }
  return out;
}

double ScenarioConfig::tolerance(const std::string& check, double fallback) const {
  if (tolerances.contains(check)) return tolerances.at(check).get<double>();
  if (tolerances.contains("default")) return tolerances.at("default").get<double>();
  return fallback;
}

const std::vector<std::string>& scenario_kinds() {
  static const std::vector<std::string> kinds = {"quasi_check", "decompose", "moduli_triple", "gauge",
                                                 "fock_rosly", "reduced_bracket", "gspace", "iso21"};
  return kinds;
}

QuadraticLieAlgebra algebra_from_config(const Json& algebra, const std::string& pointer) {
  if (algebra.is_string()) {
    const std::string name = algebra.get<std::string>();
    const auto names = algebra_preset_names();
    const bool known = std::find(names.begin(), names.end(), name) != names.end() ||
                       name.rfind("abelian:", 0) == 0;
    if (!known) throw LookupError("unknown algebra preset '" + name + "'");
    try {
      return preset_algebra(name);
    } catch (const InputError& e) {
      throw ConfigError(pointer, e.what());
    }
  }
  if (algebra.is_object()) {
    try {
      return algebra_from_json_text(algebra.dump());
    } catch (const InputError& e) {
      throw ConfigError(pointer, e.what());
    }
  }
  throw ConfigError(pointer, "expected a preset name or an inline definition");
}

ScenarioConfig parse_config(const Json& j) {
  if (!j.is_object()) fail("", "config must be an object");
  static const std::vector<std::string> allowed = {"id", "kind", "algebra", "params", "sampling",
                                                   "fd", "tolerances", "output"};
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail("/" + key, "unknown field");
  ScenarioConfig c;
  if (!j.contains("kind")) fail("/kind", "missing required field");
  c.kind = get_string(j, "kind", "", "");
  const auto& kinds = scenario_kinds();
  if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) fail("/kind", "unknown scenario kind '" + c.kind + "'");
  c.id = get_string(j, "id", "", c.kind);
  if (j.contains("algebra")) c.algebra = j.at("algebra");
  if (j.contains("params")) {
    if (!j.at("params").is_object()) fail("/params", "expected an object");
    c.params = j.at("params");
  }
  if (j.contains("sampling")) {
    const Json& s = j.at("sampling");
    if (!s.is_object()) fail("/sampling", "expected an object");
    if (s.contains("grid")) {
      const Json& g = s.at("grid");
      if (!g.is_object()) fail("/sampling/grid", "expected an object");
      GridSpec gs;
      gs.from = get_number(g, "from", "/sampling/grid", gs.from);
      gs.to = get_number(g, "to", "/sampling/grid", gs.to);
      gs.step = get_number(g, "step", "/sampling/grid", gs.step);
      gs.exclude_abs_below = get_number(g, "exclude_abs_below", "/sampling/grid", 0.0);
      if (!(gs.step > 0)) fail("/sampling/grid/step", "step must be positive");
      if (gs.to < gs.from) fail("/sampling/grid/to", "'to' must not be below 'from'");
      c.grid = gs;
    }
    c.samples = get_int(s, "random", "/sampling", 0);
    if (c.samples < 0) fail("/sampling/random", "count must be non-negative");
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_unsigned()) fail("/sampling/seed", "expected a non-negative integer");
      c.seed = s.at("seed").get<std::uint64_t>();
    }
    if (c.samples > 0 && !c.seed) fail("/sampling/seed", "random sampling requires a seed");
  }
  if (j.contains("fd")) {
    const Json& f = j.at("fd");
    if (!f.is_object()) fail("/fd", "expected an object");
    c.fd_step = get_number(f, "step", "/fd", c.fd_step);
    if (!(c.fd_step > 0)) fail("/fd/step", "step must be positive");
    if (f.contains("richardson")) {
      if (!f.at("richardson").is_boolean()) fail("/fd/richardson", "expected a boolean");
      c.richardson = f.at("richardson").get<bool>();
    }
  }
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (!t.is_object()) fail("/tolerances", "expected an object");
    for (const auto& [key, value] : t.items()) {
      if (!value.is_number() || !(value.get<double>() > 0)) fail("/tolerances/" + key, "tolerance must be positive");
    }
    c.tolerances = t;
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    if (!o.is_object()) fail("/output", "expected an object");
    c.report_path = get_string(o, "report", "/output", "");
    c.triple_csv_path = get_string(o, "triple_csv", "/output", "");
    c.bracket_csv_path = get_string(o, "bracket_csv", "/output", "");
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("", std::string("invalid JSON in '") + path + "': " + e.what());
  }
  return parse_config(j);
}

DefectReport run_scenario(const ScenarioConfig& config) {
  Run run(config, algebra_from_config(config.algebra));
  const std::string& k = config.kind;
  if (k == "quasi_check") run_quasi_check(run);
  else if (k == "decompose") run_decompose(run);
  else if (k == "moduli_triple") run_moduli_triple(run);
  else if (k == "gauge") run_gauge(run);
  else if (k == "fock_rosly") run_fock_rosly(run);
  else if (k == "reduced_bracket") run_reduced_bracket(run);
  else if (k == "gspace") run_gspace(run);
  else if (k == "iso21") run_iso21(run);
  else throw ConfigError("/kind", "unknown scenario kind '" + k + "'");
  run.report.timestamp = utc_now();
  return std::move(run.report);
}

bool DefectReport::pass() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

Json DefectReport::summary() const {
  Json checks = Json::object();
  for (const auto& r : records) {
    if (!checks.contains(r.name)) checks[r.name] = {{"max_residual", 0.0}, {"count", 0}, {"failed", 0}};
    Json& c = checks[r.name];
    const double prev = c["max_residual"].is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                    : c["max_residual"].get<double>();
    if (!std::isfinite(r.residual) || std::isnan(prev)) c["max_residual"] = nullptr;
    else c["max_residual"] = std::max(prev, r.residual);
    c["count"] = c["count"].get<int>() + 1;
    if (!r.pass) c["failed"] = c["failed"].get<int>() + 1;
  }
  return Json{{"checks", checks}, {"pass", pass()}};
}

Json report_json(const DefectReport& rep) {
  Json j;
  j["id"] = rep.id;
  j["kind"] = rep.kind;
  j["records"] = Json::array();
  for (const auto& r : rep.records) {
    Json e;
    e["name"] = r.name;
    e["point"] = r.point;
    if (std::isfinite(r.residual)) e["residual"] = r.residual;
    else e["residual"] = nullptr;
    if (std::isfinite(r.tolerance)) e["tolerance"] = r.tolerance;
    else e["tolerance"] = nullptr;
    e["pass"] = r.pass;
    if (!r.reason.empty()) e["reason"] = r.reason;
    j["records"].push_back(e);
  }
  j["summary"] = rep.summary();
  j["environment"] = {{"fd_step", rep.fd_step},
                      {"seed", rep.seed ? Json(*rep.seed) : Json(nullptr)},
                      {"version", rep.version}};
  j["timestamp"] = rep.timestamp;
  return j;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "md") return ReportFormat::Md;
  throw InputError("unknown format '" + s + "' (json, csv, md)");
}

std::string render_report(const DefectReport& rep, ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::Json) return report_json(rep).dump(2) + "\n";
  if (format == ReportFormat::Csv) {
    os << "scenario,check,point,residual,tolerance,pass,reason\n";
    for (const auto& r : rep.records)
      os << csv_escape(rep.id) << ',' << csv_escape(r.name) << ',' << csv_escape(r.point.dump()) << ','
         << num(r.residual) << ',' << num(r.tolerance) << ',' << (r.pass ? "true" : "false") << ','
         << csv_escape(r.reason) << '\n';
    return os.str();
  }
  const Json s = rep.summary();
  os << "## " << rep.id << " (" << rep.kind << ")\n\n";
  os << "| check | records | failed | max residual |\n|---|---|---|---|\n";
  for (const auto& [name, c] : s["checks"].items())
    os << "| " << name << " | " << c["count"].get<int>() << " | " << c["failed"].get<int>() << " | "
       << (c["max_residual"].is_null() ? std::string("n/a") : num(c["max_residual"].get<double>())) << " |\n";
  os << "\noverall: " << (rep.pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string triple_csv(const DefectReport& rep) {
  std::ostringstream os;
  os << "alpha,r_12,r_13,r_23,theta_1,theta_2,theta_3\n";
  for (const auto& t : rep.triples) {
    if (t.r.rows() < 3 || t.theta.cols() < 3) continue;
    os << num(t.alpha) << ',' << num(t.r(0, 1)) << ',' << num(t.r(0, 2)) << ',' << num(t.r(1, 2)) << ','
       << num(t.theta(0, 0)) << ',' << num(t.theta(0, 1)) << ',' << num(t.theta(0, 2)) << '\n';
  }
  return os.str();
}

std::string bracket_csv(const DefectReport& rep) {
  std::ostringstream os;
  os << "point,f,h,value\n";
  for (const auto& b : rep.brackets) os << b.point << ',' << b.f << ',' << b.h << ',' << num(b.value) << '\n';
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path() && !fs::exists(target.parent_path()))
    throw InputError("output directory does not exist: '" + target.parent_path().string() + "'");
  const fs::path tmp = fs::path(path + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw InputError("cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

}  // namespace qpdr

#include "qpdr/manifold.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace qpdr {

ProductManifold::ProductManifold(QuadraticLieAlgebra alg, int chart_dim, int group_factors)
    : alg_(std::move(alg)), k_(chart_dim), ng_(group_factors) {
  if (k_ < 0 || ng_ < 0) throw InputError("ProductManifold: negative factor count");
  s_ = FrameStructure(frame_size());
  const int n = alg_.dim;
  for (int g = 0; g < ng_; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const double v = alg_.f(a, b, c);
          s_.add(L(g, a), L(g, b), L(g, c), v);
          s_.add(R(g, a), R(g, b), R(g, c), -v);
        }
}

void ProductManifold::check_point(const Point& x) const {
  if (x.chart.size() != k_ || static_cast<int>(x.g.size()) != ng_)
    throw InputError("point does not match the manifold factors");
}

Point ProductManifold::flow(const Point& x, int field, double t) const {
  Point y = x;
  if (field < 0 || field >= frame_size()) throw InputError("flow: frame index out of range");
  if (field < k_) {
    y.chart(field) += t;
    return y;
  }
  const int n = alg_.dim;
  const int g = (field - k_) / (2 * n);
  const int r = (field - k_) % (2 * n);
  const GroupMatrix E = (t * alg_.rep[r % n]).exp();
  y.g[g] = r < n ? GroupMatrix(x.g[g] * E) : GroupMatrix(E * x.g[g]);
  return y;
}

Eigen::MatrixXd ProductManifold::trivialization(const Point& x) const {
  check_point(x);
  const int n = alg_.dim;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k_ + n * ng_, frame_size());
  T.topLeftCorner(k_, k_).setIdentity();
  for (int g = 0; g < ng_; ++g) {
    T.block(k_ + n * g, L(g, 0), n, n).setIdentity();
    T.block(k_ + n * g, R(g, 0), n, n) = adjoint(alg_, x.g[g].inverse());
  }
  return T;
}

namespace {

template <typename Eval>
auto central(const Eval& at, double h, bool richardson) {
  auto d = [&](double s) { return (at(s) - at(-s)) * (1.0 / (2.0 * s)); };
  if (!richardson) return d(h);
  return (4.0 * d(0.5 * h) - d(h)) * (1.0 / 3.0);
}

}  // namespace

double derive(const ProductManifold& M, int field, const ScalarFn& f, const Point& x,
              const FdOptions& opts) {
  const double v = central(
      [&](double t) {
        const double y = f(M.flow(x, field, t));
        if (!std::isfinite(y)) throw EvaluationError("derive: non-finite function value");
        return y;
      },
      opts.h, opts.richardson);
  return v;
}

Eigen::VectorXd differential(const ProductManifold& M, const ScalarFn& f, const Point& x,
                             const FdOptions& opts) {
  Eigen::VectorXd d(M.frame_size());
  for (int c = 0; c < M.frame_size(); ++c) d(c) = derive(M, c, f, x, opts);
  return d;
}

FramedField zero_field(const ProductManifold& M, int degree) {
  return constant_field(Multi(degree, M.frame_size()));
}

FramedField constant_field(Multi m) {
  FramedField f;
  f.degree = m.degree();
  f.constant = true;
  f.coeff = [m = std::move(m)](const Point&) { return m; };
  return f;
}

FramedField operator+(const FramedField& a, const FramedField& b) {
  if (a.degree != b.degree) throw InputError("field sum: degree mismatch");
  FramedField f;
  f.degree = a.degree;
  f.constant = a.constant && b.constant;
  f.coeff = [a, b](const Point& x) { return a.coeff(x) + b.coeff(x); };
  return f;
}

FramedField operator-(const FramedField& a, const FramedField& b) { return a + scaled(-1.0, b); }

FramedField scaled(double s, const FramedField& a) {
  FramedField f = a;
  f.coeff = [s, a](const Point& x) { return s * a.coeff(x); };
  return f;
}

std::vector<Multi> field_derivatives(const ProductManifold& M, const FramedField& field,
                                     const Point& x, const FdOptions& opts) {
  const int N = M.frame_size();
  std::vector<Multi> d(N);
  if (field.constant) {
    std::fill(d.begin(), d.end(), Multi(field.degree, N));
    return d;
  }
  for (int c = 0; c < N; ++c)
    d[c] = central([&](double t) { return field.coeff(M.flow(x, c, t)); }, opts.h, opts.richardson);
  return d;
}

double evaluate_array(const Multi& coeff, const std::vector<Eigen::VectorXd>& dfs) {
  return contract(coeff, dfs);
}

double evaluate(const ProductManifold& M, const FramedField& field,
                const std::vector<ScalarFn>& fs, const Point& x, const FdOptions& opts) {
  if (static_cast<int>(fs.size()) != field.degree)
    throw InputError("evaluate: number of functions must equal the field degree");
  std::vector<Eigen::VectorXd> dfs;
  for (const auto& f : fs) dfs.push_back(differential(M, f, x, opts));
  return evaluate_array(field.coeff(x), dfs);
}

Multi schouten(const ProductManifold& M, const FramedField& A, const FramedField& B,
               const Point& x, const FdOptions& opts) {
  if (A.degree + B.degree > 4) throw NotImplementedError("schouten: total degree above 4");
  return schouten_bracket(M.structure(), A.coeff(x), field_derivatives(M, A, x, opts),
                          B.coeff(x), field_derivatives(M, B, x, opts));
}

ScalarFn poisson_bracket(const ProductManifold& M, const FramedField& pi, const ScalarFn& f,
                         const ScalarFn& g, const FdOptions& opts) {
  if (pi.degree != 2) throw InputError("poisson_bracket: bivector expected");
  return [&M, pi, f, g, opts](const Point& y) {
    return evaluate_array(pi.coeff(y), {differential(M, f, y, opts), differential(M, g, y, opts)});
  };
}

double jacobiator(const ProductManifold& M, const FramedField& pi, const ScalarFn& f,
                  const ScalarFn& g, const ScalarFn& h, const Point& x, const FdOptions& opts) {
  auto br = [&](const ScalarFn& a, const ScalarFn& b) { return poisson_bracket(M, pi, a, b, opts); };
  return br(f, br(g, h))(x) + br(g, br(h, f))(x) + br(h, br(f, g))(x);
}

ActionModel ActionModel::uniform(int factors, ActionKind kind) {
  ActionModel a;
  a.kinds.assign(factors, kind);
  return a;
}

Eigen::MatrixXd rho_matrix(const ProductManifold& M, const ActionModel& act, const Point& x) {
  const int n = M.alg_dim();
  if (static_cast<int>(act.kinds.size()) != M.group_factors())
    throw InputError("rho_matrix: action kinds do not match the group factors");
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(M.frame_size(), n);
  if (act.chart_part) {
    const Eigen::MatrixXd c = act.chart_part(x.chart);
    if (c.cols() != n || c.rows() > M.chart_dim()) throw InputError("rho_matrix: chart part has wrong shape");
    W.topRows(c.rows()) = c;
  }
  for (int g = 0; g < M.group_factors(); ++g)
    for (int a = 0; a < n; ++a) switch (act.kinds[g]) {
        case ActionKind::None:
          break;
        case ActionKind::Conjugation:
          W(M.L(g, a), a) += act.mu;
          W(M.R(g, a), a) -= act.mu;
          break;
        case ActionKind::Left:
          W(M.R(g, a), a) -= act.mu;
          break;
        case ActionKind::Right:
          W(M.L(g, a), a) += act.mu;
          break;
      }
  return W;
}

Multi rho_push(const ProductManifold& M, const ActionModel& act, int k, const Multi& elem,
               const Point& x) {
  const int n = M.alg_dim();
  if (k > M.chart_dim()) throw InputError("rho_extend: chart part larger than the manifold chart");
  if (elem.degree() > 0 && elem.size() != k + n) throw InputError("rho_extend: element has wrong size");
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(M.frame_size(), k + n);
  map.topLeftCorner(k, k).setIdentity();
  map.rightCols(n) = rho_matrix(M, act, x);
  return push(elem, map);
}

FramedField rho_extend(const ProductManifold& M, const ActionModel& act, int k, int degree,
                       MixedFn elem) {
  FramedField f;
  f.degree = degree;
  f.coeff = [M, act, k, elem](const Point& x) { return rho_push(M, act, k, elem(x), x); };
  return f;
}

Eigen::MatrixXd CrossSection::tangents(const ProductManifold& M, const Eigen::VectorXd& alpha) const {
  if (alpha.size() != k) throw InputError("section: chart point has wrong dimension");
  if (tangent) return tangent(alpha);
  const QuadraticLieAlgebra& alg = M.algebra();
  const int n = alg.dim;
  const Point x = embed(alpha);
  M.check_point(x);
  Eigen::MatrixXd U(M.chart_dim() + n * M.group_factors(), k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd ap = alpha, am = alpha;
    ap(i) += fd_step;
    am(i) -= fd_step;
    const Point xp = embed(ap), xm = embed(am);
    U.col(i).head(M.chart_dim()) = (xp.chart - xm.chart) / (2 * fd_step);
    for (int g = 0; g < M.group_factors(); ++g)
      U.col(i).segment(M.chart_dim() + n * g, n) =
          alg.from_matrix(x.g[g].inverse() * (xp.g[g] - xm.g[g]) / (2 * fd_step));
  }
  return U;
}

}  // namespace qpdr

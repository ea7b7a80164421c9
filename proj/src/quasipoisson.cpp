#include "qpdr/quasipoisson.hpp"

#include <Eigen/Dense>

#include <sstream>

#include "qpdr/fockrosly.hpp"

namespace qpdr {

Multi mixed_bivector(const Eigen::MatrixXd& pi_U, const Eigen::MatrixXd& theta,
                     const Eigen::MatrixXd& r) {
  const int k = static_cast<int>(pi_U.rows()), n = static_cast<int>(r.rows());
  if (pi_U.cols() != k || r.cols() != n || theta.rows() != k || theta.cols() != n)
    throw InputError("mixed_bivector: inconsistent triple shapes");
  Multi m(2, k + n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = pi_U(i, j);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < n; ++a) {
      m(i, k + a) = theta(i, a);
      m(k + a, i) = -theta(i, a);
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(k + a, k + b) = r(a, b);
  return m;
}

Multi mixed_bivector(const DynamicalTriple& t, const Eigen::VectorXd& alpha) {
  return mixed_bivector(t.pi_U(alpha), t.theta(alpha), t.r(alpha));
}

DynamicalTriple zero_triple(int k, int n) {
  DynamicalTriple t;
  t.k = k;
  t.n = n;
  t.pi_U = [k](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(k, k); };
  t.theta = [k, n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(k, n); };
  t.r = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, n); };
  return t;
}

namespace {

// Frame map of a factor block of `small` placed at (chart_off, factor_off) in `big`.
Eigen::MatrixXd frame_embedding(const ProductManifold& big, const ProductManifold& small,
                                int chart_off, int factor_off) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(big.frame_size(), small.frame_size());
  for (int i = 0; i < small.chart_dim(); ++i) E(chart_off + i, i) = 1.0;
  for (int g = 0; g < small.group_factors(); ++g)
    for (int a = 0; a < small.alg_dim(); ++a) {
      E(big.L(factor_off + g, a), small.L(g, a)) = 1.0;
      E(big.R(factor_off + g, a), small.R(g, a)) = 1.0;
    }
  return E;
}

Point restrict_point(const Point& x, int chart_off, int k, int factor_off, int ng) {
  Point y;
  y.chart = x.chart.segment(chart_off, k);
  y.g.assign(x.g.begin() + factor_off, x.g.begin() + factor_off + ng);
  return y;
}

FramedField embed_field(const FramedField& f, const ProductManifold& big,
                        const ProductManifold& small, int chart_off, int factor_off) {
  const Eigen::MatrixXd E = frame_embedding(big, small, chart_off, factor_off);
  const int k = small.chart_dim(), ng = small.group_factors();
  FramedField out;
  out.degree = f.degree;
  out.constant = f.constant;
  out.coeff = [f, E, chart_off, k, factor_off, ng](const Point& x) {
    return push(f.coeff(restrict_point(x, chart_off, k, factor_off, ng)), E);
  };
  return out;
}

// Action of `small` seen on `big`, with the chart part shifted to chart_off.
ActionModel embed_action(const ActionModel& act, const ProductManifold& small, int chart_off,
                         int big_chart) {
  ActionModel out;
  out.mu = act.mu;
  out.kinds = act.kinds;
  if (act.chart_part) {
    const int k = small.chart_dim();
    auto cp = act.chart_part;
    out.chart_part = [cp, chart_off, k, big_chart](const Eigen::VectorXd& c) {
      const Eigen::MatrixXd part = cp(c.segment(chart_off, k));
      Eigen::MatrixXd full = Eigen::MatrixXd::Zero(big_chart, part.cols());
      full.block(chart_off, 0, part.rows(), part.cols()) = part;
      return full;
    };
  }
  return out;
}

Multi frame_wedge(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return wedge(vector_multi<double>(u), vector_multi<double>(v));
}

}  // namespace

QuasiPoissonSpace build_pi_G(const QuadraticLieAlgebra& alg) {
  ProductManifold M(alg, 0, 1);
  const int N = M.frame_size();
  Multi P(2, N);
  for (int a = 0; a < alg.dim; ++a)
    for (int b = 0; b < alg.dim; ++b) {
      const double w = kPiGScale * alg.Kinv(a, b);
      if (w == 0.0) continue;
      P(M.R(0, a), M.L(0, b)) += w;
      P(M.L(0, b), M.R(0, a)) -= w;
    }
  return QuasiPoissonSpace{M, constant_field(P), ActionModel::uniform(1, ActionKind::Conjugation),
                           {false}};
}

QuasiPoissonSpace group_space(const QuadraticLieAlgebra& alg, ActionKind kind) {
  ProductManifold M(alg, 0, 1);
  return QuasiPoissonSpace{M, zero_field(M, 2), ActionModel::uniform(1, kind), {false}};
}

QuasiPoissonSpace point_space(const QuadraticLieAlgebra& alg) {
  ProductManifold M(alg, 0, 0);
  return QuasiPoissonSpace{M, zero_field(M, 2), ActionModel::uniform(0, ActionKind::None), {}};
}

namespace {

struct Product {
  ProductManifold M;
  FramedField pa, pb;
  ActionModel act;
  Eigen::MatrixXd EA, EB;
  ActionModel actA, actB;
};

Product product(const QuasiPoissonSpace& A, const QuasiPoissonSpace& B) {
  if (A.M.algebra().name != B.M.algebra().name || A.M.alg_dim() != B.M.alg_dim())
    throw InputError("fuse: the spaces carry different algebras");
  const int kA = A.M.chart_dim(), kB = B.M.chart_dim();
  const int gA = A.M.group_factors(), gB = B.M.group_factors();
  ProductManifold M(A.M.algebra(), kA + kB, gA + gB);
  const ActionModel actA = embed_action(A.action, A.M, 0, kA + kB);
  const ActionModel actB = embed_action(B.action, B.M, kA, kA + kB);
  ActionModel act;
  act.mu = A.action.mu;
  act.kinds = A.action.kinds;
  act.kinds.insert(act.kinds.end(), B.action.kinds.begin(), B.action.kinds.end());
  if (actA.chart_part || actB.chart_part) {
    act.chart_part = [actA, actB, kA, kB, n = M.alg_dim()](const Eigen::VectorXd& c) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kA + kB, n);
      if (actA.chart_part) m += actA.chart_part(c);
      if (actB.chart_part) m += actB.chart_part(c);
      return m;
    };
  }
  return Product{M,
                 embed_field(A.pi, M, A.M, 0, 0),
                 embed_field(B.pi, M, B.M, kA, gA),
                 act,
                 frame_embedding(M, A.M, 0, 0),
                 frame_embedding(M, B.M, kA, gA),
                 actA,
                 actB};
}

FramedField cross_term(const Product& P, const QuasiPoissonSpace& A, const QuasiPoissonSpace& B) {
  const int kA = A.M.chart_dim(), kB = B.M.chart_dim();
  const int gA = A.M.group_factors(), gB = B.M.group_factors();
  const QuadraticLieAlgebra& alg = A.M.algebra();
  FramedField f;
  f.degree = 2;
  f.constant = !A.action.chart_part && !B.action.chart_part;
  f.coeff = [EA = P.EA, EB = P.EB, MA = A.M, MB = B.M, actA = A.action, actB = B.action, Kinv = alg.Kinv,
             kA, kB, gA, gB](const Point& x) {
    const Eigen::MatrixXd WA = EA * rho_matrix(MA, actA, restrict_point(x, 0, kA, 0, gA));
    const Eigen::MatrixXd WB = EB * rho_matrix(MB, actB, restrict_point(x, kA, kB, gA, gB));
    Multi out(2, static_cast<int>(EA.rows()));
    for (int a = 0; a < Kinv.rows(); ++a)
      for (int b = 0; b < Kinv.cols(); ++b)
        if (Kinv(a, b) != 0.0) out += Kinv(a, b) * frame_wedge(WA.col(a), WB.col(b));
    return out;
  };
  return f;
}

}  // namespace

FramedField fusion_term(const QuasiPoissonSpace& A, const QuasiPoissonSpace& B) {
  return cross_term(product(A, B), A, B);
}

QuasiPoissonSpace fuse(const QuasiPoissonSpace& A, const QuasiPoissonSpace& B) {
  Product P = product(A, B);
  FramedField pi = P.pa + P.pb - cross_term(P, A, B);
  std::vector<bool> cls = A.class_factor;
  cls.insert(cls.end(), B.class_factor.begin(), B.class_factor.end());
  return QuasiPoissonSpace{P.M, pi, P.act, cls};
}

QuasiPoissonSpace build_surface_quasi(const QuadraticLieAlgebra& alg, int n_classes, int genus) {
  if (n_classes < 0 || genus < 0 || n_classes + 2 * genus < 1)
    throw InputError("build_surface_quasi: empty surface data");
  if (genus == 0) {
    QuasiPoissonSpace s = build_pi_G(alg);
    s.class_factor = {true};
    for (int i = 1; i < n_classes; ++i) {
      QuasiPoissonSpace c = build_pi_G(alg);
      c.class_factor = {true};
      s = fuse(s, c);
    }
    return s;
  }
  ProductManifold M(alg, 0, n_classes + 2 * genus);
  Multi P = fr_array(M, n_classes, genus, alg.Kinv);
  P *= kPiGScale;
  std::vector<bool> cls(n_classes + 2 * genus, false);
  std::fill(cls.begin(), cls.begin() + n_classes, true);
  return QuasiPoissonSpace{M, constant_field(P),
                           ActionModel::uniform(n_classes + 2 * genus, ActionKind::Conjugation), cls};
}

Multi quasi_defect_array(const QuasiPoissonSpace& space, const Point& x, const FdOptions& opts) {
  const Multi S = schouten(space.M, space.pi, space.pi, x, opts);
  return S - rho_push(space.M, space.action, 0, cartan_three_tensor(space.M.algebra()), x);
}

double quasi_defect(const QuasiPoissonSpace& space, const ScalarFn& f, const ScalarFn& g,
                    const ScalarFn& h, const Point& x, const FdOptions& opts) {
  const Multi D = quasi_defect_array(space, x, opts);
  return evaluate_array(D, {differential(space.M, f, x, opts), differential(space.M, g, x, opts),
                            differential(space.M, h, x, opts)});
}

Decomposition decompose_on_section(const QuasiPoissonSpace& space, const CrossSection& U,
                                   const Eigen::VectorXd& alpha) {
  const ProductManifold& M = space.M;
  const int n = M.alg_dim(), k = U.k;
  const Point x = U.embed(alpha);
  M.check_point(x);
  const Eigen::MatrixXd T = M.trivialization(x);
  const Eigen::MatrixXd P = multi_matrix(push(space.pi.coeff(x), T));
  const Eigen::MatrixXd W = T * rho_matrix(M, space.action, x);
  const Eigen::MatrixXd u = U.tangents(M, alpha);

  Eigen::JacobiSVD<Eigen::MatrixXd> sw(W);
  const Eigen::VectorXd sv = sw.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-8 * std::max(1.0, sv(0))) {
    std::ostringstream os;
    os << "stabilizer: the action is not locally free at the section point (singular value "
       << (sv.size() ? sv(sv.size() - 1) : 0.0) << ")";
    throw DegeneracyError(os.str());
  }
  Eigen::MatrixXd B(T.rows(), k + n);
  B << u, W;
  Eigen::JacobiSVD<Eigen::MatrixXd> sb(B);
  const Eigen::VectorXd s = sb.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * std::max(1.0, s(0))) ++rank;
  int tangent_dim = M.chart_dim();
  for (int g = 0; g < M.group_factors(); ++g) {
    const bool cls = g < static_cast<int>(space.class_factor.size()) && space.class_factor[g];
    tangent_dim += cls ? n - stabilizer(M.algebra(), x.g[g]).stab_dim() : n;
  }
  if (rank < k + n || k + n != tangent_dim) {
    std::ostringstream os;
    os << "transversality: section tangent plus action span has rank " << rank << ", expected "
       << tangent_dim << " with k + n = " << k + n;
    throw DegeneracyError(os.str());
  }
  const Eigen::MatrixXd Bp = B.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::MatrixXd Q = Bp * P * Bp.transpose();
  Decomposition d;
  d.residual = (B * Q * B.transpose() - P).cwiseAbs().maxCoeff();
  d.pi_U = Q.topLeftCorner(k, k);
  d.theta = -Q.topRightCorner(k, n);
  d.r = Q.bottomRightCorner(n, n);
  return d;
}

QuasiPoissonSpace assemble(const DynamicalTriple& triple, const QuasiPoissonSpace& N) {
  const int k = triple.k, n = N.M.alg_dim();
  if (triple.n != n) throw InputError("assemble: triple and space use different algebras");
  const int kN = N.M.chart_dim(), gN = N.M.group_factors();
  ProductManifold M(N.M.algebra(), k + kN, gN);
  const ActionModel act = embed_action(N.action, N.M, k, k + kN);
  FramedField piN = embed_field(N.pi, M, N.M, k, 0);
  FramedField lifted;
  lifted.degree = 2;
  lifted.coeff = [M, act, triple](const Point& x) {
    return rho_push(M, act, triple.k, mixed_bivector(triple, x.chart.head(triple.k)), x);
  };
  return QuasiPoissonSpace{M, lifted + piN, act, N.class_factor};
}

}  // namespace qpdr

#include "qpdr/gspace.hpp"

#include <Eigen/Dense>

#include <sstream>

#include "qpdr/errors.hpp"
#include "qpdr/group.hpp"

namespace qpdr {

namespace {

Eigen::MatrixXd h_pinv(const Eigen::MatrixXd& hb) {
  return hb.completeOrthogonalDecomposition().pseudoInverse();
}

// Dual coordinates of Ad*_{k^-1} x: x'_j = <x, Ad_k h_j> = sum_i D(i,j) x_i.
Eigen::MatrixXd coadjoint_coords(const ClassicalDynamicalRMatrix& cdr, const GroupMatrix& k) {
  return h_pinv(cdr.h_basis) * adjoint(cdr.alg, k) * cdr.h_basis;
}

}  // namespace

PoissonSpace build_sklyanin(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& r0) {
  const int n = alg.dim;
  if (r0.rows() != n || r0.cols() != n) throw InputError("sklyanin: r0 has wrong shape");
  if ((r0 + r0.transpose()).norm() > 1e-12) throw InputError("sklyanin: r0 is not skew");
  ProductManifold M(alg, 0, 1);
  Multi P(2, M.frame_size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      P(M.L(0, a), M.L(0, b)) = r0(a, b);
      P(M.R(0, a), M.R(0, b)) = -r0(a, b);
    }
  return PoissonSpace{M, constant_field(P)};
}

Eigen::MatrixXd subalgebra_structure(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& hb,
                                     double tol) {
  const int m = hb.cols();
  if (hb.rows() != alg.dim) throw InputError("subalgebra: basis has wrong row count");
  const Eigen::MatrixXd pinv = h_pinv(hb);
  Eigen::MatrixXd c(m, m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXd br = bracket(alg, hb.col(i), hb.col(j));
      const Eigen::VectorXd coef = pinv * br;
      const double res = (hb * coef - br).norm();
      if (res > tol * std::max(1.0, br.norm())) {
        std::ostringstream os;
        os << "subalgebra: [h_" << i << ", h_" << j << "] leaves the span (residual " << res << ")";
        throw InputError(os.str());
      }
      c.col(i * m + j) = coef;
    }
  return c;
}

PoissonSpace build_kks(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& h_basis) {
  const int m = h_basis.cols();
  const Eigen::MatrixXd c = subalgebra_structure(alg, h_basis);
  ProductManifold M(alg, m, 0);
  FramedField pi;
  pi.degree = 2;
  pi.coeff = [c, m](const Point& x) {
    Multi P(2, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) P(i, j) = c.col(i * m + j).dot(x.chart);
    return P;
  };
  return PoissonSpace{M, pi};
}

PoissonSpace build_pi_r_gspace(const ClassicalDynamicalRMatrix& cdr, const Eigen::MatrixXd& r0) {
  const QuadraticLieAlgebra& alg = cdr.alg;
  const int n = alg.dim, m = cdr.h_basis.cols();
  if (r0.rows() != n || r0.cols() != n) throw InputError("pi_r: r0 has wrong shape");
  const Eigen::MatrixXd c = subalgebra_structure(alg, cdr.h_basis);
  ProductManifold M(alg, m, 1);
  const Eigen::MatrixXd hb = cdr.h_basis;
  auto Ar = cdr.A_r;
  FramedField pi;
  pi.degree = 2;
  pi.coeff = [M, c, hb, Ar, r0, n, m](const Point& x) {
    Multi P(2, M.frame_size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) P(i, j) = c.col(i * m + j).dot(x.chart);
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < n; ++a) {
        P(i, M.L(0, a)) += hb(a, i);
        P(M.L(0, a), i) -= hb(a, i);
      }
    const Eigen::MatrixXd A = Ar ? Ar(x.chart) : Eigen::MatrixXd::Zero(n, n);
    if (A.rows() != n || A.cols() != n) throw InputError("pi_r: A_r has wrong shape");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        P(M.L(0, a), M.L(0, b)) += A(a, b);
        P(M.R(0, a), M.R(0, b)) -= r0(a, b);
      }
    return P;
  };
  return PoissonSpace{M, pi};
}

double poisson_action_defect(const PoissonSpace& pi_r, const PoissonSpace& sklyanin,
                             const GroupMatrix& g1, const Point& a, const ScalarFn& f,
                             const ScalarFn& h, const FdOptions& opts) {
  const Point moved{a.chart, {g1 * a.g[0]}};
  const double lhs = poisson_bracket(pi_r.M, pi_r.pi, f, h, opts)(moved);
  auto left = [g1](const ScalarFn& fn) {
    return ScalarFn([g1, fn](const Point& p) { return fn(Point{p.chart, {g1 * p.g[0]}}); });
  };
  const double t1 = poisson_bracket(pi_r.M, pi_r.pi, left(f), left(h), opts)(a);
  auto orbit = [a](const ScalarFn& fn) {
    return ScalarFn([a, fn](const Point& q) { return fn(Point{a.chart, {q.g[0] * a.g[0]}}); });
  };
  const double t2 =
      poisson_bracket(sklyanin.M, sklyanin.pi, orbit(f), orbit(h), opts)(Point{Eigen::VectorXd(), {g1}});
  return lhs - t1 - t2;
}

Point h_act(const ClassicalDynamicalRMatrix& cdr, const GroupMatrix& k, const Point& a) {
  const Eigen::MatrixXd D = coadjoint_coords(cdr, k);
  return Point{D.transpose() * a.chart, {a.g[0] * k}};
}

double h_invariance_defect(const ClassicalDynamicalRMatrix& cdr, const PoissonSpace& pi_r,
                           const GroupMatrix& k, const Point& a, const ScalarFn& f,
                           const ScalarFn& h, const FdOptions& opts) {
  auto pull = [cdr, k](const ScalarFn& fn) {
    return ScalarFn([cdr, k, fn](const Point& p) { return fn(h_act(cdr, k, p)); });
  };
  return poisson_bracket(pi_r.M, pi_r.pi, pull(f), pull(h), opts)(a) -
         poisson_bracket(pi_r.M, pi_r.pi, f, h, opts)(h_act(cdr, k, a));
}

double h_equivariance_residual(const ClassicalDynamicalRMatrix& cdr, const GroupMatrix& k,
                               const Eigen::VectorXd& x) {
  if (!cdr.A_r) return 0.0;
  const Eigen::MatrixXd D = coadjoint_coords(cdr, k);
  const Eigen::MatrixXd Ad = adjoint(cdr.alg, k.inverse());
  return (cdr.A_r(D.transpose() * x) - Ad * cdr.A_r(x) * Ad.transpose()).norm();
}

}  // namespace qpdr

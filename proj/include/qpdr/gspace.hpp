#pragma once

#include "qpdr/manifold.hpp"
#include "qpdr/triple.hpp"

namespace qpdr {

struct PoissonSpace {
  ProductManifold M;
  FramedField pi;
};

// Subalgebra h (basis columns) with A_r on the chart of h* given in the dual
// coordinates x_i = <x, h_i>.
struct ClassicalDynamicalRMatrix {
  QuadraticLieAlgebra alg;
  Eigen::MatrixXd h_basis;
  ChartMatrixFn A_r;
  double epsilon = 0;  // coefficient of kappa/2 in the symmetric part
};

// r0^L - r0^R on G.
PoissonSpace build_sklyanin(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& r0);

// {x_i, x_j} = sum_k c_ij^k x_k on the dual of h, [h_i,h_j] = sum_k c_ij^k h_k.
// Throws InputError if h is not closed under the bracket.
Eigen::MatrixXd subalgebra_structure(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& h_basis,
                                     double tol = 1e-9);  // returns m x m*m, column i*m+j
PoissonSpace build_kks(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& h_basis);

// pi_KKS + sum_i d_i ^ L_{h_i} + A_r^L - r0^R on h* x G.
PoissonSpace build_pi_r_gspace(const ClassicalDynamicalRMatrix& cdr, const Eigen::MatrixXd& r0);

// pi_r(g1 a)(df,dh) - pi_r(a)(d(f g1), d(h g1)) - pi_G(g1)(d(f . a), d(h . a)).
double poisson_action_defect(const PoissonSpace& pi_r, const PoissonSpace& sklyanin,
                             const GroupMatrix& g1, const Point& a, const ScalarFn& f,
                             const ScalarFn& h, const FdOptions& opts = {});

// The twisted right action (x, g) -> (Ad*_{k^-1} x, g k) of k in H.
Point h_act(const ClassicalDynamicalRMatrix& cdr, const GroupMatrix& k, const Point& a);
// {f o Phi_k, h o Phi_k}(a) - {f,h}(Phi_k(a)).
double h_invariance_defect(const ClassicalDynamicalRMatrix& cdr, const PoissonSpace& pi_r,
                           const GroupMatrix& k, const Point& a, const ScalarFn& f,
                           const ScalarFn& h, const FdOptions& opts = {});
// |A_r(Ad*_{k^-1} x) - Ad_{k^-1} A_r(x)| for k in H.
double h_equivariance_residual(const ClassicalDynamicalRMatrix& cdr, const GroupMatrix& k,
                               const Eigen::VectorXd& x);

}  // namespace qpdr

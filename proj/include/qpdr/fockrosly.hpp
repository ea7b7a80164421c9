#pragma once

#include <vector>

#include "qpdr/quasipoisson.hpp"

namespace qpdr {

// Holonomy slots: punctures M_1..M_n, then A_1, B_1, ..., A_g, B_g.
struct SurfaceScenario {
  QuadraticLieAlgebra alg;
  int n = 0;
  int genus = 0;
  std::vector<GroupMatrix> classes;  // base points of the puncture classes
  Eigen::MatrixXd r;                 // full r-matrix (skew part + symmetric part)

  int slots() const { return n + 2 * genus; }
  int operators() const { return 2 * slots(); }
  ProductManifold manifold() const { return ProductManifold(alg, 0, slots()); }
};

SurfaceScenario make_surface(const QuadraticLieAlgebra& alg, int n, int genus,
                             std::vector<GroupMatrix> classes, const Eigen::MatrixXd& r);
// r = skew + kappa.
Eigen::MatrixXd r_with_casimir(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& skew);

// Rows a: frame covector of the a-th component of nabla_i (1-based i).
// nabla_R f = -L_a f, nabla_L f = R_a f; nabla_{2i-1} = nabla_R^{M_i},
// nabla_{2i} = nabla_L^{M_i}; genus block at 2n+4i-3..2n+4i is
// nabla_R^{A_i}, nabla_R^{B_i}, nabla_L^{A_i}, nabla_L^{B_i}.
Eigen::MatrixXd nabla_covectors(const ProductManifold& M, int n, int genus, int i);
Eigen::VectorXd nabla(const SurfaceScenario& s, int i, const ScalarFn& f, const Point& x,
                      const FdOptions& opts = {});

// 1/2 sum_i <r, nabla_i ^ nabla_i> + sum_{i<j} <r, nabla_i ^ nabla_j> as a frame bivector.
Multi fr_array(const ProductManifold& M, int n, int genus, const Eigen::MatrixXd& r);
FramedField fr_field(const SurfaceScenario& s);
double fr_bracket(const SurfaceScenario& s, const ScalarFn& f, const ScalarFn& h, const Point& x,
                  const FdOptions& opts = {});

double cybe_check(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& r);

// pi_U + rho_N(theta^) + rho_N(r) + pi_N with N the remaining n-2 classes and
// genus slots; the triple lives on a section through the first two classes.
QuasiPoissonSpace reduced_space(const QuadraticLieAlgebra& alg, const DynamicalTriple& triple,
                                int n, int genus);
double reduced_bracket(const QuasiPoissonSpace& red, const ScalarFn& F, const ScalarFn& H,
                       const Point& x, const FdOptions& opts = {});

}  // namespace qpdr

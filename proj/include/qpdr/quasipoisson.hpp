#pragma once

#include <vector>

#include "qpdr/manifold.hpp"
#include "qpdr/triple.hpp"

namespace qpdr {

// pi_G = kPiGScale sum K^{ab} R_a ^ L_b. With conjugation generators
// mu (L_a - R_a) this satisfies [pi,pi] = rho(phi), and the fused product
// agrees with the Fock-Rosly tensor for r = kappa scaled by the same constant.
inline constexpr double kPiGScale = -kActionScale * kActionScale;

struct QuasiPoissonSpace {
  ProductManifold M;
  FramedField pi;
  ActionModel action;
  std::vector<bool> class_factor;  // group factor restricted to a conjugacy class
};

QuasiPoissonSpace build_pi_G(const QuadraticLieAlgebra& alg);
// A group factor with zero bivector and the given action (the N = G slot of assemble).
QuasiPoissonSpace group_space(const QuadraticLieAlgebra& alg, ActionKind kind);
// The one-point space.
QuasiPoissonSpace point_space(const QuadraticLieAlgebra& alg);

// pi_A + pi_B - sum K^{ab} rho_A(e_a) ^ rho_B(e_b), diagonal action.
QuasiPoissonSpace fuse(const QuasiPoissonSpace& A, const QuasiPoissonSpace& B);
// Fusion-free cross term sum K^{ab} rho_A(e_a) ^ rho_B(e_b) on A x B.
FramedField fusion_term(const QuasiPoissonSpace& A, const QuasiPoissonSpace& B);

// Genus 0: iterated fusion of the class factors. Genus > 0: Fock-Rosly
// tensor for r = kappa on n classes and 2g group slots.
QuasiPoissonSpace build_surface_quasi(const QuadraticLieAlgebra& alg, int n_classes, int genus);

double quasi_defect(const QuasiPoissonSpace& space, const ScalarFn& f, const ScalarFn& g,
                    const ScalarFn& h, const Point& x, const FdOptions& opts = {});
// Full defect array [pi,pi] - rho(phi) at x.
Multi quasi_defect_array(const QuasiPoissonSpace& space, const Point& x, const FdOptions& opts = {});

struct Decomposition {
  Eigen::MatrixXd pi_U;
  Eigen::MatrixXd theta;
  Eigen::MatrixXd r;
  double residual = 0;
};

// pi|_U = pi_U - rho(theta^) + rho(r), solved in the left-trivialized tangent
// space by a minimal-norm least-squares fit.
Decomposition decompose_on_section(const QuasiPoissonSpace& space, const CrossSection& U,
                                   const Eigen::VectorXd& alpha);

// pi_U + rho_N(theta^) + rho_N(r) + pi_N on U x N (chart of U first).
QuasiPoissonSpace assemble(const DynamicalTriple& triple, const QuasiPoissonSpace& N);

}  // namespace qpdr

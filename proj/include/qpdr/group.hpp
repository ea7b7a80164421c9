#pragma once

#include <Eigen/Dense>

#include <string>

#include "qpdr/liealg.hpp"

namespace qpdr {

using GroupMatrix = Eigen::MatrixXcd;

GroupMatrix exponential(const QuadraticLieAlgebra& alg, const Eigen::VectorXd& x);
// Principal logarithm; throws DomainError if ||g - I||_2 >= radius.
Eigen::VectorXd logarithm(const QuadraticLieAlgebra& alg, const GroupMatrix& g, double radius = 1.0);

// Ad(c,a): g e_a g^-1 = sum_c Ad(c,a) e_c.
Eigen::MatrixXd adjoint(const QuadraticLieAlgebra& alg, const GroupMatrix& g);

struct ConjugacyClass {
  GroupMatrix base;
  Eigen::MatrixXd stab_basis;  // columns span ker(Ad - I)
  Eigen::MatrixXd perp_basis;  // columns span the K-orthogonal complement
  Eigen::MatrixXd proj_perp;   // projection onto perp along stab
  bool near_degenerate = false;
  double gap_ratio = 0;  // largest dropped / smallest kept singular value
  std::string warning;

  int stab_dim() const { return static_cast<int>(stab_basis.cols()); }
};

struct StabilizerOptions {
  double rel_threshold = 1e-8;
  double gap_bound = 1e-4;
};

ConjugacyClass stabilizer(const QuadraticLieAlgebra& alg, const GroupMatrix& g,
                          const StabilizerOptions& opts = {});

// (Ad_g + 1)(Ad_g - 1)^-1 on the complement of the stabilizer, composed with
// the projection onto it. Throws DegeneracyError if the restricted block is singular.
Eigen::MatrixXd cayley_operator(const QuadraticLieAlgebra& alg, const GroupMatrix& g,
                                const StabilizerOptions& opts = {});

// S with sum K^{ab} R_a ^ L_b = sum S(a,b) X_a ^ X_b, X_a = L_a - R_a, on the class of g.
Eigen::MatrixXd class_bivector(const QuadraticLieAlgebra& alg, const GroupMatrix& g,
                               const StabilizerOptions& opts = {});

}  // namespace qpdr

#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "qpdr/tensor.hpp"

namespace qpdr {

// Scale mu of the infinitesimal actions: the conjugation generator of e_a is
// mu (L_a - R_a), so [rho(x), rho(y)] = mu rho([x,y]). The graded bracket on
// Lambda g is built from mu f so that rho_extend preserves brackets and
// [r,r] equals the three-term sum [r12,r13] + [r12,r23] + [r13,r23].
inline constexpr double kActionScale = 0.5;

struct QuadraticLieAlgebra {
  std::string name;
  int dim = 0;
  std::vector<std::string> labels;
  Multi f;            // [e_a, e_b] = sum_c f(a,b,c) e_c
  Eigen::MatrixXd K;  // <e_a, e_b>
  Eigen::MatrixXd Kinv;
  std::vector<Eigen::MatrixXcd> rep;
  Eigen::MatrixXd rep_pinv;  // coefficients from stacked (re, im) entries

  int rep_size() const { return rep.empty() ? 0 : static_cast<int>(rep[0].rows()); }
  Eigen::MatrixXcd to_matrix(const Eigen::VectorXd& x) const;
  Eigen::VectorXd from_matrix(const Eigen::MatrixXcd& m) const;
  Eigen::VectorXd basis_vector(int a) const { return Eigen::VectorXd::Unit(dim, a); }
};

struct AlgebraInvariants {
  double antisymmetry = 0;
  double jacobi = 0;
  double ad_invariance = 0;
  double abs_det_K = 0;
  double symmetry_K = 0;
  double rep_homomorphism = 0;
};

struct Cobracket {
  Multi d;  // delta(e_a) = sum d(a,b,c) e_b ^ e_c, antisymmetric in (b,c)
};

// Builds and validates an algebra; throws InputError if an invariant fails
// beyond `tol` or if K is degenerate.
QuadraticLieAlgebra make_algebra(std::string name, std::vector<std::string> labels, Multi f,
                                 Eigen::MatrixXd K, std::vector<Eigen::MatrixXcd> rep,
                                 double tol = 1e-9);

QuadraticLieAlgebra su2();
QuadraticLieAlgebra iso21();
QuadraticLieAlgebra abelian(int n);
// "su2", "iso21", "abelian:<n>".
QuadraticLieAlgebra preset_algebra(const std::string& name);
std::vector<std::string> algebra_preset_names();
// {dim, labels, f, K, rep}; rep entries are real nested arrays or {"re":..,"im":..}.
QuadraticLieAlgebra algebra_from_json_text(const std::string& text);

AlgebraInvariants check_invariants(const QuadraticLieAlgebra& alg);

Eigen::VectorXd bracket(const QuadraticLieAlgebra& alg, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y);
// Matrix of ad_x in the basis: (ad_x)(c,a) = sum_b x_b f(b,a,c).
Eigen::MatrixXd ad_matrix(const QuadraticLieAlgebra& alg, const Eigen::VectorXd& x);

// kappa = sum K^{ab} e_a (x) e_b as a 2-array.
Multi casimir(const QuadraticLieAlgebra& alg);
// [kappa^{12}, kappa^{23}].
Multi kappa_commutator(const QuadraticLieAlgebra& alg);
// phi^{abc} raised from <[e_a,e_b],e_c>; equals -[kappa^{12}, kappa^{23}].
Multi cartan_three_tensor(const QuadraticLieAlgebra& alg);

// Schouten bracket on Lambda g for degrees in {1,2}, built from mu f.
Multi graded_bracket(const QuadraticLieAlgebra& alg, const Multi& A, const Multi& B);

// [r12,r13] + [r12,r23] + [r13,r23] for an arbitrary 2-tensor r.
Multi cybe_defect(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& r);

// delta extended as a degree +1 derivation; A of degree 1 or 2.
Multi cobracket_apply(const Cobracket& delta, const Multi& A);
double cobracket_co_jacobi_residual(const Cobracket& delta);
double cobracket_cocycle_residual(const QuadraticLieAlgebra& alg, const Cobracket& delta);

// Derivation action of ad_x on a tensor of any degree (sum over slots).
Multi ad_act(const QuadraticLieAlgebra& alg, const Eigen::VectorXd& x, const Multi& t);

}  // namespace qpdr

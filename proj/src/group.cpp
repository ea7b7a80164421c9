#include "qpdr/group.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpdr {

GroupMatrix exponential(const QuadraticLieAlgebra& alg, const Eigen::VectorXd& x) {
  return alg.to_matrix(x).exp();
}

Eigen::VectorXd logarithm(const QuadraticLieAlgebra& alg, const GroupMatrix& g, double radius) {
  const int m = alg.rep_size();
  if (g.rows() != m || g.cols() != m) throw InputError("logarithm: matrix size mismatch");
  const GroupMatrix d = g - GroupMatrix::Identity(m, m);
  const double nrm = Eigen::JacobiSVD<GroupMatrix>(d).singularValues()(0);
  if (!(nrm < radius)) {
    std::ostringstream os;
    os << "logarithm: ||g - I|| = " << nrm << " outside radius " << radius;
    throw DomainError(os.str());
  }
  return alg.from_matrix(g.log());
}

Eigen::MatrixXd adjoint(const QuadraticLieAlgebra& alg, const GroupMatrix& g) {
  const GroupMatrix gi = g.inverse();
  Eigen::MatrixXd ad(alg.dim, alg.dim);
  for (int a = 0; a < alg.dim; ++a) ad.col(a) = alg.from_matrix(g * alg.rep[a] * gi);
  return ad;
}

ConjugacyClass stabilizer(const QuadraticLieAlgebra& alg, const GroupMatrix& g,
                          const StabilizerOptions& opts) {
  const int n = alg.dim;
  ConjugacyClass cc;
  cc.base = g;
  const Eigen::MatrixXd A = adjoint(alg, g) - Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s(0);
  int rank = 0;
  // Ad - 1 is O(1) unless g is (numerically) central
  const double cut = std::max(opts.rel_threshold * smax, opts.rel_threshold);
  for (int i = 0; i < n; ++i)
    if (s(i) >= cut) ++rank;
  cc.stab_basis = svd.matrixV().rightCols(n - rank);
  if (rank > 0 && rank < n) {
    cc.gap_ratio = s(rank) / s(rank - 1);
    if (cc.gap_ratio > opts.gap_bound) {
      cc.near_degenerate = true;
      std::ostringstream os;
      os << "stabilizer: kernel gap ratio " << cc.gap_ratio << " exceeds " << opts.gap_bound;
      cc.warning = os.str();
    }
  }
  // K-orthogonal complement: null space of S^T K
  if (cc.stab_basis.cols() == 0) {
    cc.perp_basis = Eigen::MatrixXd::Identity(n, n);
  } else {
    const Eigen::MatrixXd C = cc.stab_basis.transpose() * alg.K;
    Eigen::JacobiSVD<Eigen::MatrixXd> sv2(C, Eigen::ComputeFullV);
    cc.perp_basis = sv2.matrixV().rightCols(n - cc.stab_basis.cols());
  }
  Eigen::MatrixXd basis(n, n);
  basis << cc.stab_basis, cc.perp_basis;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
  if (lu.rank() == n) {
    const Eigen::MatrixXd coords = lu.inverse();
    cc.proj_perp = cc.perp_basis * coords.bottomRows(cc.perp_basis.cols());
  } else {
    cc.proj_perp = Eigen::MatrixXd::Zero(n, n);
    cc.near_degenerate = true;
    if (!cc.warning.empty()) cc.warning += "; ";
    cc.warning += "stabilizer: stabilizer is not K-nondegenerate, complement is not direct";
  }
  return cc;
}

Eigen::MatrixXd cayley_operator(const QuadraticLieAlgebra& alg, const GroupMatrix& g,
                                const StabilizerOptions& opts) {
  const int n = alg.dim;
  const ConjugacyClass cc = stabilizer(alg, g, opts);
  const Eigen::MatrixXd& P = cc.perp_basis;
  const int m = static_cast<int>(P.cols());
  if (m == 0) return Eigen::MatrixXd::Zero(n, n);
  if (cc.proj_perp.isZero(0)) throw DegeneracyError("cayley_operator: " + cc.warning);
  const Eigen::MatrixXd Ad = adjoint(alg, g);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd Pp = P.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::MatrixXd Am = Pp * (Ad - I) * P;
  const Eigen::MatrixXd Ap = Pp * (Ad + I) * P;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Am);
  const double smin = svd.singularValues()(m - 1);
  if (smin < opts.rel_threshold * std::max(1.0, svd.singularValues()(0))) {
    std::ostringstream os;
    os << "cayley_operator: Ad_g - 1 is singular on the stabilizer complement (singular value "
       << smin << ")";
    throw DegeneracyError(os.str());
  }
  return P * Ap * Am.inverse() * Pp * cc.proj_perp;
}

Eigen::MatrixXd class_bivector(const QuadraticLieAlgebra& alg, const GroupMatrix& g,
                               const StabilizerOptions& opts) {
  return 0.5 * cayley_operator(alg, g, opts) * alg.Kinv;
}

}  // namespace qpdr

#include "qpdr/fockrosly.hpp"

#include <sstream>

namespace qpdr {

SurfaceScenario make_surface(const QuadraticLieAlgebra& alg, int n, int genus,
                             std::vector<GroupMatrix> classes, const Eigen::MatrixXd& r) {
  if (n < 0 || genus < 0 || n + 2 * genus < 1)
    throw InputError("surface: need n + 2 genus >= 1");
  if (static_cast<int>(classes.size()) != n) throw InputError("surface: one class per puncture expected");
  if (r.rows() != alg.dim || r.cols() != alg.dim) throw InputError("surface: r must be dim x dim");
  return SurfaceScenario{alg, n, genus, std::move(classes), r};
}

Eigen::MatrixXd r_with_casimir(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& skew) {
  return skew + alg.Kinv;
}

Eigen::MatrixXd nabla_covectors(const ProductManifold& M, int n, int genus, int i) {
  const int ops = 2 * (n + 2 * genus);
  if (i < 1 || i > ops) {
    std::ostringstream os;
    os << "nabla: operator index " << i << " outside 1.." << ops;
    throw InputError(os.str());
  }
  int slot = 0;
  bool right = false;  // nabla_R f = -L_a f, nabla_L f = R_a f
  if (i <= 2 * n) {
    slot = (i - 1) / 2;
    right = (i % 2 == 1);
  } else {
    const int j = i - 2 * n;       // 1..4g
    const int block = (j - 1) / 4;  // handle index
    const int pos = (j - 1) % 4;    // R^A, R^B, L^A, L^B
    slot = n + 2 * block + (pos % 2);
    right = pos < 2;
  }
  const int dim = M.alg_dim();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(dim, M.frame_size());
  for (int a = 0; a < dim; ++a) {
    if (right)
      D(a, M.L(slot, a)) = -1.0;
    else
      D(a, M.R(slot, a)) = 1.0;
  }
  return D;
}

Eigen::VectorXd nabla(const SurfaceScenario& s, int i, const ScalarFn& f, const Point& x,
                      const FdOptions& opts) {
  const ProductManifold M = s.manifold();
  return nabla_covectors(M, s.n, s.genus, i) * differential(M, f, x, opts);
}

Multi fr_array(const ProductManifold& M, int n, int genus, const Eigen::MatrixXd& r) {
  const int ops = 2 * (n + 2 * genus);
  const int N = M.frame_size();
  std::vector<Eigen::MatrixXd> D;
  for (int i = 1; i <= ops; ++i) D.push_back(nabla_covectors(M, n, genus, i));
  Multi out(2, N);
  for (int i = 0; i < ops; ++i)
    for (int j = i; j < ops; ++j) {
      const double w = (i == j) ? 0.5 : 1.0;
      // <r, u ^ v> = r^{ab}(u_a v_b - u_b v_a) as a frame bivector
      const Eigen::MatrixXd T = w * D[i].transpose() * r * D[j];
      for (int A = 0; A < N; ++A)
        for (int B = 0; B < N; ++B) out(A, B) += T(A, B) - T(B, A);
    }
  return out;
}

FramedField fr_field(const SurfaceScenario& s) {
  return constant_field(fr_array(s.manifold(), s.n, s.genus, s.r));
}

double fr_bracket(const SurfaceScenario& s, const ScalarFn& f, const ScalarFn& h, const Point& x,
                  const FdOptions& opts) {
  const ProductManifold M = s.manifold();
  return evaluate(M, fr_field(s), {f, h}, x, opts);
}

double cybe_check(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& r) {
  return cybe_defect(alg, r).norm();
}

QuasiPoissonSpace reduced_space(const QuadraticLieAlgebra& alg, const DynamicalTriple& triple,
                                int n, int genus) {
  if (n < 2) throw InputError("reduced_space: the section needs two puncture classes");
  const QuasiPoissonSpace N =
      (n - 2 + 2 * genus == 0) ? point_space(alg) : build_surface_quasi(alg, n - 2, genus);
  return assemble(triple, N);
}

double reduced_bracket(const QuasiPoissonSpace& red, const ScalarFn& F, const ScalarFn& H,
                       const Point& x, const FdOptions& opts) {
  return evaluate(red.M, red.pi, {F, H}, x, opts);
}

}  // namespace qpdr

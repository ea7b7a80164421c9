#pragma once

#include <optional>

#include "qpdr/manifold.hpp"
#include "qpdr/quasipoisson.hpp"
#include "qpdr/triple.hpp"

namespace qpdr {

// Every quantity is a skew 3-array over chart (k) followed by algebra (n);
// the bigrading counts chart indices.
struct TensorOps {
  Multi theta_theta;        // [theta,theta] = sum [X_a,X_b] ^ e_a ^ e_b
  Multi theta_wedge_theta;  // sum X_a ^ X_b ^ [e_a,e_b]
  Multi r_theta;            // [r,theta] = -sum X_a ^ ad_{e_a} r
  Multi alt_theta_dr;       // Alt(theta* dr) = -sum e_a ^ X_a(r)
  Multi pi_sharp_dr;        // pi^#(dr)
  Multi d_pi_theta;         // d_pi theta = sum [pi, X_a] ^ e_a
  Multi pi_pi;              // 1/2 [pi,pi]
};

struct TripleOptions {
  FdOptions fd;
  std::optional<Cobracket> delta;
};

TensorOps tensor_ops(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                     const Eigen::VectorXd& alpha, const FdOptions& fd = {});

// 1/2[theta,theta] - [r,theta] + pi^#(dr) (+ delta theta)
Multi compat_defect(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                    const Eigen::VectorXd& alpha, const TripleOptions& opts = {});
// Alt(theta* dr) + 1/2[r,r] (+ delta r) - Omega
Multi gdybe_defect(const QuadraticLieAlgebra& alg, const DynamicalTriple& t, const Multi& omega,
                   const Eigen::VectorXd& alpha, const TripleOptions& opts = {});
// theta ^ theta + d_pi theta
Multi morphism_defect(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                      const Eigen::VectorXd& alpha, const TripleOptions& opts = {});

struct UnifiedDefect {
  Multi total;     // 1/2 [Lambda,Lambda] - Omega
  Multi pi_part;   // three chart indices
  Multi morphism;  // two
  Multi compat;    // one
  Multi gdybe;     // none
};
// Lambda = pi_U + theta^ + r in the calculus on Lambda(TU + g).
UnifiedDefect unified_defect(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                             const Multi& omega, const Eigen::VectorXd& alpha,
                             const FdOptions& fd = {});

// -1/2 phi as an element over the algebra block.
Multi cartan_omega(const QuadraticLieAlgebra& alg);
// Embed an algebra tensor into the chart+algebra index set.
Multi embed_algebra(const Multi& m, int k);

struct SectionSetup {
  QuasiPoissonSpace space;  // C1 x C2 with the fused bivector
  CrossSection section;     // alpha -> (p, x(alpha))
  GroupMatrix p;
};
// SU(2) section p = exp(beta e2), x(alpha) = cos(gamma) + sin(gamma)(cos(alpha) e1 + sin(alpha) e2).
// beta = gamma = pi/2 is the golden configuration.
SectionSetup su2_section(double beta = 1.5707963267948966, double gamma = 1.5707963267948966);

// Projection onto g'_x along g_p, x the second factor of the section.
Eigen::MatrixXd h_projector(const QuadraticLieAlgebra& alg, const CrossSection& U,
                            const ProductManifold& M, const GroupMatrix& p,
                            const Eigen::VectorXd& alpha);

DynamicalTriple moduli_triple(const QuadraticLieAlgebra& alg, const SectionSetup& setup);

using GroupMapFn = std::function<GroupMatrix(const Eigen::VectorXd&)>;
// gauge factor applied to the Maurer-Cartan pullback
inline constexpr double kGaugeScale = -1.0 / kActionScale;
DynamicalTriple gauge_transform(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                                GroupMapFn gmap, double fd_step = 1e-6);

using Iso21VecFn = std::function<Eigen::Vector3d(const Eigen::Vector2d&)>;
using Iso21MatFn = std::function<Eigen::Matrix3d(double)>;
// Chart (psi, alpha); basis J0,J1,J2,P0,P1,P2.
DynamicalTriple iso21_triple(Iso21VecFn q_psi, Iso21VecFn q_alpha, Iso21VecFn q_delta,
                             Iso21VecFn m, Iso21MatFn V);

}  // namespace qpdr

#include "qpdr/drmatrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace qpdr {

namespace {

struct ChartDerivs {
  Eigen::MatrixXd pi, theta, r;
  std::vector<Eigen::MatrixXd> dpi, dtheta, dr;
};

// Shared finite differences of the triple; the unified bracket uses the same values.
ChartDerivs chart_derivs(const DynamicalTriple& t, const Eigen::VectorXd& alpha, const FdOptions& fd) {
  if (alpha.size() != t.k) throw InputError("triple: chart point has wrong dimension");
  ChartDerivs d;
  d.pi = t.pi_U(alpha);
  d.theta = t.theta(alpha);
  d.r = t.r(alpha);
  for (int j = 0; j < t.k; ++j) {
    auto at = [&](double s, const ChartMatrixFn& fn) {
      Eigen::VectorXd a = alpha;
      a(j) += s;
      return fn(a);
    };
    auto central = [&](const ChartMatrixFn& fn) {
      auto D = [&](double h) -> Eigen::MatrixXd { return (at(h, fn) - at(-h, fn)) / (2.0 * h); };
      if (!fd.richardson) return D(fd.h);
      return Eigen::MatrixXd((4.0 * D(0.5 * fd.h) - D(fd.h)) / 3.0);
    };
    d.dpi.push_back(central(t.pi_U));
    d.dtheta.push_back(central(t.theta));
    d.dr.push_back(central(t.r));
  }
  return d;
}

Multi alg_bivector(const Eigen::MatrixXd& r) { return matrix_multi<double>(r); }

}  // namespace

Multi embed_algebra(const Multi& m, int k) {
  const int n = m.size(), d = m.degree();
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(k + n, n);
  map.bottomRows(n).setIdentity();
  if (d == 0) return m;
  return push(m, map);
}

Multi cartan_omega(const QuadraticLieAlgebra& alg) { return -0.5 * cartan_three_tensor(alg); }

TensorOps tensor_ops(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                     const Eigen::VectorXd& alpha, const FdOptions& fd) {
  const int k = t.k, n = t.n, N = k + n;
  if (n != alg.dim) throw InputError("tensor_ops: triple and algebra dimensions differ");
  const ChartDerivs d = chart_derivs(t, alpha, fd);
  const double mu = kActionScale;
  const Eigen::MatrixXd& th = d.theta;
  const Eigen::MatrixXd& pi = d.pi;

  Multi tt(3, N), tw(3, N), rt(3, N), alt(3, N), psd(3, N), dpt(3, N), pp(3, N);
  // [X_a, X_b]^i
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double v = 0;
        for (int j = 0; j < k; ++j) v += th(j, a) * d.dtheta[j](i, b) - th(j, b) * d.dtheta[j](i, a);
        tt(i, k + a, k + b) = v;
      }
  // X_a ^ X_b ^ mu[e_a, e_b]
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double w = th(i, a) * th(j, b);
          if (w == 0.0) continue;
          for (int c = 0; c < n; ++c) tw(i, j, k + c) += 0.5 * w * mu * alg.f(a, b, c);
        }
  // -X_a ^ mu ad_{e_a} r
  const Multi rm = alg_bivector(d.r);
  for (int a = 0; a < n; ++a) {
    const Multi s = ad_act(alg, alg.basis_vector(a), rm);
    for (int i = 0; i < k; ++i) {
      if (th(i, a) == 0.0) continue;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) rt(i, k + b, k + c) -= 0.5 * mu * th(i, a) * s(b, c);
    }
  }
  // -e_a ^ X_a(r) and pi^#(dr)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int i = 0; i < k; ++i) alt(k + a, k + b, k + c) -= 0.5 * th(i, a) * d.dr[i](b, c);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) psd(i, k + b, k + c) += 0.5 * pi(i, j) * d.dr[j](b, c);
  // [pi, X_a] = -L_{X_a} pi
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        double lie = 0;
        for (int l = 0; l < k; ++l)
          lie += th(l, a) * d.dpi[l](i, j) - pi(l, j) * d.dtheta[l](i, a) - pi(i, l) * d.dtheta[l](j, a);
        dpt(i, j, k + a) = -0.5 * lie;
      }
  // 1/2 [pi, pi]
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l)
        for (int m = 0; m < k; ++m) pp(i, j, l) += 0.5 * pi(i, m) * d.dpi[m](j, l);

  TensorOps ops;
  ops.theta_theta = full_alt(tt);
  ops.theta_wedge_theta = full_alt(tw);
  ops.r_theta = full_alt(rt);
  ops.alt_theta_dr = full_alt(alt);
  ops.pi_sharp_dr = full_alt(psd);
  ops.d_pi_theta = full_alt(dpt);
  ops.pi_pi = full_alt(pp);
  return ops;
}

Multi compat_defect(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                    const Eigen::VectorXd& alpha, const TripleOptions& opts) {
  const TensorOps o = tensor_ops(alg, t, alpha, opts.fd);
  Multi out = 0.5 * o.theta_theta - o.r_theta + o.pi_sharp_dr;
  if (opts.delta) {
    const int k = t.k, n = t.n;
    const Eigen::MatrixXd th = t.theta(alpha);
    Multi dt(3, k + n);
    for (int a = 0; a < n; ++a) {
      const Multi de = cobracket_apply(*opts.delta, vector_multi<double>(alg.basis_vector(a)));
      for (int i = 0; i < k; ++i)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) dt(i, k + b, k + c) += 0.5 * th(i, a) * de(b, c);
    }
    out += full_alt(dt);
  }
  return out;
}

Multi gdybe_defect(const QuadraticLieAlgebra& alg, const DynamicalTriple& t, const Multi& omega,
                   const Eigen::VectorXd& alpha, const TripleOptions& opts) {
  const TensorOps o = tensor_ops(alg, t, alpha, opts.fd);
  const Eigen::MatrixXd r = t.r(alpha);
  Multi rr = cybe_defect(alg, r);
  Multi out = o.alt_theta_dr + embed_algebra(0.5 * antisymmetrize(rr), t.k) -
              embed_algebra(omega, t.k);
  if (opts.delta) out += embed_algebra(cobracket_apply(*opts.delta, alg_bivector(r)), t.k);
  return out;
}

Multi morphism_defect(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                      const Eigen::VectorXd& alpha, const TripleOptions& opts) {
  const TensorOps o = tensor_ops(alg, t, alpha, opts.fd);
  return o.theta_wedge_theta + o.d_pi_theta;
}

UnifiedDefect unified_defect(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                             const Multi& omega, const Eigen::VectorXd& alpha, const FdOptions& fd) {
  const int k = t.k, n = t.n, N = k + n;
  const ChartDerivs d = chart_derivs(t, alpha, fd);
  FrameStructure s(N);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) s.add(k + a, k + b, k + c, kActionScale * alg.f(a, b, c));
  const Multi L = mixed_bivector(d.pi, d.theta, d.r);
  std::vector<Multi> dL(N, Multi(2, N));
  for (int j = 0; j < k; ++j) dL[j] = mixed_bivector(d.dpi[j], d.dtheta[j], d.dr[j]);
  UnifiedDefect u;
  u.total = 0.5 * schouten_bracket(s, L, dL, L, dL) - embed_algebra(omega, k);
  u.pi_part = bigraded_component(u.total, k, 3);
  u.morphism = bigraded_component(u.total, k, 2);
  u.compat = bigraded_component(u.total, k, 1);
  u.gdybe = bigraded_component(u.total, k, 0);
  return u;
}

SectionSetup su2_section(double beta, double gamma) {
  const QuadraticLieAlgebra alg = su2();
  const GroupMatrix p = exponential(alg, beta * alg.basis_vector(1));
  auto xmat = [alg, gamma](double a) {
    return GroupMatrix(std::cos(gamma) * GroupMatrix::Identity(2, 2) +
                       std::sin(gamma) * (std::cos(a) * alg.rep[0] + std::sin(a) * alg.rep[1]));
  };
  CrossSection U;
  U.k = 1;
  U.embed = [p, xmat](const Eigen::VectorXd& a) { return Point{Eigen::VectorXd(), {p, xmat(a(0))}}; };
  U.tangent = [alg, xmat, gamma](const Eigen::VectorXd& a) {
    const GroupMatrix dx = std::sin(gamma) * (-std::sin(a(0)) * alg.rep[0] + std::cos(a(0)) * alg.rep[1]);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * alg.dim, 1);
    T.col(0).tail(alg.dim) = alg.from_matrix(xmat(a(0)).inverse() * dx);
    return T;
  };
  return SectionSetup{build_surface_quasi(alg, 2, 0), U, p};
}

Eigen::MatrixXd h_projector(const QuadraticLieAlgebra& alg, const CrossSection& U,
                            const ProductManifold& M, const GroupMatrix& p,
                            const Eigen::VectorXd& alpha) {
  const int n = alg.dim, k = U.k;
  const Point pt = U.embed(alpha);
  if (pt.g.size() < 2) throw InputError("h_projector: section must carry two class factors");
  const GroupMatrix& x = pt.g[1];
  const Eigen::MatrixXd Tx = U.tangents(M, alpha).block(M.chart_dim() + n, 0, n, k);
  Eigen::MatrixXd A(n, n + k);
  A << adjoint(alg, x.inverse()) - Eigen::MatrixXd::Identity(n, n), -Tx;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * std::max(1.0, s(0))) ++rank;
  const Eigen::MatrixXd null = svd.matrixV().rightCols(n + k - rank).topRows(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> sn(null, Eigen::ComputeFullU);
  int rn = 0;
  for (int i = 0; i < sn.singularValues().size(); ++i)
    if (sn.singularValues()(i) > 1e-10) ++rn;
  const Eigen::MatrixXd Bx = sn.matrixU().leftCols(rn);  // basis of g'_x
  const Eigen::MatrixXd Bp = stabilizer(alg, p).stab_basis;
  if (rn + Bp.cols() != n) {
    std::ostringstream os;
    os << "splitting: dim g'_x + dim g_p = " << rn + Bp.cols() << " != " << n << " at alpha = "
       << alpha.transpose();
    throw DegeneracyError(os.str());
  }
  Eigen::MatrixXd B(n, n);
  B << Bx, Bp;
  Eigen::JacobiSVD<Eigen::MatrixXd> sb(B);
  const double cond = sb.singularValues()(n - 1) / sb.singularValues()(0);
  if (cond < 1e-10) {
    std::ostringstream os;
    os << "splitting: g = g_p + g'_x is not direct at alpha = " << alpha.transpose();
    throw DegeneracyError(os.str());
  }
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(n, n);
  proj.leftCols(rn) = Bx;
  return proj * B.inverse();
}

DynamicalTriple moduli_triple(const QuadraticLieAlgebra& alg, const SectionSetup& setup) {
  const int n = alg.dim, k = setup.section.k;
  const double c = kPiGScale, mu = kActionScale;
  const Eigen::MatrixXd Sp = class_bivector(alg, setup.p);
  struct Parts {
    Eigen::MatrixXd H, Tau, Sx;
  };
  auto parts = [alg, setup, n, k](const Eigen::VectorXd& a) {
    const ProductManifold& M = setup.space.M;
    const Point pt = setup.section.embed(a);
    Parts P;
    P.H = h_projector(alg, setup.section, M, setup.p, a);
    const Eigen::MatrixXd u = setup.section.tangents(M, a).block(M.chart_dim() + n, 0, n, k);
    const Eigen::MatrixXd V = adjoint(alg, pt.g[1].inverse()) - Eigen::MatrixXd::Identity(n, n);
    P.Tau = u.completeOrthogonalDecomposition().solve(V * P.H);  // k x n, column a = T_a
    P.Sx = class_bivector(alg, pt.g[1]);
    return P;
  };
  DynamicalTriple t;
  t.k = k;
  t.n = n;
  t.pi_U = [parts, Sp, c](const Eigen::VectorXd& a) {
    const Parts P = parts(a);
    const Eigen::MatrixXd S = Sp + P.Sx;
    return Eigen::MatrixXd(c * P.Tau * (S - S.transpose()) * P.Tau.transpose());
  };
  t.theta = [parts, Sp, c, mu, alg, n](const Eigen::VectorXd& a) {
    const Parts P = parts(a);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    return Eigen::MatrixXd(-(2 * c / mu) * P.Tau * Sp * P.H.transpose() +
                           (2 * c / mu) * P.Tau * P.Sx * (I - P.H).transpose() +
                           mu * P.Tau * alg.Kinv);
  };
  t.r = [parts, Sp, c, mu, alg, n](const Eigen::VectorXd& a) {
    const Parts P = parts(a);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd Hk = I - P.H;
    auto skew = [](const Eigen::MatrixXd& m) { return Eigen::MatrixXd(m - m.transpose()); };
    return Eigen::MatrixXd((c / (mu * mu)) * skew(P.H * Sp * P.H.transpose()) +
                           (c / (mu * mu)) * skew(Hk * P.Sx * Hk.transpose()) -
                           skew(P.H * alg.Kinv * Hk.transpose()));
  };
  return t;
}

DynamicalTriple gauge_transform(const QuadraticLieAlgebra& alg, const DynamicalTriple& t,
                                GroupMapFn gmap, double fd_step) {
  const int k = t.k, n = t.n;
  if (n != alg.dim) throw InputError("gauge_transform: triple and algebra dimensions differ");
  // Maurer-Cartan pullback g^-1 dg (columns) and Ad_g at alpha
  auto frame = [alg, gmap, k, fd_step](const Eigen::VectorXd& a) {
    const GroupMatrix g = gmap(a);
    const GroupMatrix gi = g.inverse();
    Eigen::MatrixXd Th(alg.dim, k);
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd ap = a, am = a;
      ap(i) += fd_step;
      am(i) -= fd_step;
      const GroupMatrix dg = (gmap(ap) - gmap(am)) / (2 * fd_step);
      const Eigen::VectorXd v = alg.from_matrix(gi * dg);
      if (!v.allFinite()) throw EvaluationError("gauge_transform: non-finite Maurer-Cartan form");
      Th.col(i) = v;
    }
    return std::make_pair(adjoint(alg, g), Th);
  };
  DynamicalTriple out;
  out.k = k;
  out.n = n;
  out.pi_U = t.pi_U;
  out.theta = [t, frame](const Eigen::VectorXd& a) {
    const auto [Ad, Th] = frame(a);
    const Eigen::MatrixXd P = t.pi_U(a);
    const Eigen::MatrixXd th = t.theta(a);
    // rows: Ad (theta^i + s sum_j P^{ij} Theta_j)
    return Eigen::MatrixXd((th + kGaugeScale * P * Th.transpose()) * Ad.transpose());
  };
  out.r = [t, frame](const Eigen::VectorXd& a) {
    const auto [Ad, Th] = frame(a);
    const Eigen::MatrixXd P = t.pi_U(a);
    const Eigen::MatrixXd th = t.theta(a);
    const Eigen::MatrixXd A = kGaugeScale * Ad * Th;  // column i = A_i
    const Eigen::MatrixXd At = Ad * th.transpose();   // column i = Ad theta^i
    const Eigen::MatrixXd cross = A * At.transpose();
    return Eigen::MatrixXd(Ad * t.r(a) * Ad.transpose() + cross - cross.transpose() +
                           A * P * A.transpose());
  };
  return out;
}

DynamicalTriple iso21_triple(Iso21VecFn q_psi, Iso21VecFn q_alpha, Iso21VecFn q_delta,
                             Iso21VecFn m, Iso21MatFn V) {
  const double eta[3] = {1.0, -1.0, -1.0};
  DynamicalTriple t;
  t.k = 2;
  t.n = 6;
  t.pi_U = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(2, 2); };
  t.theta = [q_psi, q_alpha, q_delta](const Eigen::VectorXd& c) {
    const Eigen::Vector2d x(c(0), c(1));
    const Eigen::Vector3d qp = q_psi(x), qa = q_alpha(x), qd = q_delta(x);
    Eigen::MatrixXd th = Eigen::MatrixXd::Zero(2, 6);
    for (int a = 0; a < 3; ++a) {
      th(0, 3 + a) = qp(a);
      th(1, a) = qa(a);
      th(1, 3 + a) = qd(a);
    }
    return th;
  };
  t.r = [m, V, eta](const Eigen::VectorXd& c) {
    const Eigen::Vector2d x(c(0), c(1));
    const Eigen::Matrix3d v = V(c(0));
    const Eigen::Vector3d md = m(x);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(6, 6);
    for (int b = 0; b < 3; ++b)
      for (int cc = 0; cc < 3; ++cc) {
        // -V^{bc} (P_b (x) J^c - J^c (x) P_b), J^c = eta^{cc} J_c
        r(3 + b, cc) -= v(b, cc) * eta[cc];
        r(cc, 3 + b) += v(b, cc) * eta[cc];
        for (int d = 0; d < 3; ++d) {
          if (b == cc || cc == d || b == d) continue;
          const int perm[3] = {b, cc, d};
          const double eps_up = permutation_sign(perm, 3) * eta[b] * eta[cc] * eta[d];
          r(3 + b, 3 + cc) += eps_up * md(d);
        }
      }
    return r;
  };
  return t;
}

}  // namespace qpdr

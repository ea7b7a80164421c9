#include "qpdr/liealg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "json.hpp"

namespace qpdr {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXd stacked_basis(const std::vector<Eigen::MatrixXcd>& rep) {
  const int n = static_cast<int>(rep.size());
  const int m = static_cast<int>(rep[0].rows());
  Eigen::MatrixXd B(2 * m * m, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        B(i * m + j, a) = rep[a](i, j).real();
        B(m * m + i * m + j, a) = rep[a](i, j).imag();
      }
  return B;
}

Eigen::VectorXd stacked(const Eigen::MatrixXcd& x) {
  const int m = static_cast<int>(x.rows());
  Eigen::VectorXd v(2 * m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      v(i * m + j) = x(i, j).real();
      v(m * m + i * m + j) = x(i, j).imag();
    }
  return v;
}

// eps_{abc} eta^{cd}: structure constants of so(2,1) with eps_{012} = 1.
double eps3(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0.0;
  const int p[3] = {a, b, c};
  return permutation_sign(p, 3);
}

}  // namespace

Eigen::MatrixXcd QuadraticLieAlgebra::to_matrix(const Eigen::VectorXd& x) const {
  if (x.size() != dim) throw InputError("to_matrix: dimension mismatch");
  const int m = rep_size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  for (int a = 0; a < dim; ++a)
    if (x(a) != 0.0) out += x(a) * rep[a];
  return out;
}

Eigen::VectorXd QuadraticLieAlgebra::from_matrix(const Eigen::MatrixXcd& m) const {
  if (m.rows() != rep_size() || m.cols() != rep_size())
    throw InputError("from_matrix: matrix size mismatch");
  return rep_pinv * stacked(m);
}

QuadraticLieAlgebra make_algebra(std::string name, std::vector<std::string> labels, Multi f,
                                 Eigen::MatrixXd K, std::vector<Eigen::MatrixXcd> rep,
                                 double tol) {
  const int n = static_cast<int>(K.rows());
  if (n <= 0 || K.cols() != n) throw InputError("algebra: K must be square and nonempty");
  if (f.degree() != 3 || f.size() != n) throw InputError("algebra: f must be dim x dim x dim");
  if (static_cast<int>(rep.size()) != n) throw InputError("algebra: rep must list dim matrices");
  const int m = static_cast<int>(rep[0].rows());
  for (const auto& r : rep)
    if (r.rows() != m || r.cols() != m) throw InputError("algebra: rep matrices must be square and equal-sized");
  if (labels.empty())
    for (int a = 0; a < n; ++a) labels.push_back("e" + std::to_string(a + 1));
  if (static_cast<int>(labels.size()) != n) throw InputError("algebra: wrong number of labels");

  QuadraticLieAlgebra alg;
  alg.name = std::move(name);
  alg.dim = n;
  alg.labels = std::move(labels);
  alg.f = std::move(f);
  alg.K = std::move(K);
  alg.rep = std::move(rep);

  const double det = alg.K.determinant();
  if (!(std::abs(det) > 1e-12)) throw InputError("algebra: singular pairing K (|det| <= 1e-12)");
  alg.Kinv = alg.K.inverse();

  const Eigen::MatrixXd B = stacked_basis(alg.rep);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues().minCoeff() < 1e-12 * std::max(1.0, svd.singularValues().maxCoeff()))
    throw InputError("algebra: representation is not faithful on the basis");
  alg.rep_pinv = svd.solve(Eigen::MatrixXd::Identity(B.rows(), B.rows()));

  const AlgebraInvariants inv = check_invariants(alg);
  if (inv.antisymmetry > tol) throw InputError("algebra: f not antisymmetric in (a,b)");
  if (inv.jacobi > tol) throw InputError("algebra: Jacobi identity fails");
  if (inv.symmetry_K > tol) throw InputError("algebra: K not symmetric");
  if (inv.ad_invariance > tol) throw InputError("algebra: K not ad-invariant");
  if (inv.rep_homomorphism > tol) throw InputError("algebra: rep is not a homomorphism");
  return alg;
}

QuadraticLieAlgebra su2() {
  const cd I(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> e(3, Eigen::MatrixXcd::Zero(2, 2));
  e[0] << 0.0, I, I, 0.0;
  e[1] << I, 0.0, 0.0, -I;
  e[2] << 0.0, 1.0, -1.0, 0.0;
  Eigen::MatrixXd K(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) K(a, b) = -0.5 * (e[a] * e[b]).trace().real();
  // structure constants from commutators, read off with the orthonormal pairing
  Multi f(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Eigen::MatrixXcd c = e[a] * e[b] - e[b] * e[a];
      for (int k = 0; k < 3; ++k) f(a, b, k) = -0.5 * (c * e[k]).trace().real();
    }
  return make_algebra("su2", {"e1", "e2", "e3"}, f, K, e);
}

QuadraticLieAlgebra iso21() {
  const double eta[3] = {1.0, -1.0, -1.0};
  // basis J0,J1,J2,P0,P1,P2; [J_a,J_b] = eps_ab^c J_c, [J_a,P_b] = eps_ab^c P_c
  Multi f(3, 6);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double v = eps3(a, b, c) * eta[c];
        f(a, b, c) = v;
        f(a, 3 + b, 3 + c) = v;
        f(3 + b, a, 3 + c) = -v;
      }
  std::vector<Eigen::MatrixXcd> rep(6, Eigen::MatrixXcd::Zero(4, 4));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) rep[a](c, b) = eps3(a, b, c) * eta[c];
    rep[3 + a](a, 3) = 1.0;
  }
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(6, 6);
  for (int a = 0; a < 3; ++a) K(a, 3 + a) = K(3 + a, a) = eta[a];
  return make_algebra("iso21", {"J0", "J1", "J2", "P0", "P1", "P2"}, f, K, rep);
}

QuadraticLieAlgebra abelian(int n) {
  if (n <= 0) throw InputError("abelian: dimension must be positive");
  std::vector<Eigen::MatrixXcd> rep(n, Eigen::MatrixXcd::Zero(n, n));
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    rep[a](a, a) = 1.0;
    labels.push_back("x" + std::to_string(a + 1));
  }
  return make_algebra("abelian:" + std::to_string(n), labels, Multi(3, n),
                      Eigen::MatrixXd::Identity(n, n), rep);
}

QuadraticLieAlgebra preset_algebra(const std::string& name) {
  if (name == "su2") return su2();
  if (name == "iso21") return iso21();
  if (name.rfind("abelian:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(name.substr(8));
    } catch (const std::exception&) {
      throw InputError("unknown algebra preset: " + name);
    }
    return abelian(n);
  }
  throw InputError("unknown algebra preset: " + name);
}

std::vector<std::string> algebra_preset_names() { return {"su2", "iso21", "abelian:<n>"}; }

QuadraticLieAlgebra algebra_from_json_text(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("algebra json: ") + e.what());
  }
  try {
    const int n = j.at("dim").get<int>();
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    Multi f(3, n);
    const auto& jf = j.at("f");
    if (static_cast<int>(jf.size()) != n) throw InputError("algebra json: /f has wrong length");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) f(a, b, c) = jf.at(a).at(b).at(c).get<double>();
    Eigen::MatrixXd K(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) K(a, b) = j.at("K").at(a).at(b).get<double>();
    std::vector<Eigen::MatrixXcd> rep;
    for (const auto& jm : j.at("rep")) {
      const bool cplx = jm.is_object();
      const auto& re = cplx ? jm.at("re") : jm;
      const int m = static_cast<int>(re.size());
      Eigen::MatrixXcd M(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          M(r, c) = cd(re.at(r).at(c).get<double>(), cplx ? jm.at("im").at(r).at(c).get<double>() : 0.0);
      rep.push_back(M);
    }
    return make_algebra(j.value("name", std::string("custom")), labels, f, K, rep);
  } catch (const json::exception& e) {
    throw InputError(std::string("algebra json: ") + e.what());
  }
}

AlgebraInvariants check_invariants(const QuadraticLieAlgebra& alg) {
  const int n = alg.dim;
  const Multi& f = alg.f;
  AlgebraInvariants inv;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        inv.antisymmetry = std::max(inv.antisymmetry, std::abs(f(a, b, c) + f(b, a, c)));
        double adinv = 0;
        for (int d = 0; d < n; ++d) adinv += f(a, b, d) * alg.K(d, c) + f(a, c, d) * alg.K(b, d);
        inv.ad_invariance = std::max(inv.ad_invariance, std::abs(adinv));
        for (int e = 0; e < n; ++e) {
          double jac = 0;
          for (int d = 0; d < n; ++d)
            jac += f(a, b, d) * f(d, c, e) + f(b, c, d) * f(d, a, e) + f(c, a, d) * f(d, b, e);
          inv.jacobi = std::max(inv.jacobi, std::abs(jac));
        }
      }
  inv.symmetry_K = (alg.K - alg.K.transpose()).cwiseAbs().maxCoeff();
  inv.abs_det_K = std::abs(alg.K.determinant());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Eigen::VectorXd br(n);
      for (int c = 0; c < n; ++c) br(c) = f(a, b, c);
      const Eigen::MatrixXcd lhs = alg.to_matrix(br);
      const Eigen::MatrixXcd rhs = alg.rep[a] * alg.rep[b] - alg.rep[b] * alg.rep[a];
      inv.rep_homomorphism = std::max(inv.rep_homomorphism, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return inv;
}

Eigen::VectorXd bracket(const QuadraticLieAlgebra& alg, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y) {
  if (x.size() != alg.dim || y.size() != alg.dim) throw InputError("bracket: dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(alg.dim);
  for (int a = 0; a < alg.dim; ++a) {
    if (x(a) == 0.0) continue;
    for (int b = 0; b < alg.dim; ++b) {
      if (y(b) == 0.0) continue;
      for (int c = 0; c < alg.dim; ++c) out(c) += x(a) * y(b) * alg.f(a, b, c);
    }
  }
  return out;
}

Eigen::MatrixXd ad_matrix(const QuadraticLieAlgebra& alg, const Eigen::VectorXd& x) {
  Eigen::MatrixXd m(alg.dim, alg.dim);
  for (int a = 0; a < alg.dim; ++a) m.col(a) = bracket(alg, x, alg.basis_vector(a));
  return m;
}

Multi casimir(const QuadraticLieAlgebra& alg) { return matrix_multi<double>(alg.Kinv); }

Multi kappa_commutator(const QuadraticLieAlgebra& alg) {
  // [k12,k23] = K^{ab} K^{cd} e_a (x) [e_b,e_c] (x) e_d
  const int n = alg.dim;
  Multi t(3, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (alg.Kinv(a, b) == 0.0) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double w = alg.Kinv(a, b) * alg.Kinv(c, d);
          if (w == 0.0) continue;
          for (int x = 0; x < n; ++x) t(a, x, d) += w * alg.f(b, c, x);
        }
    }
  return t;
}

Multi cartan_three_tensor(const QuadraticLieAlgebra& alg) {
  // indices raised from <[e_a,e_b],e_c>
  const int n = alg.dim;
  Multi low(3, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) low(a, b, c) += alg.f(a, b, d) * alg.K(d, c);
  const Eigen::MatrixXd& Ki = alg.Kinv;
  Multi phi(3, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double v = 0;
        for (int x = 0; x < n; ++x) {
          if (Ki(a, x) == 0.0) continue;
          for (int y = 0; y < n; ++y) {
            if (Ki(b, y) == 0.0) continue;
            for (int z = 0; z < n; ++z) v += Ki(a, x) * Ki(b, y) * Ki(c, z) * low(x, y, z);
          }
        }
        phi(a, b, c) = v;
      }
  return phi;
}

Multi graded_bracket(const QuadraticLieAlgebra& alg, const Multi& A, const Multi& B) {
  const int n = alg.dim;
  if (A.degree() < 1 || A.degree() > 2 || B.degree() < 1 || B.degree() > 2)
    throw NotImplementedError("graded_bracket: degrees must be 1 or 2");
  if (A.size() != n || B.size() != n) throw InputError("graded_bracket: dimension mismatch");
  FrameStructure s(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) s.add(a, b, c, kActionScale * alg.f(a, b, c));
  const std::vector<Multi> dA(n, Multi(A.degree(), n)), dB(n, Multi(B.degree(), n));
  return schouten_bracket(s, A, dA, B, dB);
}

Multi cybe_defect(const QuadraticLieAlgebra& alg, const Eigen::MatrixXd& r) {
  const int n = alg.dim;
  if (r.rows() != n || r.cols() != n) throw InputError("cybe_defect: r must be dim x dim");
  Multi out(3, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double rab = r(a, b);
      if (rab == 0.0) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double w = rab * r(c, d);
          if (w == 0.0) continue;
          for (int x = 0; x < n; ++x) {
            out(x, b, d) += w * alg.f(a, c, x);  // [r12, r13]
            out(a, x, d) += w * alg.f(b, c, x);  // [r12, r23]
            out(a, c, x) += w * alg.f(b, d, x);  // [r13, r23]
          }
        }
    }
  return out;
}

Multi cobracket_apply(const Cobracket& delta, const Multi& A) {
  const int n = delta.d.size();
  if (A.size() != n) throw InputError("cobracket_apply: dimension mismatch");
  auto delta_basis = [&](int a) {
    Multi m(2, n);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) m(b, c) = delta.d(a, b, c) - delta.d(a, c, b);
    return m;
  };
  if (A.degree() == 1) {
    Multi out(2, n);
    for (int a = 0; a < n; ++a)
      if (A(a) != 0.0) out += A(a) * delta_basis(a);
    return out;
  }
  if (A.degree() == 2) {
    Multi out(3, n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (A(a, b) == 0.0) continue;
        Multi ea(1, n), eb(1, n);
        ea(a) = 1.0;
        eb(b) = 1.0;
        out += A(a, b) * (wedge(delta_basis(a), eb) - wedge(ea, delta_basis(b)));
      }
    return out;
  }
  throw NotImplementedError("cobracket_apply: degree must be 1 or 2");
}

double cobracket_co_jacobi_residual(const Cobracket& delta) {
  // (delta (x) 1) delta composed with cyclic sum: apply delta twice as a derivation
  const int n = delta.d.size();
  double res = 0;
  for (int a = 0; a < n; ++a) {
    Multi ea(1, n);
    ea(a) = 1.0;
    res = std::max(res, cobracket_apply(delta, cobracket_apply(delta, ea)).max_abs());
  }
  return res;
}

double cobracket_cocycle_residual(const QuadraticLieAlgebra& alg, const Cobracket& delta) {
  // delta([x,y]) = ad_x delta(y) - ad_y delta(x)
  const int n = alg.dim;
  double res = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Eigen::VectorXd x = alg.basis_vector(a), y = alg.basis_vector(b);
      const Multi lhs = cobracket_apply(delta, vector_multi<double>(bracket(alg, x, y)));
      const Multi rhs = ad_act(alg, x, cobracket_apply(delta, vector_multi<double>(y))) -
                        ad_act(alg, y, cobracket_apply(delta, vector_multi<double>(x)));
      res = std::max(res, (lhs - rhs).max_abs());
    }
  return res;
}

Multi ad_act(const QuadraticLieAlgebra& alg, const Eigen::VectorXd& x, const Multi& t) {
  const Eigen::MatrixXd ad = ad_matrix(alg, x);
  const int n = alg.dim, d = t.degree();
  Multi out(d, n);
  std::array<int, 4> idx{}, jdx{};
  for (Eigen::Index f = 0; f < t.data().size(); ++f) {
    const double v = t.data()(f);
    if (v == 0.0) continue;
    t.unflat(f, idx.data());
    for (int k = 0; k < d; ++k) {
      jdx = idx;
      for (int c = 0; c < n; ++c) {
        const double w = ad(c, idx[k]);
        if (w == 0.0) continue;
        jdx[k] = c;
        out.at(jdx.data()) += w * v;
      }
    }
  }
  return out;
}

}  // namespace qpdr

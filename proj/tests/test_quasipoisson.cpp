#include "support.hpp"

#include "qpdr/drmatrix.hpp"
#include "qpdr/fockrosly.hpp"
#include "qpdr/quasipoisson.hpp"

using namespace qpdr;
using qpdr::testing::max_abs;
using qpdr::testing::random_point;
using qpdr::testing::random_poly_triple;

namespace {

const FdOptions kRich{1e-4, true};

double re_trace0(const Point& x) { return x.g[0].trace().real(); }
double re_trace_sq0(const Point& x) { return (x.g[0] * x.g[0]).trace().real(); }

// Simultaneous conjugation of every group factor by y.
Point conjugate_all(const Point& x, const GroupMatrix& y) {
  Point z = x;
  for (auto& g : z.g) g = y * g * y.inverse();
  return z;
}

// U x {e} inside U x G.
CrossSection identity_section(int k, const QuadraticLieAlgebra& alg) {
  CrossSection U;
  U.k = k;
  const int m = alg.rep_size(), n = alg.dim;
  U.embed = [m](const Eigen::VectorXd& a) { return Point{a, {GroupMatrix::Identity(m, m)}}; };
  U.tangent = [k, n](const Eigen::VectorXd&) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + n, k);
    t.topRows(k).setIdentity();
    return t;
  };
  return U;
}

}  // namespace

TEST(QuasiPoisson, PiGVanishesOnClassFunctionsAndAtIdentity) {
  const QuasiPoissonSpace G = build_pi_G(su2());
  Rng rng(1);
  const Point x = random_point(G.M, rng);
  EXPECT_NEAR(evaluate(G.M, G.pi, {re_trace0, re_trace_sq0}, x), 0.0, 1e-10);
  const Point e{Eigen::VectorXd::Zero(0), {GroupMatrix::Identity(2, 2)}};
  for (int t = 0; t < 5; ++t)
    EXPECT_NEAR(evaluate(G.M, G.pi, {random_function(G.M, rng), random_function(G.M, rng)}, e), 0.0, 1e-10);
}

TEST(QuasiPoisson, PiGIsQuasiPoisson) {
  Rng rng(2);
  for (const auto& alg : {su2(), iso21()}) {
    const QuasiPoissonSpace G = build_pi_G(alg);
    for (int t = 0; t < 10; ++t) {
      const Point x = random_point(G.M, rng);
      const double d = quasi_defect(G, random_function(G.M, rng), random_function(G.M, rng),
                                    random_function(G.M, rng), x, kRich);
      EXPECT_LT(std::abs(d), 1e-5) << alg.name;
    }
  }
}

TEST(QuasiPoisson, RhoPhiVanishesOnSingleSu2ButNotOnPairs) {
  // conjugation orbits in SU(2) are 2-dimensional, so rho(phi) is zero there
  Rng rng(31);
  const Multi phi = cartan_three_tensor(su2());
  const QuasiPoissonSpace G = build_pi_G(su2()), G2 = build_surface_quasi(su2(), 2, 0);
  const Point x = random_point(G.M, rng), y = random_point(G2.M, rng);
  std::vector<Eigen::VectorXd> d1, d;
  for (int j = 0; j < 3; ++j) d1.push_back(differential(G.M, random_function(G.M, rng), x));
  EXPECT_LT(std::abs(evaluate_array(rho_push(G.M, G.action, 0, phi, x), d1)), 1e-9);
  for (int j = 0; j < 3; ++j) d.push_back(differential(G2.M, random_function(G2.M, rng), y));
  EXPECT_GT(std::abs(evaluate_array(rho_push(G2.M, G2.action, 0, phi, y), d)), 1e-2);
}

TEST(QuasiPoisson, CorruptedBivectorIsDetected) {
  QuasiPoissonSpace G = build_surface_quasi(su2(), 2, 0);
  G.pi = scaled(1.1, G.pi);
  Rng rng(3);
  double worst = 0;
  for (int t = 0; t < 5; ++t) {
    const Point x = random_point(G.M, rng);
    worst = std::max(worst, std::abs(quasi_defect(G, random_function(G.M, rng), random_function(G.M, rng),
                                                  random_function(G.M, rng), x, kRich)));
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(QuasiPoisson, AbelianDefectIsZero) {
  const QuasiPoissonSpace G = build_pi_G(abelian(3));
  Rng rng(4);
  const Point x = random_point(G.M, rng);
  EXPECT_EQ(quasi_defect_array(G, x).max_abs(), 0.0);
}

TEST(QuasiPoisson, FusionWithPointIsIdentity) {
  const QuasiPoissonSpace G = build_pi_G(su2());
  const QuasiPoissonSpace F = fuse(G, point_space(su2()));
  Rng rng(5);
  const Point x = random_point(G.M, rng);
  const ScalarFn f = random_function(G.M, rng), h = random_function(G.M, rng);
  EXPECT_EQ(F.M.frame_size(), G.M.frame_size());
  EXPECT_NEAR(evaluate(F.M, F.pi, {f, h}, x), evaluate(G.M, G.pi, {f, h}, x), 1e-14);
}

TEST(QuasiPoisson, FusionAlgebraMismatchThrows) {
  EXPECT_THROW(fuse(build_pi_G(su2()), build_pi_G(iso21())), InputError);
}

TEST(QuasiPoisson, FusionTermVanishesOnInvariantFunctions) {
  const QuasiPoissonSpace A = build_pi_G(su2()), B = build_surface_quasi(su2(), 2, 0);
  const FramedField phi = fusion_term(A, B);
  const QuasiPoissonSpace AB = fuse(A, B);
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const Point x = random_point(AB.M, rng);
    const double v = evaluate(AB.M, phi, {random_invariant_function(AB.M, rng), random_invariant_function(AB.M, rng)}, x);
    EXPECT_NEAR(v, 0.0, 1e-8);
  }
}

TEST(QuasiPoisson, FusedSpaceIsQuasiPoisson) {
  const QuasiPoissonSpace S = build_surface_quasi(su2(), 3, 0);
  Rng rng(7);
  for (int t = 0; t < 3; ++t) {
    const Point x = random_point(S.M, rng);
    EXPECT_LT(std::abs(quasi_defect(S, random_function(S.M, rng), random_function(S.M, rng),
                                    random_function(S.M, rng), x, kRich)),
              1e-5);
  }
}

TEST(QuasiPoisson, SingleClassSurfaceIsPiG) {
  const QuasiPoissonSpace S = build_surface_quasi(su2(), 1, 0), G = build_pi_G(su2());
  Rng rng(8);
  const Point x = random_point(G.M, rng);
  EXPECT_LT((S.pi.coeff(x) - G.pi.coeff(x)).max_abs(), 1e-15);
  EXPECT_THROW(build_surface_quasi(su2(), 0, 0), InputError);
}

TEST(QuasiPoisson, HigherGenusSurfaceIsQuasiPoisson) {
  const QuasiPoissonSpace S = build_surface_quasi(su2(), 1, 1);
  Rng rng(9);
  for (int t = 0; t < 3; ++t) {
    const Point x = random_point(S.M, rng);
    EXPECT_LT(std::abs(quasi_defect(S, random_function(S.M, rng), random_function(S.M, rng),
                                    random_function(S.M, rng), x, kRich)),
              1e-5);
  }
}

TEST(QuasiPoisson, SurfaceIsConjugationInvariant) {
  Rng rng(10);
  for (auto [n, g] : std::vector<std::pair<int, int>>{{3, 0}, {1, 1}}) {
    const QuasiPoissonSpace S = build_surface_quasi(su2(), n, g);
    for (int t = 0; t < 3; ++t) {
      const Point x = random_point(S.M, rng);
      const GroupMatrix y = random_group_element(su2(), rng, 1.0);
      const ScalarFn f = random_function(S.M, rng), h = random_function(S.M, rng);
      const ScalarFn fy = [&](const Point& p) { return f(conjugate_all(p, y)); };
      const ScalarFn hy = [&](const Point& p) { return h(conjugate_all(p, y)); };
      EXPECT_NEAR(evaluate(S.M, S.pi, {fy, hy}, x, kRich), evaluate(S.M, S.pi, {f, h}, conjugate_all(x, y), kRich),
                  1e-6);
    }
  }
}

TEST(QuasiPoisson, DecomposeGoldenSection) {
  const SectionSetup s = su2_section();
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, 0.5);
  const Decomposition d = decompose_on_section(s.space, s.section, a);
  EXPECT_LT(d.residual, 1e-8);
  EXPECT_LT(max_abs(d.pi_U), 1e-10);
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(1, 3);
  theta(0, 2) = 1;
  EXPECT_LT(max_abs(d.theta - theta), 1e-10);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(3, 3);
  r(0, 1) = std::tan(0.5);
  r(1, 0) = -std::tan(0.5);
  EXPECT_LT(max_abs(d.r - r), 1e-10);
}

TEST(QuasiPoisson, DecomposeZeroBivector) {
  SectionSetup s = su2_section();
  s.space.pi = zero_field(s.space.M, 2);
  const Decomposition d = decompose_on_section(s.space, s.section, Eigen::VectorXd::Constant(1, 0.3));
  EXPECT_EQ(max_abs(d.pi_U) + max_abs(d.theta) + max_abs(d.r), 0.0);
}

TEST(QuasiPoisson, DecomposeRejectsNonFreeAction) {
  // the identity has full stabilizer
  QuasiPoissonSpace G = build_pi_G(su2());
  CrossSection U;
  U.k = 0;
  U.embed = [](const Eigen::VectorXd&) { return Point{Eigen::VectorXd::Zero(0), {GroupMatrix::Identity(2, 2)}}; };
  EXPECT_THROW(decompose_on_section(G, U, Eigen::VectorXd::Zero(0)), DegeneracyError);
}

TEST(QuasiPoisson, AssembleThenDecomposeRoundTrip) {
  // invariant bivector built from left-invariant fields, decomposed along the
  // left-multiplication action at U x {e}
  Rng rng(11);
  for (const auto& alg : {su2(), iso21()})
    for (int k : {1, 2}) {
      const DynamicalTriple t = random_poly_triple(k, alg.dim, rng);
      QuasiPoissonSpace P = assemble(t, group_space(alg, ActionKind::Right));
      P.action = ActionModel::uniform(1, ActionKind::Left);
      const CrossSection U = identity_section(k, alg);
      for (int s = 0; s < 5; ++s) {
        Eigen::VectorXd a(k);
        for (int i = 0; i < k; ++i) a(i) = rng.uniform(-1, 1);
        const Decomposition d = decompose_on_section(P, U, a);
        EXPECT_LT(max_abs(d.pi_U - t.pi_U(a)), 1e-8);
        EXPECT_LT(max_abs(d.theta - t.theta(a)), 1e-8);
        EXPECT_LT(max_abs(d.r - t.r(a)), 1e-8);
      }
    }
}

TEST(QuasiPoisson, AssembleZeroTripleOnPoint) {
  const QuasiPoissonSpace P = assemble(zero_triple(2, 3), point_space(su2()));
  const Point x{Eigen::Vector2d(0.1, 0.2), {}};
  EXPECT_EQ(P.pi.coeff(x).max_abs(), 0.0);
  EXPECT_THROW(assemble(zero_triple(1, 6), point_space(su2())), InputError);
}

TEST(QuasiPoisson, AssembledGoldenTripleSelfBracketIsTwiceOmega) {
  // pi_U + rho^L(theta^) + rho^L(r) on U x G with Omega = -1/2 phi: [pi,pi] = 2 rho^L(Omega)
  const QuadraticLieAlgebra alg = su2();
  const SectionSetup s = su2_section();
  const DynamicalTriple t = moduli_triple(alg, s);
  const QuasiPoissonSpace P = assemble(t, group_space(alg, ActionKind::Right));
  Rng rng(12);
  for (int i = 0; i < 5; ++i) {
    Point x;
    x.chart = Eigen::VectorXd::Constant(1, rng.uniform(0.3, 1.1));
    x.g = {random_group_element(alg, rng)};
    std::vector<ScalarFn> fs;
    for (int j = 0; j < 3; ++j) fs.push_back(random_function(P.M, rng));
    const Multi S = schouten(P.M, P.pi, P.pi, x, kRich);
    const Multi O = rho_push(P.M, P.action, 1, embed_algebra(cartan_omega(alg), 1), x);
    std::vector<Eigen::VectorXd> d;
    for (const auto& f : fs) d.push_back(differential(P.M, f, x, kRich));
    EXPECT_NEAR(evaluate_array(S, d), 2.0 * evaluate_array(O, d), 1e-5);
  }
}

#include "support.hpp"

#include "qpdr/drmatrix.hpp"
#include "qpdr/fockrosly.hpp"

using namespace qpdr;
using qpdr::testing::max_abs;
using qpdr::testing::random_point;
using qpdr::testing::random_skew;

namespace {

const FdOptions kRich{1e-4, true};

SurfaceScenario casimir_surface(int n, int genus, const Eigen::MatrixXd& skew) {
  const QuadraticLieAlgebra alg = su2();
  return make_surface(alg, n, genus, std::vector<GroupMatrix>(n, alg.rep[1]), r_with_casimir(alg, skew));
}

Point reduced_point(const QuasiPoissonSpace& red, Rng& rng) {
  Point x;
  x.chart = Eigen::VectorXd::Constant(1, rng.uniform(0.2, 1.3));
  for (int g = 0; g < red.M.group_factors(); ++g) x.g.push_back(random_group_element(red.M.algebra(), rng));
  return x;
}

}  // namespace

TEST(FockRosly, NablaOfConstantIsZero) {
  const SurfaceScenario s = casimir_surface(2, 1, Eigen::MatrixXd::Zero(3, 3));
  Rng rng(1);
  const Point x = random_point(s.manifold(), rng);
  for (int i = 1; i <= s.operators(); ++i)
    EXPECT_EQ(nabla(s, i, [](const Point&) { return 1.0; }, x).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FockRosly, NablaActsOnItsOwnSlot) {
  const SurfaceScenario s = casimir_surface(2, 0, Eigen::MatrixXd::Zero(3, 3));
  Rng rng(2);
  const Point x = random_point(s.manifold(), rng);
  const ScalarFn f = [](const Point& p) { return (p.g[1] * p.g[1]).trace().real() + p.g[1](0, 1).imag(); };
  EXPECT_EQ(nabla(s, 1, f, x).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(nabla(s, 2, f, x).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(nabla(s, 3, f, x).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(FockRosly, NablaOfTraceMatchesAnalyticDerivative) {
  const QuadraticLieAlgebra alg = su2();
  const SurfaceScenario s = casimir_surface(1, 0, Eigen::MatrixXd::Zero(3, 3));
  Rng rng(3);
  const Point x = random_point(s.manifold(), rng);
  const ScalarFn f = [](const Point& p) { return p.g[0].trace().real(); };
  const Eigen::VectorXd nR = nabla(s, 1, f, x), nL = nabla(s, 2, f, x);
  for (int a = 0; a < 3; ++a) {
    // d/dt Re tr(x exp(-t e_a)) and d/dt Re tr(exp(t e_a) x)
    EXPECT_NEAR(nR(a), -(x.g[0] * alg.rep[a]).trace().real(), 1e-9);
    EXPECT_NEAR(nL(a), (alg.rep[a] * x.g[0]).trace().real(), 1e-9);
  }
}

TEST(FockRosly, GenusBlockIndexing) {
  const ProductManifold M(su2(), 0, 3);
  const int n = 1;
  // slots: M_1 then A_1, B_1
  const Eigen::MatrixXd c1 = nabla_covectors(M, n, 1, 3), c2 = nabla_covectors(M, n, 1, 4),
                        c3 = nabla_covectors(M, n, 1, 5), c4 = nabla_covectors(M, n, 1, 6);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(c1(a, M.L(1, a)), -1.0);
    EXPECT_EQ(c2(a, M.L(2, a)), -1.0);
    EXPECT_EQ(c3(a, M.R(1, a)), 1.0);
    EXPECT_EQ(c4(a, M.R(2, a)), 1.0);
  }
  EXPECT_EQ(nabla_covectors(M, n, 1, 1)(0, M.L(0, 0)), -1.0);
  EXPECT_EQ(nabla_covectors(M, n, 1, 2)(0, M.R(0, 0)), 1.0);
  EXPECT_THROW(nabla_covectors(M, n, 1, 0), InputError);
  EXPECT_THROW(nabla_covectors(M, n, 1, 7), InputError);
}

TEST(FockRosly, SurfaceValidation) {
  EXPECT_THROW(make_surface(su2(), 0, 0, {}, Eigen::MatrixXd::Identity(3, 3)), InputError);
  EXPECT_THROW(make_surface(su2(), 2, 0, {su2().rep[1]}, Eigen::MatrixXd::Identity(3, 3)), InputError);
  EXPECT_THROW(reduced_space(su2(), zero_triple(1, 3), 1, 0), InputError);
}

TEST(FockRosly, BracketIsAntisymmetric) {
  Rng rng(4);
  const SurfaceScenario s = casimir_surface(2, 1, random_skew(3, rng));
  const Point x = random_point(s.manifold(), rng);
  const ScalarFn f = random_function(s.manifold(), rng), h = random_function(s.manifold(), rng);
  EXPECT_NEAR(fr_bracket(s, f, f, x), 0.0, 1e-10);
  EXPECT_NEAR(fr_bracket(s, f, h, x), -fr_bracket(s, h, f, x), 1e-10);
}

TEST(FockRosly, SingleClassJacobiatorOnClassFunctions) {
  const SurfaceScenario s = casimir_surface(1, 0, Eigen::MatrixXd::Zero(3, 3));
  const ProductManifold M = s.manifold();
  const FramedField B = fr_field(s);
  Rng rng(5);
  for (int t = 0; t < 5; ++t) {
    const Point x = random_point(M, rng);
    EXPECT_NEAR(jacobiator(M, B, random_invariant_function(M, rng), random_invariant_function(M, rng),
                           random_invariant_function(M, rng), x, kRich),
                0.0, 1e-5);
  }
}

TEST(FockRosly, FusionCoincidence) {
  const SurfaceScenario s = casimir_surface(2, 0, Eigen::MatrixXd::Zero(3, 3));
  const QuasiPoissonSpace fused = build_surface_quasi(su2(), 2, 0);
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const Point x = random_point(fused.M, rng);
    const ScalarFn f = random_function(fused.M, rng), h = random_function(fused.M, rng);
    EXPECT_NEAR(evaluate(fused.M, fused.pi, {f, h}, x), kPiGScale * fr_bracket(s, f, h, x), 1e-5);
  }
}

TEST(FockRosly, CasimirBracketIsConjugationInvariant) {
  const SurfaceScenario s = casimir_surface(2, 1, Eigen::MatrixXd::Zero(3, 3));
  const ProductManifold M = s.manifold();
  Rng rng(7);
  for (int t = 0; t < 3; ++t) {
    const Point x = random_point(M, rng);
    const GroupMatrix y = random_group_element(su2(), rng, 1.0);
    auto conj = [y](Point p) {
      for (auto& g : p.g) g = y * g * y.inverse();
      return p;
    };
    const ScalarFn f = random_function(M, rng), h = random_function(M, rng);
    const ScalarFn fy = [&](const Point& p) { return f(conj(p)); }, hy = [&](const Point& p) { return h(conj(p)); };
    EXPECT_NEAR(fr_bracket(s, fy, hy, x, kRich), fr_bracket(s, f, h, conj(x), kRich), 1e-5);
  }
}

TEST(FockRosly, InvariantFunctionsIgnoreSkewPart) {
  Rng rng(8);
  const Eigen::MatrixXd A = random_skew(3, rng), B = random_skew(3, rng);
  for (auto [n, g] : std::vector<std::pair<int, int>>{{2, 0}, {3, 0}, {1, 1}}) {
    const SurfaceScenario sa = casimir_surface(n, g, A), sb = casimir_surface(n, g, B);
    const ProductManifold M = sa.manifold();
    for (int t = 0; t < 3; ++t) {
      const Point x = random_point(M, rng);
      const ScalarFn F = random_invariant_function(M, rng), H = random_function(M, rng);
      EXPECT_NEAR(fr_bracket(sa, F, H, x, kRich), fr_bracket(sb, F, H, x, kRich), 1e-6);
    }
  }
}

TEST(FockRosly, CybeCheck) {
  Rng rng(9);
  EXPECT_EQ(cybe_check(su2(), Eigen::MatrixXd::Zero(3, 3)), 0.0);
  EXPECT_EQ(cybe_check(abelian(3), random_skew(3, rng)), 0.0);
  EXPECT_NEAR(cybe_check(su2(), su2().Kinv), cartan_three_tensor(su2()).norm(), 1e-12);
}

TEST(FockRosly, ReducedBracketSpecialCases) {
  const QuadraticLieAlgebra alg = su2();
  const DynamicalTriple t = moduli_triple(alg, su2_section());
  const QuasiPoissonSpace red = reduced_space(alg, t, 3, 0);
  Rng rng(10);
  const double h = 1e-5;
  for (int s = 0; s < 5; ++s) {
    const Point x = reduced_point(red, rng);
    const ScalarFn F = [](const Point& p) { return std::sin(p.chart(0)) + 0.3 * p.chart(0) * p.chart(0); };
    const ScalarFn G = [](const Point& p) { return std::cos(2 * p.chart(0)); };
    const ScalarFn H = random_function(red.M, rng);
    EXPECT_NEAR(reduced_bracket(red, F, G, x), 0.0, 1e-10);
    // theta^ pairing with conjugation generators computed by explicit flows
    double oracle = 0;
    const double dF = std::cos(x.chart(0)) + 0.6 * x.chart(0);
    const Eigen::MatrixXd th = t.theta(x.chart);
    for (int a = 0; a < 3; ++a) {
      auto conj = [&](double tt) {
        Point y = x;
        const GroupMatrix e = exponential(alg, tt * alg.basis_vector(a));
        y.g[0] = e.inverse() * x.g[0] * e;
        return H(y);
      };
      const double rhoH = kActionScale * (conj(h) - conj(-h)) / (2 * h);
      oracle += th(0, a) * dF * rhoH;
    }
    EXPECT_NEAR(reduced_bracket(red, F, H, x), oracle, 1e-7);
  }
}

TEST(FockRosly, ReducedBracketIsPoisson) {
  const QuadraticLieAlgebra alg = su2();
  const QuasiPoissonSpace red = reduced_space(alg, moduli_triple(alg, su2_section()), 3, 0);
  Rng rng(11);
  for (int s = 0; s < 4; ++s) {
    const Point x = reduced_point(red, rng);
    EXPECT_NEAR(jacobiator(red.M, red.pi, random_function(red.M, rng), random_function(red.M, rng),
                           random_function(red.M, rng), x, kRich),
                0.0, 1e-5);
  }
}

TEST(FockRosly, ReducedBracketWithGenusIsPoisson) {
  const QuadraticLieAlgebra alg = su2();
  const QuasiPoissonSpace red = reduced_space(alg, moduli_triple(alg, su2_section()), 2, 1);
  Rng rng(12);
  for (int s = 0; s < 2; ++s) {
    const Point x = reduced_point(red, rng);
    EXPECT_NEAR(jacobiator(red.M, red.pi, random_function(red.M, rng), random_function(red.M, rng),
                           random_function(red.M, rng), x, kRich),
                0.0, 1e-5);
  }
}

TEST(FockRosly, GaugedReducedBrackets) {
  // {F o Phi, G o Phi} = {F, G}^g o Phi with Phi conjugating the remaining classes by g(alpha)
  const QuadraticLieAlgebra alg = su2();
  const DynamicalTriple t = moduli_triple(alg, su2_section());
  const GroupMapFn g = [](const Eigen::VectorXd& a) { return exponential(su2(), Eigen::Vector3d(0.4 * a(0), 0.2, -0.3)); };
  const QuasiPoissonSpace red = reduced_space(alg, t, 3, 0), redg = reduced_space(alg, gauge_transform(alg, t, g), 3, 0);
  auto Phi = [g](Point p) {
    const GroupMatrix y = g(p.chart);
    for (auto& m : p.g) m = y * m * y.inverse();
    return p;
  };
  Rng rng(13);
  for (int s = 0; s < 5; ++s) {
    const Point x = reduced_point(red, rng);
    const ScalarFn F = random_function(red.M, rng), G = random_function(red.M, rng);
    const ScalarFn FP = [&](const Point& p) { return F(Phi(p)); }, GP = [&](const Point& p) { return G(Phi(p)); };
    EXPECT_NEAR(reduced_bracket(red, FP, GP, x, kRich), reduced_bracket(redg, F, G, Phi(x), kRich), 1e-5);
  }
}

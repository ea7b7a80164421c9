#include "qpdr/sampling.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace qpdr {

Eigen::VectorXd Rng::normal_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Eigen::MatrixXcd Rng::complex_matrix(int m) {
  Eigen::MatrixXcd c(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double re = normal();
      const double im = normal();
      c(i, j) = {re, im};
    }
  return c;
}

GroupMatrix random_group_element(const QuadraticLieAlgebra& alg, Rng& rng, double scale) {
  return exponential(alg, scale * rng.normal_vector(alg.dim));
}

GroupMatrix random_conjugate(const QuadraticLieAlgebra& alg, const GroupMatrix& base, Rng& rng) {
  const GroupMatrix y = random_group_element(alg, rng);
  return y * base * y.inverse();
}

namespace {

struct ChartWeights {
  Eigen::VectorXd s, c;
  double operator()(const Eigen::VectorXd& a) const {
    double v = 1.0;
    for (int i = 0; i < a.size(); ++i) v += s(i) * std::sin(a(i)) + c(i) * std::cos(2.0 * a(i));
    return v;
  }
};

ChartWeights chart_weights(int k, Rng& rng) {
  ChartWeights w;
  w.s = 0.5 * rng.normal_vector(k);
  w.c = 0.5 * rng.normal_vector(k);
  return w;
}

}  // namespace

ScalarFn random_function(const ProductManifold& M, Rng& rng) {
  const int ng = M.group_factors(), m = M.algebra().rep_size(), k = M.chart_dim();
  std::vector<Eigen::MatrixXcd> C1, C2;
  for (int g = 0; g < ng; ++g) {
    C1.push_back(rng.complex_matrix(m));
    C2.push_back(rng.complex_matrix(m));
  }
  const Eigen::MatrixXcd D = rng.complex_matrix(m);
  const ChartWeights w = chart_weights(k, rng);
  const ChartWeights w2 = chart_weights(k, rng);
  const double q = rng.normal();
  return [=](const Point& x) {
    double lin = 0;
    for (int g = 0; g < ng; ++g) {
      lin += (C1[g] * x.g[g]).trace().real();
      lin += 0.5 * (C2[g] * x.g[g] * x.g[g]).trace().real();
    }
    if (ng >= 2) lin += (D * x.g[0] * x.g[ng - 1]).trace().real();
    return lin * w(x.chart) + q * w2(x.chart) * w2(x.chart);
  };
}

ScalarFn random_invariant_function(const ProductManifold& M, Rng& rng) {
  const int ng = M.group_factors(), k = M.chart_dim();
  const Eigen::VectorXd a = rng.normal_vector(ng);
  const Eigen::MatrixXd b = rng.normal_vector(ng * ng).reshaped(ng, ng);
  const double c3 = rng.normal();
  const ChartWeights w = chart_weights(k, rng);
  return [=](const Point& x) {
    double v = 0;
    for (int i = 0; i < ng; ++i) {
      const double ti = x.g[i].trace().real();
      v += a(i) * ti + 0.3 * a(i) * ti * ti;
      for (int j = 0; j < ng; ++j) v += 0.5 * b(i, j) * (x.g[i] * x.g[j]).trace().real();
    }
    if (ng >= 3) v += c3 * (x.g[0] * x.g[1] * x.g[2]).trace().real();
    return v * w(x.chart);
  };
}

ScalarFn random_chart_function(const ProductManifold& M, Rng& rng) {
  const ChartWeights w = chart_weights(M.chart_dim(), rng);
  const ChartWeights w2 = chart_weights(M.chart_dim(), rng);
  return [=](const Point& x) { return w(x.chart) + w2(x.chart) * w2(x.chart); };
}

}  // namespace qpdr

#pragma once

#include <cstdint>
#include <random>

#include "qpdr/manifold.hpp"

namespace qpdr {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double normal() { return normal_(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  Eigen::VectorXd normal_vector(int n);
  Eigen::MatrixXcd complex_matrix(int m);

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
};

GroupMatrix random_group_element(const QuadraticLieAlgebra& alg, Rng& rng, double scale = 0.8);
// y base y^-1 for a random y.
GroupMatrix random_conjugate(const QuadraticLieAlgebra& alg, const GroupMatrix& base, Rng& rng);

// Generic test function: traces of random linear and quadratic words in the
// factor matrices, modulated by trigonometric chart terms.
ScalarFn random_function(const ProductManifold& M, Rng& rng);
// Invariant under simultaneous conjugation of every group factor; chart terms allowed.
ScalarFn random_invariant_function(const ProductManifold& M, Rng& rng);
// Function of the chart coordinates only.
ScalarFn random_chart_function(const ProductManifold& M, Rng& rng);

}  // namespace qpdr

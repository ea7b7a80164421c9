#pragma once

#include <Eigen/Core>

#include <functional>

#include "qpdr/tensor.hpp"

namespace qpdr {

using ChartMatrixFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// (pi_U, theta, r) on a k-dimensional chart. theta(i,a) is the coefficient of
// d/dalpha_i (x) e_a; pi_U and r are skew arrays (k x k and n x n).
struct DynamicalTriple {
  int k = 0;
  int n = 0;
  ChartMatrixFn pi_U;
  ChartMatrixFn theta;
  ChartMatrixFn r;
};

DynamicalTriple zero_triple(int k, int n);

// pi_U + theta^ + r as a skew array over chart (k) followed by algebra (n),
// with theta^(i,k+a) = theta(i,a).
Multi mixed_bivector(const Eigen::MatrixXd& pi_U, const Eigen::MatrixXd& theta,
                     const Eigen::MatrixXd& r);
Multi mixed_bivector(const DynamicalTriple& t, const Eigen::VectorXd& alpha);

}  // namespace qpdr

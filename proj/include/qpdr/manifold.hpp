#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "qpdr/group.hpp"
#include "qpdr/liealg.hpp"
#include "qpdr/tensor.hpp"

namespace qpdr {

// Chart coordinates followed by the matrices of the group factors.
struct Point {
  Eigen::VectorXd chart;
  std::vector<GroupMatrix> g;
};

using ScalarFn = std::function<double(const Point&)>;

struct FdOptions {
  double h = 1e-5;
  bool richardson = false;
};

// Chart factor of dimension k followed by ng copies of G. Frame ordering:
// chart fields d_i, then per factor L_a (a < n) and R_a.
// L_a flows x -> x exp(t e_a), R_a flows x -> exp(t e_a) x.
class ProductManifold {
 public:
  ProductManifold(QuadraticLieAlgebra alg, int chart_dim, int group_factors);

  const QuadraticLieAlgebra& algebra() const { return alg_; }
  int chart_dim() const { return k_; }
  int group_factors() const { return ng_; }
  int alg_dim() const { return alg_.dim; }
  int frame_size() const { return k_ + 2 * alg_.dim * ng_; }
  int L(int factor, int a) const { return k_ + 2 * alg_.dim * factor + a; }
  int R(int factor, int a) const { return k_ + 2 * alg_.dim * factor + alg_.dim + a; }
  const FrameStructure& structure() const { return s_; }

  Point flow(const Point& x, int field, double t) const;
  void check_point(const Point& x) const;

  // Rows: chart coordinates, then the left-trivialized tangent of each factor
  // (L_a -> e_a, R_a -> Ad(g^-1) e_a).
  Eigen::MatrixXd trivialization(const Point& x) const;

 private:
  QuadraticLieAlgebra alg_;
  int k_;
  int ng_;
  FrameStructure s_;
};

double derive(const ProductManifold& M, int field, const ScalarFn& f, const Point& x,
              const FdOptions& opts = {});
Eigen::VectorXd differential(const ProductManifold& M, const ScalarFn& f, const Point& x,
                             const FdOptions& opts = {});

struct FramedField {
  int degree = 0;
  std::function<Multi(const Point&)> coeff;
  bool constant = false;  // coefficient array independent of the point
};

FramedField zero_field(const ProductManifold& M, int degree);
FramedField constant_field(Multi m);
FramedField operator+(const FramedField& a, const FramedField& b);
FramedField operator-(const FramedField& a, const FramedField& b);
FramedField scaled(double s, const FramedField& a);

// Derivatives of the coefficient array of `field` along every frame field.
std::vector<Multi> field_derivatives(const ProductManifold& M, const FramedField& field,
                                     const Point& x, const FdOptions& opts = {});

double evaluate(const ProductManifold& M, const FramedField& field,
                const std::vector<ScalarFn>& fs, const Point& x, const FdOptions& opts = {});
double evaluate_array(const Multi& coeff, const std::vector<Eigen::VectorXd>& dfs);

Multi schouten(const ProductManifold& M, const FramedField& A, const FramedField& B,
               const Point& x, const FdOptions& opts = {});

// {f,g} = pi(df,dg) as a scalar function.
ScalarFn poisson_bracket(const ProductManifold& M, const FramedField& pi, const ScalarFn& f,
                         const ScalarFn& g, const FdOptions& opts = {});
double jacobiator(const ProductManifold& M, const FramedField& pi, const ScalarFn& f,
                  const ScalarFn& g, const ScalarFn& h, const Point& x,
                  const FdOptions& opts = {});

enum class ActionKind { None, Conjugation, Left, Right };

// rho(e_a) per group factor: conjugation mu (L_a - R_a), left -mu R_a,
// right +mu L_a; an optional chart part returns the k x n matrix of chart
// components at the point.
struct ActionModel {
  std::vector<ActionKind> kinds;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> chart_part;
  double mu = kActionScale;

  static ActionModel uniform(int factors, ActionKind kind);
};

// Frame coefficients of rho(e_a) as the columns of a frame_size x n matrix.
Eigen::MatrixXd rho_matrix(const ProductManifold& M, const ActionModel& act, const Point& x);

// Elements of Lambda(TU + g): index set chart (k) followed by algebra (n).
// The chart part maps onto the first k chart fields of M.
using MixedFn = std::function<Multi(const Point&)>;
FramedField rho_extend(const ProductManifold& M, const ActionModel& act, int k, int degree,
                       MixedFn elem);
Multi rho_push(const ProductManifold& M, const ActionModel& act, int k, const Multi& elem,
               const Point& x);

// Embedded chart box alpha -> Point; tangents left-trivialized as in
// ProductManifold::trivialization.
struct CrossSection {
  int k = 0;
  std::function<Point(const Eigen::VectorXd&)> embed;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> tangent;  // optional, analytic
  double fd_step = 1e-6;

  Eigen::MatrixXd tangents(const ProductManifold& M, const Eigen::VectorXd& alpha) const;
};

}  // namespace qpdr

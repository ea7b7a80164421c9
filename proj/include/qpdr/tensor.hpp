#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "qpdr/errors.hpp"

namespace qpdr {

// Rank-d array over an index set of size n, row-major. Multivectors are
// stored as fully antisymmetric arrays with the convention
// a^b = a(x)b - b(x)a, so evaluating on covectors is plain contraction.
template <typename Scalar>
class MultiArray {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  MultiArray() = default;
  MultiArray(int degree, int n) : degree_(degree), n_(n) {
    if (degree < 0 || degree > 4) throw InputError("MultiArray: degree must be in 0..4");
    if (n < 0) throw InputError("MultiArray: negative size");
    c_ = Vector::Zero(static_cast<Eigen::Index>(ipow(n, degree)));
  }

  static MultiArray scalar(Scalar v) {
    MultiArray m(0, 0);
    m.c_(0) = v;
    return m;
  }

  int degree() const { return degree_; }
  int size() const { return n_; }
  Vector& data() { return c_; }
  const Vector& data() const { return c_; }

  Scalar& operator()(int a) { return c_(a); }
  Scalar operator()(int a) const { return c_(a); }
  Scalar& operator()(int a, int b) { return c_(a * n_ + b); }
  Scalar operator()(int a, int b) const { return c_(a * n_ + b); }
  Scalar& operator()(int a, int b, int c) { return c_((a * n_ + b) * n_ + c); }
  Scalar operator()(int a, int b, int c) const { return c_((a * n_ + b) * n_ + c); }

  Scalar& at(const int* idx) { return c_(flat(idx)); }
  Scalar at(const int* idx) const { return c_(flat(idx)); }

  Eigen::Index flat(const int* idx) const {
    Eigen::Index f = 0;
    for (int k = 0; k < degree_; ++k) f = f * n_ + idx[k];
    return f;
  }
  void unflat(Eigen::Index f, int* idx) const {
    for (int k = degree_ - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(f % n_);
      f /= n_;
    }
  }

  MultiArray& operator+=(const MultiArray& o) {
    check_same(o);
    c_ += o.c_;
    return *this;
  }
  MultiArray& operator-=(const MultiArray& o) {
    check_same(o);
    c_ -= o.c_;
    return *this;
  }
  MultiArray& operator*=(Scalar s) {
    c_ *= s;
    return *this;
  }
  friend MultiArray operator+(MultiArray a, const MultiArray& b) { return a += b; }
  friend MultiArray operator-(MultiArray a, const MultiArray& b) { return a -= b; }
  friend MultiArray operator*(Scalar s, MultiArray a) { return a *= s; }
  friend MultiArray operator*(MultiArray a, Scalar s) { return a *= s; }
  MultiArray operator-() const {
    MultiArray m = *this;
    m.c_ = -m.c_;
    return m;
  }

  Scalar max_abs() const { return c_.size() ? c_.cwiseAbs().maxCoeff() : Scalar(0); }
  Scalar norm() const { return c_.norm(); }

  static std::size_t ipow(int n, int d) {
    std::size_t p = 1;
    for (int k = 0; k < d; ++k) p *= static_cast<std::size_t>(n);
    return p;
  }

 private:
  void check_same(const MultiArray& o) const {
    if (o.degree_ != degree_ || o.n_ != n_) throw InputError("MultiArray: shape mismatch");
  }

  int degree_ = 0;
  int n_ = 0;
  Vector c_ = Vector::Zero(1);
};

using Multi = MultiArray<double>;

// Sign of the permutation perm[0..d).
inline int permutation_sign(const int* perm, int d) {
  int s = 1;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (perm[i] > perm[j]) s = -s;
  return s;
}

// All permutations of 0..d-1 with signs, d <= 4.
const std::vector<std::pair<std::array<int, 4>, int>>& permutations(int d);

template <typename Scalar>
MultiArray<Scalar> antisymmetrize(const MultiArray<Scalar>& m) {
  const int d = m.degree();
  MultiArray<Scalar> out(d, m.size());
  if (d <= 1) return m;
  const auto& perms = permutations(d);
  std::array<int, 4> idx{}, pidx{};
  for (Eigen::Index f = 0; f < m.data().size(); ++f) {
    const Scalar v = m.data()(f);
    if (v == Scalar(0)) continue;
    m.unflat(f, idx.data());
    for (const auto& [p, s] : perms) {
      for (int k = 0; k < d; ++k) pidx[k] = idx[p[k]];
      out.at(pidx.data()) += Scalar(s) * v;
    }
  }
  Scalar fact = 1;
  for (int k = 2; k <= d; ++k) fact *= k;
  out *= Scalar(1) / fact;
  return out;
}

// Sum over signed permutations of the index slots, without normalization.
template <typename Scalar>
MultiArray<Scalar> full_alt(const MultiArray<Scalar>& m) {
  Scalar fact = 1;
  for (int k = 2; k <= m.degree(); ++k) fact *= k;
  return fact * antisymmetrize(m);
}

template <typename Scalar>
MultiArray<Scalar> tensor_product(const MultiArray<Scalar>& a, const MultiArray<Scalar>& b) {
  if (a.size() != b.size() && a.degree() > 0 && b.degree() > 0)
    throw InputError("tensor_product: size mismatch");
  const int n = a.degree() > 0 ? a.size() : b.size();
  MultiArray<Scalar> out(a.degree() + b.degree(), n);
  const Eigen::Index nb = b.data().size();
  for (Eigen::Index i = 0; i < a.data().size(); ++i)
    out.data().segment(i * nb, nb) = a.data()(i) * b.data();
  return out;
}

// Wedge with no 1/2: for vectors a^b = a(x)b - b(x)a; in general
// (p+q)!/(p!q!) Alt(a(x)b).
template <typename Scalar>
MultiArray<Scalar> wedge(const MultiArray<Scalar>& a, const MultiArray<Scalar>& b) {
  const int p = a.degree(), q = b.degree();
  Scalar binom = 1;
  for (int k = 1; k <= q; ++k) binom = binom * Scalar(p + k) / Scalar(k);
  return binom * antisymmetrize(tensor_product(a, b));
}

template <typename Scalar>
MultiArray<Scalar> vector_multi(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
  MultiArray<Scalar> m(1, static_cast<int>(v.size()));
  m.data() = v;
  return m;
}

template <typename Scalar>
MultiArray<Scalar> matrix_multi(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  if (a.rows() != a.cols()) throw InputError("matrix_multi: square matrix expected");
  const int n = static_cast<int>(a.rows());
  MultiArray<Scalar> m(2, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a(i, j);
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> multi_matrix(const MultiArray<Scalar>& m) {
  if (m.degree() != 2) throw InputError("multi_matrix: degree 2 expected");
  const int n = m.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
  return a;
}

// out^{A1..Ad} = sum map(A1,a1)...map(Ad,ad) m^{a1..ad}; map is n_out x n_in.
template <typename Scalar>
MultiArray<Scalar> push(const MultiArray<Scalar>& m,
                        const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& map) {
  const int d = m.degree();
  const int nout = static_cast<int>(map.rows());
  if (map.cols() != m.size() && d > 0) throw InputError("push: map has wrong number of columns");
  MultiArray<Scalar> cur = m;
  // contract one slot at a time; slot k goes from n_in to n_out
  std::vector<int> dims(d, m.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> buf = m.data();
  for (int k = 0; k < d; ++k) {
    std::size_t before = 1, after = 1;
    for (int j = 0; j < k; ++j) before *= dims[j];
    for (int j = k + 1; j < d; ++j) after *= dims[j];
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(before * nout * after);
    const int nin = dims[k];
    for (std::size_t b = 0; b < before; ++b)
      for (int i = 0; i < nin; ++i) {
        const auto src = buf.segment((b * nin + i) * after, after);
        if (src.isZero(0)) continue;
        for (int o = 0; o < nout; ++o) {
          const Scalar w = map(o, i);
          if (w == Scalar(0)) continue;
          next.segment((b * nout + o) * after, after) += w * src;
        }
      }
    buf.swap(next);
    dims[k] = nout;
  }
  MultiArray<Scalar> out(d, d > 0 ? nout : 0);
  out.data() = buf;
  return out;
}

// Full contraction with one covector per slot.
template <typename Scalar>
Scalar contract(const MultiArray<Scalar>& m,
                const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& covs) {
  const int d = m.degree();
  if (static_cast<int>(covs.size()) != d) throw InputError("contract: wrong number of covectors");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> buf = m.data();
  for (int k = d - 1; k >= 0; --k) {
    const int n = m.size();
    const Eigen::Index rows = buf.size() / n;
    Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        buf.data(), rows, n);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next = a * covs[k];
    buf.swap(next);
  }
  return buf(0);
}

// Keep only entries whose number of indices below `split` equals p.
Multi bigraded_component(const Multi& m, int split, int p);

// Frame structure constants: [E_A, E_B] = sum_C c(A,B)_C E_C, stored sparsely.
struct FrameStructure {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> c;  // index A*n+B

  explicit FrameStructure(int n_ = 0) : n(n_), c(static_cast<std::size_t>(n_) * n_) {}
  const std::vector<std::pair<int, double>>& at(int a, int b) const { return c[a * n + b]; }
  void add(int a, int b, int cc, double v) {
    if (v != 0.0) c[a * n + b].emplace_back(cc, v);
  }
};

// Schouten bracket of framed multivector arrays at a point. dA[C] and dB[C]
// hold the derivative of the coefficient arrays along frame field E_C.
Multi schouten_bracket(const FrameStructure& s, const Multi& A, const std::vector<Multi>& dA,
                       const Multi& B, const std::vector<Multi>& dB);

// [P,Q] for bivectors through the Jacobiator expansion
// 1/2 FullAlt(T(P,Q) + T(Q,P)), T^{XYZ} = P^{XB} Q^{YZ}_{,B} + P^{XB} Q^{CZ} c_{BC}^Y.
// Independent of schouten_bracket; used as a cross-check and by drmatrix.
Multi bivector_bracket(const FrameStructure& s, const Multi& P, const std::vector<Multi>& dP,
                       const Multi& Q, const std::vector<Multi>& dQ);

}  // namespace qpdr

#include "qpdr/tensor.hpp"

#include <algorithm>
#include <mutex>

namespace qpdr {

const std::vector<std::pair<std::array<int, 4>, int>>& permutations(int d) {
  static std::array<std::vector<std::pair<std::array<int, 4>, int>>, 5> table;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int n = 0; n <= 4; ++n) {
      std::array<int, 4> p{0, 1, 2, 3};
      do {
        table[n].emplace_back(p, permutation_sign(p.data(), n));
      } while (std::next_permutation(p.begin(), p.begin() + n));
    }
  });
  if (d < 0 || d > 4) throw InputError("permutations: degree out of range");
  return table[d];
}

Multi bigraded_component(const Multi& m, int split, int p) {
  Multi out = m;
  std::array<int, 4> idx{};
  for (Eigen::Index f = 0; f < m.data().size(); ++f) {
    m.unflat(f, idx.data());
    int low = 0;
    for (int k = 0; k < m.degree(); ++k) low += idx[k] < split ? 1 : 0;
    if (low != p) out.data()(f) = 0.0;
  }
  return out;
}

namespace {

// Increasing index tuples carrying a nonzero coefficient.
void monomials(const Multi& m, std::vector<std::array<int, 4>>& out) {
  out.clear();
  std::array<int, 4> idx{};
  for (Eigen::Index f = 0; f < m.data().size(); ++f) {
    if (m.data()(f) == 0.0) continue;
    m.unflat(f, idx.data());
    bool inc = true;
    for (int k = 1; k < m.degree(); ++k) inc = inc && idx[k - 1] < idx[k];
    if (inc) out.push_back(idx);
  }
}

// Add v * E_{i0} ^ ... ^ E_{id-1} (unnormalized wedge) into out.
void add_monomial(Multi& out, const int* ids, int d, double v) {
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      if (ids[a] == ids[b]) return;
  std::array<int, 4> pidx{};
  for (const auto& [p, s] : permutations(d)) {
    for (int k = 0; k < d; ++k) pidx[k] = ids[p[k]];
    out.at(pidx.data()) += s * v;
  }
}

}  // namespace

Multi schouten_bracket(const FrameStructure& s, const Multi& A, const std::vector<Multi>& dA,
                       const Multi& B, const std::vector<Multi>& dB) {
  const int p = A.degree(), q = B.degree(), n = s.n;
  if (p < 1 || q < 1) throw NotImplementedError("schouten_bracket: degrees must be >= 1");
  if (p + q - 1 > 3) throw NotImplementedError("schouten_bracket: result degree above 3");
  if (A.size() != n || B.size() != n) throw InputError("schouten_bracket: frame size mismatch");
  if (static_cast<int>(dA.size()) != n || static_cast<int>(dB.size()) != n)
    throw InputError("schouten_bracket: derivative arrays missing");

  Multi out(p + q - 1, n);
  std::vector<std::array<int, 4>> mi, mj;
  monomials(A, mi);
  monomials(B, mj);
  Eigen::VectorXd vec(n);
  std::array<int, 4> ids{};
  for (const auto& I : mi) {
    const double a = A.at(I.data());
    for (const auto& J : mj) {
      const double b = B.at(J.data());
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < q; ++j) {
          const int sgn = ((i + j) % 2 == 0) ? 1 : -1;
          const int ai = I[i], bj = J[j];
          vec.setZero();
          for (const auto& [cc, v] : s.at(ai, bj)) vec(cc) += a * b * v;
          if (j == 0) vec(bj) += a * dB[ai].at(J.data());
          if (i == 0) vec(ai) -= b * dA[bj].at(I.data());
          int d = 1;
          for (int t = 0; t < p; ++t)
            if (t != i) ids[d++] = I[t];
          for (int t = 0; t < q; ++t)
            if (t != j) ids[d++] = J[t];
          for (int cc = 0; cc < n; ++cc) {
            if (vec(cc) == 0.0) continue;
            ids[0] = cc;
            add_monomial(out, ids.data(), d, sgn * vec(cc));
          }
        }
      }
    }
  }
  return out;
}

namespace {

Multi jacobi_expansion(const FrameStructure& s, const Multi& P, const Multi& Q,
                       const std::vector<Multi>& dQ) {
  const int n = s.n;
  Multi t(3, n);
  for (int x = 0; x < n; ++x) {
    for (int b = 0; b < n; ++b) {
      const double pxb = P(x, b);
      if (pxb == 0.0) continue;
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) t(x, y, z) += pxb * dQ[b](y, z);
      for (int c = 0; c < n; ++c)
        for (const auto& [y, v] : s.at(b, c))
          for (int z = 0; z < n; ++z) t(x, y, z) += pxb * Q(c, z) * v;
    }
  }
  return t;
}

}  // namespace

Multi bivector_bracket(const FrameStructure& s, const Multi& P, const std::vector<Multi>& dP,
                       const Multi& Q, const std::vector<Multi>& dQ) {
  if (P.degree() != 2 || Q.degree() != 2) throw InputError("bivector_bracket: bivectors expected");
  Multi t = jacobi_expansion(s, P, Q, dQ) + jacobi_expansion(s, Q, P, dP);
  return 0.5 * full_alt(t);
}

}  // namespace qpdr

#pragma once

// Small dense linear algebra over F, on Subfield codes.

#include <cstdint>
#include <utility>
#include <vector>

#include "clq/field_tower.hpp"

namespace clq {

using Code = Subfield::Code;
using FVector = std::vector<Code>;
using FMatrix = std::vector<FVector>;  // row-major

inline Code dot(const Subfield& F, const FVector& a, const FVector& b) {
  Code s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = F.add(s, F.mul(a[i], b[i]));
  return s;
}

/// a + c b
inline FVector axpy(const Subfield& F, const FVector& a, Code c, const FVector& b) {
  FVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = F.add(a[i], F.mul(c, b[i]));
  return out;
}

inline FVector scaled(const Subfield& F, Code c, const FVector& a) {
  FVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = F.mul(c, a[i]);
  return out;
}

inline bool is_zero_vector(const FVector& a) {
  for (Code c : a)
    if (c != 0) return false;
  return true;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(const Subfield& F, FMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const Code inv = F.inv(m[row][col]);
    for (auto& c : m[row]) c = F.mul(c, inv);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Code f = F.neg(m[r][col]);
      for (std::size_t c = 0; c < cols; ++c) m[r][c] = F.add(m[r][c], F.mul(f, m[row][c]));
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  return pivots;
}

inline std::size_t rank(const Subfield& F, FMatrix m) { return rref(F, m).size(); }

/// Basis of {x : m x = 0}.
inline FMatrix nullspace(const Subfield& F, FMatrix m, std::size_t cols) {
  const auto piv = rref(F, m);
  std::vector<char> is_pivot(cols, 0);
  for (auto c : piv) is_pivot[c] = 1;
  FMatrix out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    FVector v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = F.neg(m[r][free]);
    out.push_back(std::move(v));
  }
  return out;
}

/// Inverse of a square matrix; empty result when singular.
inline FMatrix inverse(const Subfield& F, const FMatrix& m) {
  const std::size_t n = m.size();
  FMatrix aug(n, FVector(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  const auto piv = rref(F, aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return {};
  FMatrix out(n, FVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  return out;
}

inline FVector mat_vec(const Subfield& F, const FMatrix& m, const FVector& x) {
  FVector out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(F, m[i], x);
  return out;
}

inline FMatrix mat_mul(const Subfield& F, const FMatrix& a, const FMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  FMatrix out(n, FVector(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] = F.add(out[i][j], F.mul(a[i][l], b[l][j]));
    }
  return out;
}

inline FMatrix identity_matrix(std::size_t n) {
  FMatrix m(n, FVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

}  // namespace clq

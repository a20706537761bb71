#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sosgibbs::detail {

// Solves a x = b in place (b becomes x). a is row-major n x n.
// Gaussian elimination with partial pivoting; throws on an exactly singular pivot.
inline void solve_linear(std::vector<double>& a, std::vector<double>& b, int n) {
  auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r * n + c)]; };
  auto bv = [&](int r) -> double& { return b[static_cast<std::size_t>(r)]; };
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(at(r, c)) > std::abs(at(piv, c))) piv = r;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(at(c, j), at(piv, j));
      std::swap(bv(c), bv(piv));
    }
    const double d = at(c, c);
    if (d == 0.0) throw std::runtime_error("singular Newton system");
    for (int r = c + 1; r < n; ++r) {
      const double f = at(r, c) / d;
      if (f == 0.0) continue;
      for (int j = c; j < n; ++j) at(r, j) -= f * at(c, j);
      bv(r) -= f * bv(c);
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = bv(r);
    for (int j = r + 1; j < n; ++j) s -= at(r, j) * bv(j);
    bv(r) = s / at(r, r);
  }
}

}  // namespace sosgibbs::detail

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sosgibbs/boundary_law.hpp"
#include "sosgibbs/model.hpp"
#include "sosgibbs/tree_group.hpp"

// Data-parallel inner loops. Every kernel has an OpenMP version (namespace
// omp) used by the solvers and a plain loop (namespace serial) kept as the
// reference; both return bitwise-identical results in the same order.
namespace sosgibbs::kernels {

// Log-spaced grid in log coordinates: h values for z in [z_min, z_max].
std::vector<double> log_grid(double z_min, double z_max, int points);

struct GridCell {
  int i;
  int j;
  double h0;  // cell centre
  double h1;
};

// Cells of the grid x grid lattice over (h0, h1) on which both components of
// h - k F(h) change sign (or vanish) among the four corners, in row-major order.
struct TiGridScan {
  std::vector<GridCell> cells;
};

// Spin configurations of V_n are coded in base m+1 with vertex 0 (the root)
// as the least significant digit, following the ball's breadth-first order.
struct Enumeration {
  int depth;
  int m;
  int vertices;
  std::int64_t configs;
};

Enumeration describe_enumeration(const Ball& ball, int depth, int m);

// Result of iterating z <- kF(t), t <- kF(z) from one start.
struct AlternatingLimit {
  ReducedLaw z;
  ReducedLaw t;
  int iterations = 0;
  bool converged = false;
};

namespace serial {
TiGridScan ti_grid_scan(const ModelParams& params, std::span<const double> axis);
// log of exp(-beta H(sigma)) * prod_{x in W_n} exp(h_{sigma(x), x}) for each code.
std::vector<double> log_weights(const BoundaryLawField& field, int depth, const ModelParams& params);
std::vector<AlternatingLimit> alternating_iterate(const ModelParams& params,
                                                  std::span<const ReducedLaw> starts, int max_iter,
                                                  double tol);
}  // namespace serial

namespace omp {
TiGridScan ti_grid_scan(const ModelParams& params, std::span<const double> axis);
std::vector<double> log_weights(const BoundaryLawField& field, int depth, const ModelParams& params);
std::vector<AlternatingLimit> alternating_iterate(const ModelParams& params,
                                                  std::span<const ReducedLaw> starts, int max_iter,
                                                  double tol);
}  // namespace omp

}  // namespace sosgibbs::kernels

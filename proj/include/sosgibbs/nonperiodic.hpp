#pragma once

#include <array>
#include <memory>
#include <vector>

#include "sosgibbs/boundary_law.hpp"
#include "sosgibbs/model.hpp"
#include "sosgibbs/tree_group.hpp"

namespace sosgibbs {

// Successor-choice digits of the path encoded by t in [0, (k+1)/k]:
// u = t k / (k+1); the first digit is floor(u (k+1)) clipped to {0..k}, the
// fractional remainder is expanded in base k with digits clipped to {0..k-1}.
// Throws std::out_of_range when t is outside the range.
std::vector<int> param_to_digits(double t, int k, int depth);
std::vector<Word> param_to_path(double t, int k, int depth);

// Component (1, 2 or 3) of every vertex of the ball, split by two digit paths
// with path1 <= path2 lexicographically. A vertex whose digit string d is
// compared with the equal-length prefixes p1, p2: d < p1 or d == p1 != p2 gives
// 1, d > p2 or d == p2 != p1 gives 3, strictly between gives 2. A vertex on
// both paths goes to 1 when the common path is the rightmost one so far
// (every digit of the first max(|d|, 1) maximal), otherwise to 3.
std::vector<int> split_components(const Ball& ball, const std::vector<int>& path1, const std::vector<int>& path2);

struct NonTiField {
  double t = 0.0;
  double s = 0.0;
  BoundaryLawField field;
  std::vector<int> component;
  // z_-, z_m, z_+ of the three symmetric TI solutions.
  std::array<double, 3> labels{};
};

// Laws on W_depth are h*_-, h*_m, h*_+ on components 1, 2, 3; interior laws
// come from the backward recursion and the root law from all k+1 successors.
// Requires m = 2, t <= s and three symmetric TI solutions.
NonTiField build_field(double t, double s, const ModelParams& params, int depth);

struct RootConvergence {
  std::vector<int> depths;
  std::vector<ReducedLaw> roots;
  std::vector<double> differences;  // |root(d_{i+1}) - root(d_i)|_inf
  std::vector<double> rates;        // differences[i+1] / differences[i]
  bool decreasing = true;           // differences non-increasing, strictly where positive
  double rate_bound = 0.0;          // k times the slice Lipschitz constant of F
};

RootConvergence root_convergence(double t, double s, const ModelParams& params, const std::vector<int>& depths);

struct DistinctnessReport {
  int depth = 0;
  std::vector<std::vector<double>> distance;  // max-norm distance over the ball
  std::vector<std::vector<bool>> diverge;     // paths differ within the ball
  bool ok = true;                             // positive distance wherever paths diverge
};

DistinctnessReport distinctness_check(const std::vector<std::array<double, 2>>& pairs, const ModelParams& params,
                                      int depth);

}  // namespace sosgibbs

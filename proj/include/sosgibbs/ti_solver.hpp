#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sosgibbs/boundary_law.hpp"
#include "sosgibbs/model.hpp"

namespace sosgibbs {

// a = 2 theta^{k+1}, b = (1 + theta^2) / (2 theta^2), x = z1 / (2 theta).
// Under this change of variables z1 = psi(z1) becomes a x = ((1+x)/(b+x))^k.
struct AbcForm {
  double a;
  double b;
  double theta;

  static AbcForm from_theta(double theta, int k);
  double x_from_z(double z1) const { return z1 / (2.0 * theta); }
  double z_from_x(double x) const { return 2.0 * theta * x; }
};

// Critical points of q(x) = (1/x)((1+x)/(b+x))^k: the roots x1 <= x2 of
// x^2 + [2 - (b-1)(k-1)] x + b = 0 and the values nu_i = q(x_i).
struct Classification35 {
  double x1;
  double x2;
  double nu1;
  double nu2;
};

struct Eq35Result {
  int root_count;
  std::optional<Classification35> critical;
};

// Number of positive roots of a x = ((1+x)/(b+x))^k.
Eq35Result classify_eq35(double a, double b, int k);

// First inverse temperature at which three symmetric TI solutions exist (J < 0, k >= 2).
double critical_beta1(double J, int k);

enum class TiClass { Unique, BoundaryTwo, Three };
const char* to_string(TiClass c);

struct TiSolutionSet {
  // Positive roots z1 of z = ((2 theta + z)/(theta^2 + theta z + 1))^k, ascending.
  std::vector<double> symmetric_roots;
  // (z0, z1) solutions of the full TI system; contains (1, z) for each symmetric root.
  std::vector<std::array<double, 2>> full_solutions;
  TiClass classification = TiClass::Unique;
  // (z_-, z_m, z_+) when classification is Three.
  std::optional<std::array<double, 3>> labels;
};

// Symmetric branch z0 = 1 with guaranteed isolation: every root is bracketed
// on a piece where the residual is monotone, then bisected and Newton-polished.
// Requires m = 2.
TiSolutionSet solve_symmetric_ti(const ModelParams& params);

struct FullTiOptions {
  double z_min = 1e-6;
  double z_max = 1e6;
  int grid = 200;
};

// Exploratory search of the 2D TI system in log coordinates: grid scan for
// cells where both residual components change sign, damped Newton from each,
// deduplication at 1e-8. Always includes the z0 = 1 branch.
std::vector<std::array<double, 2>> solve_full_ti(const ModelParams& params, const FullTiOptions& options = {});

// solve_symmetric_ti with full_solutions filled by solve_full_ti.
TiSolutionSet solve_ti(const ModelParams& params, const FullTiOptions& options = {});

// Residual of h = k F(h) in max norm, in log coordinates.
double ti_residual(const ReducedLaw& h, const ModelParams& params);

struct IterationReport {
  ReducedLaw limit;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  // h_0 = 0 and h_i = h_{m-i}: unreduced weights invariant under j -> m-j.
  bool symmetric = false;
};

// Damped iteration h <- (h + k F(h)) / 2 for general m.
IterationReport general_m_iterate(const ModelParams& params, const ReducedLaw& init, int max_iter, double tol);

// Count of symmetric roots as a function of beta, bisected to `tol`.
// Requires count(lo) == 1 and count(hi) == 3.
double locate_count_transition(const ModelParams& params, double beta_lo, double beta_hi, double tol);

}  // namespace sosgibbs

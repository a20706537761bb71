#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sosgibbs/boundary_law.hpp"
#include "sosgibbs/model.hpp"
#include "sosgibbs/tree_group.hpp"

namespace sosgibbs {

// psi(x) = ((2 theta + x) / (1 + theta^2 + theta x))^k, x >= 0.
double psi(double x, double theta, int k);
// d ln psi / d ln x at x.
double psi_log_slope(double x, double theta, int k);

struct Condition414 {
  double z_star = 1.0;  // the unique symmetric TI root
  double value = 0.0;   // k z (theta^2-1) / ((2 theta + z)(1 + theta^2 + theta z)) = |psi'(z)|
  bool holds = false;   // value > 1
};

// AFM only (theta > 1), m = 2; throws std::invalid_argument otherwise.
Condition414 condition_414(const ModelParams& params);

enum class Period2Type { Fixed, Cycle };
const char* to_string(Period2Type t);

struct Period2Solution {
  double z = 1.0;  // z1 on even-length vertices
  double t = 1.0;  // z1 on odd-length vertices
  Period2Type type = Period2Type::Fixed;
  // ((z0, z1), (t0, t1)) for solutions of the four-equation system.
  std::optional<std::array<std::array<double, 2>, 2>> full;
  double residual = 0.0;
};

// Fixed points of psi o psi on the invariant interval of psi, paired as
// (z, psi(z)). Sorted by z. Requires m = 2.
std::vector<Period2Solution> solve_period2_symmetric(const ModelParams& params);

struct PsiSquaredOrbit {
  double limit = 1.0;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
};

// Iterates z <- psi(psi(z)) from z0 and records whether the orbit is monotone.
PsiSquaredOrbit iterate_psi_squared(const ModelParams& params, double z0, int max_iter = 100000,
                                    double tol = 1e-15);

struct Period2Search {
  int starts = 100;
  std::uint64_t seed = 7;
  double spread = 10.0;  // starts uniform in [-spread, spread]^2 (log coordinates)
  bool slice_only = false;  // starts with h0 = 0, which the map preserves
  int max_iter = 200000;
  double tol = 1e-13;
};

struct Period2Limit {
  ReducedLaw z;  // log coordinates
  ReducedLaw t;
  bool converged = false;
  int iterations = 0;
};

// Raw alternating-map limits z <- kF(t), t <- kF(z) from the seeded starts.
std::vector<Period2Limit> period2_limits(const ModelParams& params, const Period2Search& search);

// Four-equation system: converged alternating limits plus the TI solutions,
// Newton-polished and deduplicated. Requires m = 2.
std::vector<Period2Solution> solve_period2_full(const ModelParams& params, const Period2Search& search = {});

struct PeriodicReport {
  std::vector<int> parity_set;
  bool i_nonempty = true;
  std::string statement;
  std::vector<Period2Solution> solutions;
  std::optional<Condition414> condition;
};

// K-periodic solutions for a parity subgroup. If I(K) is nonempty they are
// the TI solutions; for the even-length subgroup the two-cycles of psi are
// added in the AFM regime (on the z0 = t0 = 1 slice).
PeriodicReport classify_periodic(const SubgroupSpec& spec, const ModelParams& params);

struct ParityIteration {
  std::array<ReducedLaw, 2> limit;  // laws on coset 0 and coset 1
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // max over all vertex types of the recursion residual
  bool translation_invariant = false;
};

// Iterates the recursion restricted to fields constant on the two cosets of H_A.
// For a vertex of coset c whose parent lies in coset p the successors split
// into `same` vertices of coset c and `other` of coset 1-c; the update of h_c
// averages the realized parent types and is relaxed by 1/2. For the
// even-length subgroup every vertex type is the same and the sweep is an
// undamped Gauss-Seidel pass.
ParityIteration iterate_periodic_system(const SubgroupSpec& spec, const ModelParams& params,
                                        std::array<ReducedLaw, 2> init, int max_iter = 100000,
                                        double tol = 1e-13);

// Residual of the recursion for a field constant on the cosets of H_A.
double periodic_residual(const SubgroupSpec& spec, const ModelParams& params, const std::array<ReducedLaw, 2>& h);

// Field on the ball with h_x = laws[coset(x)]; root left unset.
BoundaryLawField expand_periodic(std::shared_ptr<const Ball> ball, const SubgroupSpec& spec,
                                 const std::array<ReducedLaw, 2>& laws);

}  // namespace sosgibbs

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sosgibbs/boundary_law.hpp"
#include "sosgibbs/model.hpp"
#include "sosgibbs/tree_group.hpp"

namespace sosgibbs {

// Exact-mode cap on (m+1)^{|V_n|}.
inline constexpr std::int64_t kExactCap = 1'000'000;

enum class PartitionMode { Exact, Transfer };

// log sum_sigma exp(-beta H(sigma) + sum_{x in W_n} h_{sigma(x),x}) with h in
// the unreduced gauge; at n = 0 the root law is the field (zero when absent).
// Exact mode enumerates and throws std::length_error above kExactCap.
double log_partition(const BoundaryLawField& field, int depth, const ModelParams& params,
                     PartitionMode mode = PartitionMode::Exact);

// mu^(n) materialized over all configurations of V_n (codes as in kernels.hpp).
struct FiniteVolumeMeasure {
  int depth = 0;
  int m = 0;
  int vertices = 0;
  double log_z = 0.0;
  std::vector<double> table;

  double probability(std::int64_t code) const { return table[static_cast<std::size_t>(code)]; }
  std::vector<int> decode(std::int64_t code) const;
};

FiniteVolumeMeasure materialize(const BoundaryLawField& field, int depth, const ModelParams& params);

// max over sigma_{n-1} of |sum_omega mu^(n)(sigma_{n-1} v omega) - mu^(n-1)(sigma_{n-1})|.
double compatibility_oracle(const BoundaryLawField& field, int depth, const ModelParams& params);

struct DlrReport {
  // Total variation between mu^(n) and the mixture sum_omega mu^(n+1)(omega) nu_omega,
  // where nu_omega is the Gibbs specification on V_n with boundary omega on W_{n+1}.
  double integrated = 0.0;
  // Max over omega of the total variation between mu^(n+1)(. | omega) and nu_omega.
  double conditional = 0.0;
  double max() const { return integrated > conditional ? integrated : conditional; }
};

DlrReport dlr_oracle(const BoundaryLawField& field, int depth, const ModelParams& params);

// Exact joint marginal of the listed vertices; the first vertex is the least
// significant digit of the returned table index.
std::vector<double> marginal(const FiniteVolumeMeasure& measure, const std::vector<int>& vertices);

// Child kernels P_y(i -> j) proportional to theta^|i-j| e^{h_{j,y}} for every
// non-root vertex y of the ball and the root distribution, the exact root
// marginal of mu^(1).
class TransitionKernel {
 public:
  TransitionKernel(const BoundaryLawField& field, const ModelParams& params);

  int m() const { return m_; }
  const Ball& ball() const { return *ball_; }
  const std::vector<double>& root_distribution() const { return root_; }
  // Row i of the kernel at vertex y.
  std::vector<double> row(int y, int i) const;
  double probability(int y, int i, int j) const;

  // Marginal of a single vertex and of the edge (parent(y), y), propagated
  // from the root; the edge table is indexed parent + (m+1) child.
  std::vector<double> site_marginal(int vertex) const;
  std::vector<double> edge_marginal(int y) const;

 private:
  std::shared_ptr<const Ball> ball_;
  int m_;
  std::vector<double> root_;
  std::vector<double> kernel_;  // [y][i][j]
};

// Uniform draws in [0, 1); the default source is SplitMix64.
using UniformSource = std::function<double()>;

// One configuration of V_depth in breadth-first order by inverse-CDF draws,
// root first, then each vertex from its parent's spin.
SpinConfig draw(const TransitionKernel& kernel, int depth, const UniformSource& uniform);

// `count` samples; sample s uses the stream stream_seed(seed, s).
std::vector<SpinConfig> sample(const BoundaryLawField& field, const ModelParams& params, int depth,
                               std::uint64_t seed, int count);

// Total variation between mu^(n) and its image under j -> m-j.
double flip_distance(const BoundaryLawField& field, int depth, const ModelParams& params);
bool symmetry_check(const BoundaryLawField& field, int depth, const ModelParams& params);

// Field with every law (and the root law) flipped j -> m-j.
BoundaryLawField flipped_field(const BoundaryLawField& field);

}  // namespace sosgibbs

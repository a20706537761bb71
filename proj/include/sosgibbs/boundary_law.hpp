#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sosgibbs/model.hpp"
#include "sosgibbs/tree_group.hpp"

namespace sosgibbs {

// Boundary law in reduced coordinates: h_i - h_m for i = 0..m-1, h_m = 0.
class ReducedLaw {
 public:
  ReducedLaw() = default;
  explicit ReducedLaw(int m) : h_(static_cast<std::size_t>(m), 0.0) {}
  ReducedLaw(std::initializer_list<double> values) : h_(values) {}
  explicit ReducedLaw(std::vector<double> values) : h_(std::move(values)) {}

  int m() const { return static_cast<int>(h_.size()); }
  double operator[](int i) const { return h_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return h_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return h_; }

  // Weight of spin j in the unreduced gauge, i.e. h_j with h_m = 0.
  double unreduced(int j) const { return j == m() ? 0.0 : h_[static_cast<std::size_t>(j)]; }

  ReducedLaw& operator+=(const ReducedLaw& other);
  ReducedLaw& operator*=(double s);
  friend ReducedLaw operator+(ReducedLaw a, const ReducedLaw& b) { return a += b; }
  friend ReducedLaw operator*(double s, ReducedLaw a) { return a *= s; }
  friend bool operator==(const ReducedLaw&, const ReducedLaw&) = default;

 private:
  std::vector<double> h_;
};

double max_abs_diff(const ReducedLaw& a, const ReducedLaw& b);

// The spin-flip j -> m-j written back in reduced coordinates.
ReducedLaw flipped(const ReducedLaw& h);

// Component i: ln[(sum_{j<m} theta^|i-j| e^{h_j} + theta^{m-i}) /
//                 (sum_{j<m} theta^{m-j} e^{h_j} + 1)].
// Terms are summed in sorted order, so equal multisets of terms give
// bitwise-equal sums; on the symmetric slice F_0 is exactly 0.
ReducedLaw F_map(const ReducedLaw& h, int m, double theta);

// Row-major m x m Jacobian dF_i/dh_j.
std::vector<double> F_jacobian(const ReducedLaw& h, int m, double theta);

// A ReducedLaw on every non-root vertex of a ball, plus an optional root law.
class BoundaryLawField {
 public:
  BoundaryLawField(std::shared_ptr<const Ball> ball, int m);

  static BoundaryLawField constant(std::shared_ptr<const Ball> ball, const ReducedLaw& h);

  const Ball& ball() const { return *ball_; }
  std::shared_ptr<const Ball> ball_ptr() const { return ball_; }
  int depth() const { return ball_->depth(); }
  int m() const { return m_; }

  const ReducedLaw& law(int index) const { return laws_[static_cast<std::size_t>(index)]; }
  const ReducedLaw& law(const Word& x) const;
  void set(int index, ReducedLaw h);

  bool has_root() const { return has_root_; }
  const ReducedLaw& root() const { return laws_.front(); }
  void set_root(ReducedLaw h);
  void clear_root();
  // Root law as the sum of F over all k+1 successors of the origin.
  void set_root_from_successors(double theta);

  // Same laws on the ball of a smaller depth.
  BoundaryLawField truncated(int depth) const;

 private:
  std::shared_ptr<const Ball> ball_;
  int m_;
  std::vector<ReducedLaw> laws_;
  bool has_root_ = false;
};

// sum over y in S(x) of F(h_y).
ReducedLaw successor_image(const BoundaryLawField& field, int index, double theta);

// max over non-root x in V_{n-1} of |h_x - sum_{y in S(x)} F(h_y)|_inf.
// The root is included when the field carries a root law.
double compatibility_residual(const BoundaryLawField& field, double theta);

enum class InjectivityVerdict { Consistent, Counterexample, ExcludedTheta };

// For m = 2: whether |F(h)-F(l)| <= 1e-10 implies |h-l| <= 1e-6.
InjectivityVerdict check_injectivity(const ReducedLaw& h, const ReducedLaw& l, double theta);

// Lipschitz and derivative bounds of F for m = 2.
struct DerivativeBounds {
  double partial;      // (a) |dF_i/dh_j|
  double lipschitz;    // (b) 2 * (a)
  double slice;        // (c) on h = (0, h1)
  double first_comp;   // (d) |F_0(h)| / |h_0|
};

DerivativeBounds derivative_bounds(double theta);

struct DerivativeBoundReport {
  double theta = 1.0;
  DerivativeBounds bounds{};
  int samples = 0;
  std::array<int, 4> violations{};
  // Largest observed value of each checked quantity divided by its bound
  // constant (0 when the constant is 0).
  std::array<double, 4> worst_ratio{};
  std::vector<std::string> violating_samples;

  bool ok() const { return violations == std::array<int, 4>{}; }
};

inline constexpr double kDerivativeStep = 1e-5;
inline constexpr double kDerivativeTolerance = 1e-6;

DerivativeBoundReport derivative_bound_check(double theta, int sample_count,
                                             std::uint64_t seed = 20240531);

}  // namespace sosgibbs

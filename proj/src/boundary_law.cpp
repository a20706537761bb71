#include "sosgibbs/boundary_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sosgibbs/random.hpp"

namespace sosgibbs {

namespace {

// log(sum exp(t)) with the terms sorted first, so the result depends only on
// the multiset of terms.
double log_sum_exp_sorted(double* first, double* last) {
  std::sort(first, last);
  const double top = *(last - 1);
  if (std::isinf(top)) return top;
  double sum = 0.0;
  for (double* t = first; t != last; ++t) sum += std::exp(*t - top);
  return top + std::log(sum);
}

constexpr int kInlineSpins = 16;

// Fills terms[j] = |a-j| * log_theta + h_j for j = 0..m, h_m = 0.
void weight_terms(const ReducedLaw& h, int m, int a, double log_theta, double* terms) {
  for (int j = 0; j <= m; ++j) terms[j] = std::abs(a - j) * log_theta + h.unreduced(j);
}

}  // namespace

ReducedLaw& ReducedLaw::operator+=(const ReducedLaw& other) {
  if (other.h_.size() != h_.size()) throw std::invalid_argument("ReducedLaw size mismatch");
  for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += other.h_[i];
  return *this;
}

ReducedLaw& ReducedLaw::operator*=(double s) {
  for (double& v : h_) v *= s;
  return *this;
}

double max_abs_diff(const ReducedLaw& a, const ReducedLaw& b) {
  if (a.m() != b.m()) throw std::invalid_argument("ReducedLaw size mismatch");
  double d = 0.0;
  for (int i = 0; i < a.m(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

ReducedLaw flipped(const ReducedLaw& h) {
  const int m = h.m();
  ReducedLaw out(m);
  // Unreduced flip g_j = h_{m-j}, then subtract g_m = h_0.
  for (int j = 0; j < m; ++j) out[j] = h.unreduced(m - j) - h.unreduced(0);
  return out;
}

ReducedLaw F_map(const ReducedLaw& h, int m, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("F_map requires theta > 0");
  if (h.m() != m) throw std::invalid_argument("F_map: law has wrong length");
  const double lt = std::log(theta);
  std::vector<double> heap;
  double stack[kInlineSpins];
  double* terms = stack;
  if (m + 1 > kInlineSpins) {
    heap.resize(static_cast<std::size_t>(m + 1));
    terms = heap.data();
  }
  weight_terms(h, m, m, lt, terms);
  const double den = log_sum_exp_sorted(terms, terms + m + 1);
  ReducedLaw out(m);
  for (int i = 0; i < m; ++i) {
    weight_terms(h, m, i, lt, terms);
    out[i] = log_sum_exp_sorted(terms, terms + m + 1) - den;
  }
  return out;
}

std::vector<double> F_jacobian(const ReducedLaw& h, int m, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("F_jacobian requires theta > 0");
  const double lt = std::log(theta);
  std::vector<double> terms(static_cast<std::size_t>(m + 1));
  std::vector<double> sorted(terms.size());
  auto normaliser = [&](int a) {
    weight_terms(h, m, a, lt, terms.data());
    sorted = terms;
    return log_sum_exp_sorted(sorted.data(), sorted.data() + m + 1);
  };
  std::vector<double> den_weight(static_cast<std::size_t>(m));
  const double den = normaliser(m);
  for (int l = 0; l < m; ++l) den_weight[static_cast<std::size_t>(l)] = std::exp(terms[static_cast<std::size_t>(l)] - den);
  std::vector<double> jac(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i) {
    const double num = normaliser(i);
    for (int l = 0; l < m; ++l)
      jac[static_cast<std::size_t>(i * m + l)] =
          std::exp(terms[static_cast<std::size_t>(l)] - num) - den_weight[static_cast<std::size_t>(l)];
  }
  return jac;
}

BoundaryLawField::BoundaryLawField(std::shared_ptr<const Ball> ball, int m)
    : ball_(std::move(ball)), m_(m), laws_(static_cast<std::size_t>(ball_->size()), ReducedLaw(m)) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
}

BoundaryLawField BoundaryLawField::constant(std::shared_ptr<const Ball> ball, const ReducedLaw& h) {
  BoundaryLawField field(std::move(ball), h.m());
  for (int v = 1; v < field.ball().size(); ++v) field.laws_[static_cast<std::size_t>(v)] = h;
  return field;
}

const ReducedLaw& BoundaryLawField::law(const Word& x) const {
  const int index = ball_->index_of(x);
  if (index < 0) throw std::out_of_range("vertex " + x.to_string() + " not in the ball");
  if (index == 0 && !has_root_) throw std::out_of_range("field carries no root law");
  return laws_[static_cast<std::size_t>(index)];
}

void BoundaryLawField::set(int index, ReducedLaw h) {
  if (h.m() != m_) throw std::invalid_argument("law has wrong length");
  if (index == 0) has_root_ = true;
  laws_[static_cast<std::size_t>(index)] = std::move(h);
}

void BoundaryLawField::set_root(ReducedLaw h) { set(0, std::move(h)); }

void BoundaryLawField::clear_root() {
  has_root_ = false;
  laws_.front() = ReducedLaw(m_);
}

void BoundaryLawField::set_root_from_successors(double theta) {
  if (ball_->depth() < 1) throw std::logic_error("root law needs the sphere W_1");
  set_root(successor_image(*this, 0, theta));
}

BoundaryLawField BoundaryLawField::truncated(int depth) const {
  if (depth > ball_->depth()) throw std::invalid_argument("cannot truncate to a deeper ball");
  BoundaryLawField out(std::make_shared<const Ball>(ball_->k(), depth), m_);
  for (int v = 0; v < out.ball().size(); ++v) out.laws_[static_cast<std::size_t>(v)] = laws_[static_cast<std::size_t>(v)];
  out.has_root_ = has_root_;
  return out;
}

ReducedLaw successor_image(const BoundaryLawField& field, int index, double theta) {
  const Ball& ball = field.ball();
  if (ball.child_count(index) == 0) throw std::out_of_range("vertex has no successors inside the ball");
  ReducedLaw sum(field.m());
  const int begin = ball.child_begin(index);
  for (int y = begin; y < begin + ball.child_count(index); ++y) sum += F_map(field.law(y), field.m(), theta);
  return sum;
}

double compatibility_residual(const BoundaryLawField& field, double theta) {
  const Ball& ball = field.ball();
  if (ball.depth() < 1) return 0.0;
  const int first = field.has_root() ? 0 : 1;
  const int end = ball.level_end(ball.depth() - 1);
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (int x = first; x < end; ++x) {
    worst = std::max(worst, max_abs_diff(field.law(x), successor_image(field, x, theta)));
  }
  return worst;
}

InjectivityVerdict check_injectivity(const ReducedLaw& h, const ReducedLaw& l, double theta) {
  if (h.m() != 2 || l.m() != 2) throw std::invalid_argument("check_injectivity is stated for m = 2");
  if (theta == 1.0) return InjectivityVerdict::ExcludedTheta;
  const double image_gap = max_abs_diff(F_map(h, 2, theta), F_map(l, 2, theta));
  if (image_gap <= 1e-10 && max_abs_diff(h, l) > 1e-6) return InjectivityVerdict::Counterexample;
  return InjectivityVerdict::Consistent;
}

DerivativeBounds derivative_bounds(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  const double t2 = theta * theta;
  const double gap = std::abs(t2 - 1.0);
  DerivativeBounds b{};
  b.partial = gap / t2;
  b.lipschitz = 2.0 * b.partial;
  b.slice = gap / (1.0 + 3.0 * t2 + 2.0 * theta * std::sqrt(2.0 * (t2 + 1.0)));
  b.first_comp = gap / (t2 + 1.0);
  return b;
}

DerivativeBoundReport derivative_bound_check(double theta, int sample_count, std::uint64_t seed) {
  DerivativeBoundReport report;
  report.theta = theta;
  report.bounds = derivative_bounds(theta);
  report.samples = sample_count;
  const auto& b = report.bounds;
  const std::array<double, 4> constants{b.partial, b.lipschitz, b.slice, b.first_comp};

  SplitMix64 rng(seed);
  auto draw = [&] { return -10.0 + 20.0 * rng.uniform(); };
  auto record = [&](int which, double ratio, const std::string& what) {
    const std::size_t w = static_cast<std::size_t>(which);
    if (constants[w] > 0.0) report.worst_ratio[w] = std::max(report.worst_ratio[w], ratio / constants[w]);
    if (ratio > constants[w] + kDerivativeTolerance) {
      ++report.violations[w];
      if (report.violating_samples.size() < 32) report.violating_samples.push_back(what);
    }
  };
  char buf[160];

  for (int s = 0; s < sample_count; ++s) {
    const ReducedLaw h{draw(), draw()};
    const ReducedLaw l{draw(), draw()};

    for (int j = 0; j < 2; ++j) {
      ReducedLaw up = h, down = h;
      up[j] += kDerivativeStep;
      down[j] -= kDerivativeStep;
      const ReducedLaw fu = F_map(up, 2, theta);
      const ReducedLaw fd = F_map(down, 2, theta);
      for (int i = 0; i < 2; ++i) {
        const double partial = std::abs(fu[i] - fd[i]) / (2.0 * kDerivativeStep);
        std::snprintf(buf, sizeof buf, "(a) dF%d/dh%d=%.17g at h=(%.17g,%.17g)", i, j, partial, h[0], h[1]);
        record(0, partial, buf);
      }
    }

    const double dist = max_abs_diff(h, l);
    if (dist > 0.0) {
      const double ratio = max_abs_diff(F_map(h, 2, theta), F_map(l, 2, theta)) / dist;
      std::snprintf(buf, sizeof buf, "(b) ratio=%.17g h=(%.17g,%.17g) l=(%.17g,%.17g)", ratio, h[0], h[1], l[0], l[1]);
      record(1, ratio, buf);
    }

    const ReducedLaw hs{0.0, h[1]};
    const ReducedLaw ls{0.0, l[1]};
    const double slice_dist = max_abs_diff(hs, ls);
    if (slice_dist > 0.0) {
      const double ratio = max_abs_diff(F_map(hs, 2, theta), F_map(ls, 2, theta)) / slice_dist;
      std::snprintf(buf, sizeof buf, "(c) ratio=%.17g h1=%.17g l1=%.17g", ratio, h[1], l[1]);
      record(2, ratio, buf);
    }

    if (h[0] != 0.0) {
      const double ratio = std::abs(F_map(h, 2, theta)[0]) / std::abs(h[0]);
      std::snprintf(buf, sizeof buf, "(d) ratio=%.17g h=(%.17g,%.17g)", ratio, h[0], h[1]);
      record(3, ratio, buf);
    }
  }
  return report;
}

}  // namespace sosgibbs

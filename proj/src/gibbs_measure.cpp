#include "sosgibbs/gibbs_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sosgibbs/kernels.hpp"
#include "sosgibbs/random.hpp"

namespace sosgibbs {

namespace {

double log_sum_exp(const std::vector<double>& w) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : w) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double x : w) s += std::exp(x - hi);
  return hi + std::log(s);
}

std::int64_t power(int base, int exponent) {
  std::int64_t p = 1;
  for (int i = 0; i < exponent; ++i) p *= base;
  return p;
}

// Exact-mode guard shared by the oracles.
kernels::Enumeration checked_enumeration(const BoundaryLawField& field, int depth) {
  const kernels::Enumeration e = kernels::describe_enumeration(field.ball(), depth, field.m());
  if (e.configs > kExactCap)
    throw std::length_error("(m+1)^|V_n| = " + std::to_string(e.configs) + " exceeds the exact-mode cap");
  return e;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

std::vector<double> normalized_exp(std::vector<double> logw) {
  const double lz = log_sum_exp(logw);
  for (double& x : logw) x = std::exp(x - lz);
  return logw;
}

int inverse_cdf(const std::vector<double>& p, std::size_t offset, int size, double u) {
  double cdf = 0.0;
  for (int j = 0; j < size; ++j) {
    cdf += p[offset + static_cast<std::size_t>(j)];
    if (u < cdf) return j;
  }
  return size - 1;
}

}  // namespace

double log_partition(const BoundaryLawField& field, int depth, const ModelParams& params, PartitionMode mode) {
  if (depth < 0 || depth > field.depth()) throw std::invalid_argument("depth outside the field's ball");
  if (field.m() != params.m()) throw std::invalid_argument("field and model disagree on m");
  if (mode == PartitionMode::Exact) {
    checked_enumeration(field, depth);
    return log_sum_exp(kernels::omp::log_weights(field, depth, params));
  }
  const Ball& ball = field.ball();
  const int q = params.m() + 1;
  const double lt = params.log_theta();
  std::vector<std::vector<double>> msg(static_cast<std::size_t>(ball.level_end(depth)), std::vector<double>(q, 0.0));
  for (int v = ball.level_begin(depth); v < ball.level_end(depth); ++v) {
    if (v == 0 && !field.has_root()) continue;
    for (int s = 0; s < q; ++s) msg[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] = field.law(v).unreduced(s);
  }
  std::vector<double> terms(static_cast<std::size_t>(q));
  for (int level = depth - 1; level >= 0; --level) {
    for (int v = ball.level_begin(level); v < ball.level_end(level); ++v) {
      auto& out = msg[static_cast<std::size_t>(v)];
      for (int c = ball.child_begin(v); c < ball.child_begin(v) + ball.child_count(v); ++c) {
        const auto& in = msg[static_cast<std::size_t>(c)];
        for (int s = 0; s < q; ++s) {
          for (int j = 0; j < q; ++j) terms[static_cast<std::size_t>(j)] = lt * std::abs(s - j) + in[static_cast<std::size_t>(j)];
          out[static_cast<std::size_t>(s)] += log_sum_exp(terms);
        }
      }
    }
  }
  return log_sum_exp(msg.front());
}

std::vector<int> FiniteVolumeMeasure::decode(std::int64_t code) const {
  std::vector<int> spins(static_cast<std::size_t>(vertices));
  for (int v = 0; v < vertices; ++v) {
    spins[static_cast<std::size_t>(v)] = static_cast<int>(code % (m + 1));
    code /= m + 1;
  }
  return spins;
}

FiniteVolumeMeasure materialize(const BoundaryLawField& field, int depth, const ModelParams& params) {
  if (depth < 0 || depth > field.depth()) throw std::invalid_argument("depth outside the field's ball");
  if (field.m() != params.m()) throw std::invalid_argument("field and model disagree on m");
  const kernels::Enumeration e = checked_enumeration(field, depth);
  FiniteVolumeMeasure mu;
  mu.depth = depth;
  mu.m = field.m();
  mu.vertices = e.vertices;
  std::vector<double> w = kernels::omp::log_weights(field, depth, params);
  mu.log_z = log_sum_exp(w);
  for (double& x : w) x = std::exp(x - mu.log_z);
  mu.table = std::move(w);
  return mu;
}

double compatibility_oracle(const BoundaryLawField& field, int depth, const ModelParams& params) {
  if (depth < 1) throw std::invalid_argument("compatibility_oracle requires depth >= 1");
  const FiniteVolumeMeasure outer = materialize(field, depth, params);
  const FiniteVolumeMeasure inner = materialize(field, depth - 1, params);
  const auto inner_size = static_cast<std::int64_t>(inner.table.size());
  std::vector<double> summed(inner.table.size(), 0.0);
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(outer.table.size()); ++c)
    summed[static_cast<std::size_t>(c % inner_size)] += outer.probability(c);
  double worst = 0.0;
  for (std::size_t i = 0; i < summed.size(); ++i) worst = std::max(worst, std::abs(summed[i] - inner.table[i]));
  return worst;
}

DlrReport dlr_oracle(const BoundaryLawField& field, int depth, const ModelParams& params) {
  if (depth < 0 || depth + 1 > field.depth()) throw std::invalid_argument("dlr_oracle needs the ball V_{n+1}");
  const Ball& ball = field.ball();
  const FiniteVolumeMeasure outer = materialize(field, depth + 1, params);
  const FiniteVolumeMeasure inner = materialize(field, depth, params);
  const int q = params.m() + 1;
  const std::int64_t inner_size = static_cast<std::int64_t>(inner.table.size());
  const int boundary_vertices = ball.level_end(depth + 1) - ball.level_begin(depth + 1);
  const std::int64_t omegas = power(q, boundary_vertices);
  const double beta = params.beta();

  // -beta H(sigma_n) for every inner configuration.
  std::vector<double> inner_energy(static_cast<std::size_t>(inner_size));
  std::vector<SpinConfig> inner_configs(static_cast<std::size_t>(inner_size));
  for (std::int64_t c = 0; c < inner_size; ++c) {
    inner_configs[static_cast<std::size_t>(c)] = SpinConfig{depth, inner.decode(c)};
    inner_energy[static_cast<std::size_t>(c)] = -beta * hamiltonian(inner_configs[static_cast<std::size_t>(c)], ball, params);
  }

  DlrReport report;
  std::vector<double> mixture(static_cast<std::size_t>(inner_size), 0.0);
  std::vector<int> omega(static_cast<std::size_t>(boundary_vertices));
  std::vector<double> nu_log(static_cast<std::size_t>(inner_size));
  std::vector<double> conditional(static_cast<std::size_t>(inner_size));
  for (std::int64_t w = 0; w < omegas; ++w) {
    std::int64_t code = w;
    for (int i = 0; i < boundary_vertices; ++i) {
      omega[static_cast<std::size_t>(i)] = static_cast<int>(code % q);
      code /= q;
    }
    double p_omega = 0.0;
    for (std::int64_t c = 0; c < inner_size; ++c) {
      const double p = outer.probability(c + inner_size * w);
      conditional[static_cast<std::size_t>(c)] = p;
      p_omega += p;
      nu_log[static_cast<std::size_t>(c)] =
          inner_energy[static_cast<std::size_t>(c)] -
          beta * boundary_energy(inner_configs[static_cast<std::size_t>(c)], omega, ball, params);
    }
    const std::vector<double> nu = normalized_exp(nu_log);
    for (std::int64_t c = 0; c < inner_size; ++c) mixture[static_cast<std::size_t>(c)] += p_omega * nu[static_cast<std::size_t>(c)];
    if (p_omega > 0.0) {
      for (double& x : conditional) x /= p_omega;
      report.conditional = std::max(report.conditional, total_variation(conditional, nu));
    }
  }
  report.integrated = total_variation(mixture, inner.table);
  return report;
}

std::vector<double> marginal(const FiniteVolumeMeasure& measure, const std::vector<int>& vertices) {
  for (int v : vertices)
    if (v < 0 || v >= measure.vertices) throw std::out_of_range("marginal vertex outside the ball");
  const int q = measure.m + 1;
  std::vector<double> out(static_cast<std::size_t>(power(q, static_cast<int>(vertices.size()))), 0.0);
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(measure.table.size()); ++c) {
    const std::vector<int> spins = measure.decode(c);
    std::int64_t index = 0;
    for (std::size_t i = vertices.size(); i-- > 0;) index = index * q + spins[static_cast<std::size_t>(vertices[i])];
    out[static_cast<std::size_t>(index)] += measure.probability(c);
  }
  return out;
}

TransitionKernel::TransitionKernel(const BoundaryLawField& field, const ModelParams& params)
    : ball_(field.ball_ptr()), m_(field.m()) {
  if (field.m() != params.m()) throw std::invalid_argument("field and model disagree on m");
  if (ball_->depth() < 1) throw std::invalid_argument("transition kernel needs a ball of depth >= 1");
  const int q = m_ + 1;
  const double lt = params.log_theta();
  std::vector<double> terms(static_cast<std::size_t>(q));

  std::vector<double> root_log(static_cast<std::size_t>(q), 0.0);
  for (int c = ball_->child_begin(0); c < ball_->child_begin(0) + ball_->child_count(0); ++c)
    for (int s = 0; s < q; ++s) {
      for (int j = 0; j < q; ++j) terms[static_cast<std::size_t>(j)] = lt * std::abs(s - j) + field.law(c).unreduced(j);
      root_log[static_cast<std::size_t>(s)] += log_sum_exp(terms);
    }
  root_ = normalized_exp(root_log);

  kernel_.assign(static_cast<std::size_t>(ball_->size()) * static_cast<std::size_t>(q * q), 0.0);
  for (int y = 1; y < ball_->size(); ++y)
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) terms[static_cast<std::size_t>(j)] = lt * std::abs(i - j) + field.law(y).unreduced(j);
      const std::vector<double> p = normalized_exp(terms);
      std::copy(p.begin(), p.end(), kernel_.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(y) * q + i) * q));
    }
}

std::vector<double> TransitionKernel::row(int y, int i) const {
  const int q = m_ + 1;
  const auto begin = kernel_.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(y) * q + i) * q);
  return {begin, begin + q};
}

double TransitionKernel::probability(int y, int i, int j) const {
  const int q = m_ + 1;
  return kernel_[(static_cast<std::size_t>(y) * q + i) * q + j];
}

std::vector<double> TransitionKernel::site_marginal(int vertex) const {
  if (vertex < 0 || vertex >= ball_->size()) throw std::out_of_range("vertex outside the ball");
  std::vector<int> path;
  for (int v = vertex; v > 0; v = ball_->parent(v)) path.push_back(v);
  const int q = m_ + 1;
  std::vector<double> p = root_;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    std::vector<double> next(static_cast<std::size_t>(q), 0.0);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) next[static_cast<std::size_t>(j)] += p[static_cast<std::size_t>(i)] * probability(*it, i, j);
    p = std::move(next);
  }
  return p;
}

std::vector<double> TransitionKernel::edge_marginal(int y) const {
  if (y <= 0 || y >= ball_->size()) throw std::out_of_range("edge marginal needs a non-root vertex");
  const int q = m_ + 1;
  const std::vector<double> parent = site_marginal(ball_->parent(y));
  std::vector<double> out(static_cast<std::size_t>(q * q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) out[static_cast<std::size_t>(i + q * j)] = parent[static_cast<std::size_t>(i)] * probability(y, i, j);
  return out;
}

SpinConfig draw(const TransitionKernel& kernel, int depth, const UniformSource& uniform) {
  const Ball& ball = kernel.ball();
  if (depth < 0 || depth > ball.depth()) throw std::invalid_argument("sampling depth outside the kernel's ball");
  const int q = kernel.m() + 1;
  SpinConfig config{depth, std::vector<int>(static_cast<std::size_t>(ball.level_end(depth)))};
  config.spins[0] = inverse_cdf(kernel.root_distribution(), 0, q, uniform());
  for (int v = 1; v < ball.level_end(depth); ++v) {
    const int i = config.spins[static_cast<std::size_t>(ball.parent(v))];
    const std::vector<double> r = kernel.row(v, i);
    config.spins[static_cast<std::size_t>(v)] = inverse_cdf(r, 0, q, uniform());
  }
  return config;
}

std::vector<SpinConfig> sample(const BoundaryLawField& field, const ModelParams& params, int depth, std::uint64_t seed,
                               int count) {
  if (count < 0) throw std::invalid_argument("sample count must be nonnegative");
  if (depth < 0 || depth > field.depth()) throw std::invalid_argument("sampling depth outside the field's ball");
  const TransitionKernel kernel(field, params);
  std::vector<SpinConfig> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (int s = 0; s < count; ++s) {
    SplitMix64 rng(stream_seed(seed, static_cast<std::uint64_t>(s)));
    out[static_cast<std::size_t>(s)] = draw(kernel, depth, [&rng] { return rng.uniform(); });
  }
  return out;
}

double flip_distance(const BoundaryLawField& field, int depth, const ModelParams& params) {
  const FiniteVolumeMeasure mu = materialize(field, depth, params);
  const int q = mu.m + 1;
  double s = 0.0;
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(mu.table.size()); ++c) {
    std::int64_t code = c, image = 0, place = 1;
    for (int v = 0; v < mu.vertices; ++v) {
      image += (mu.m - code % q) * place;
      code /= q;
      place *= q;
    }
    s += std::abs(mu.probability(c) - mu.probability(image));
  }
  return 0.5 * s;
}

bool symmetry_check(const BoundaryLawField& field, int depth, const ModelParams& params) {
  return flip_distance(field, depth, params) <= 1e-10;
}

BoundaryLawField flipped_field(const BoundaryLawField& field) {
  BoundaryLawField out(field.ball_ptr(), field.m());
  for (int v = 1; v < field.ball().size(); ++v) out.set(v, flipped(field.law(v)));
  if (field.has_root()) out.set_root(flipped(field.root()));
  return out;
}

}  // namespace sosgibbs

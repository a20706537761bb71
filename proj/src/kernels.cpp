#include "sosgibbs/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace sosgibbs::kernels {

namespace {

struct Residual2 {
  double r0;
  double r1;
};

Residual2 ti_point_residual(double h0, double h1, const ModelParams& params) {
  const ReducedLaw f = F_map(ReducedLaw{h0, h1}, 2, params.theta());
  return {h0 - params.k() * f[0], h1 - params.k() * f[1]};
}

bool straddles(double a, double b, double c, double d) {
  const double lo = std::min(std::min(a, b), std::min(c, d));
  const double hi = std::max(std::max(a, b), std::max(c, d));
  return lo <= 0.0 && hi >= 0.0;
}

TiGridScan collect_cells(const std::vector<Residual2>& values, std::span<const double> axis) {
  const int n = static_cast<int>(axis.size());
  auto at = [&](int i, int j) -> const Residual2& { return values[static_cast<std::size_t>(i * n + j)]; };
  TiGridScan scan;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      const Residual2 &a = at(i, j), &b = at(i + 1, j), &c = at(i, j + 1), &d = at(i + 1, j + 1);
      if (straddles(a.r0, b.r0, c.r0, d.r0) && straddles(a.r1, b.r1, c.r1, d.r1))
        scan.cells.push_back({i, j, 0.5 * (axis[static_cast<std::size_t>(i)] + axis[static_cast<std::size_t>(i + 1)]),
                              0.5 * (axis[static_cast<std::size_t>(j)] + axis[static_cast<std::size_t>(j + 1)])});
    }
  }
  return scan;
}

void check_m2(const ModelParams& params) {
  if (params.m() != 2) throw std::invalid_argument("this kernel is specialised to m = 2");
}

double config_log_weight(std::int64_t code, const BoundaryLawField& field, int depth, int vertices,
                         double log_theta, std::vector<int>& spins) {
  const Ball& ball = field.ball();
  const int base = field.m() + 1;
  for (int v = 0; v < vertices; ++v) {
    spins[static_cast<std::size_t>(v)] = static_cast<int>(code % base);
    code /= base;
  }
  long gaps = 0;
  for (int v = 1; v < vertices; ++v)
    gaps += std::abs(spins[static_cast<std::size_t>(v)] - spins[static_cast<std::size_t>(ball.parent(v))]);
  double w = log_theta * static_cast<double>(gaps);
  if (depth == 0) {
    if (field.has_root()) w += field.root().unreduced(spins[0]);
  } else {
    for (int v = ball.level_begin(depth); v < vertices; ++v)
      w += field.law(v).unreduced(spins[static_cast<std::size_t>(v)]);
  }
  return w;
}

AlternatingLimit alternate_one(const ModelParams& params, const ReducedLaw& start, int max_iter, double tol) {
  const int m = params.m();
  const double k = params.k();
  AlternatingLimit out;
  out.t = start;
  out.z = k * F_map(start, m, params.theta());
  for (int it = 1; it <= max_iter; ++it) {
    const ReducedLaw z = k * F_map(out.t, m, params.theta());
    const ReducedLaw t = k * F_map(z, m, params.theta());
    const double change = std::max(max_abs_diff(z, out.z), max_abs_diff(t, out.t));
    out.z = z;
    out.t = t;
    out.iterations = it;
    if (!std::isfinite(change)) break;
    if (change <= tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<double> log_grid(double z_min, double z_max, int points) {
  if (!(z_min > 0.0) || !(z_max > z_min) || points < 2) throw std::invalid_argument("bad log grid");
  std::vector<double> axis(static_cast<std::size_t>(points));
  const double lo = std::log(z_min), hi = std::log(z_max);
  for (int i = 0; i < points; ++i) axis[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return axis;
}

Enumeration describe_enumeration(const Ball& ball, int depth, int m) {
  if (depth > ball.depth()) throw std::invalid_argument("enumeration depth exceeds the ball");
  Enumeration e{depth, m, ball.level_end(depth), 1};
  for (int v = 0; v < e.vertices; ++v) {
    if (e.configs > (std::int64_t{1} << 50) / (m + 1)) throw std::length_error("configuration space too large");
    e.configs *= m + 1;
  }
  return e;
}

namespace serial {

TiGridScan ti_grid_scan(const ModelParams& params, std::span<const double> axis) {
  check_m2(params);
  const int n = static_cast<int>(axis.size());
  std::vector<Residual2> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      values[static_cast<std::size_t>(i * n + j)] =
          ti_point_residual(axis[static_cast<std::size_t>(i)], axis[static_cast<std::size_t>(j)], params);
  return collect_cells(values, axis);
}

std::vector<double> log_weights(const BoundaryLawField& field, int depth, const ModelParams& params) {
  const Enumeration e = describe_enumeration(field.ball(), depth, field.m());
  std::vector<double> out(static_cast<std::size_t>(e.configs));
  std::vector<int> spins(static_cast<std::size_t>(e.vertices));
  for (std::int64_t c = 0; c < e.configs; ++c)
    out[static_cast<std::size_t>(c)] = config_log_weight(c, field, depth, e.vertices, params.log_theta(), spins);
  return out;
}

std::vector<AlternatingLimit> alternating_iterate(const ModelParams& params, std::span<const ReducedLaw> starts,
                                                  int max_iter, double tol) {
  std::vector<AlternatingLimit> out;
  out.reserve(starts.size());
  for (const ReducedLaw& s : starts) out.push_back(alternate_one(params, s, max_iter, tol));
  return out;
}

}  // namespace serial

namespace omp {

TiGridScan ti_grid_scan(const ModelParams& params, std::span<const double> axis) {
  check_m2(params);
  const int n = static_cast<int>(axis.size());
  std::vector<Residual2> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
#pragma omp parallel for collapse(2) schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      values[static_cast<std::size_t>(i * n + j)] =
          ti_point_residual(axis[static_cast<std::size_t>(i)], axis[static_cast<std::size_t>(j)], params);
  return collect_cells(values, axis);
}

std::vector<double> log_weights(const BoundaryLawField& field, int depth, const ModelParams& params) {
  const Enumeration e = describe_enumeration(field.ball(), depth, field.m());
  std::vector<double> out(static_cast<std::size_t>(e.configs));
#pragma omp parallel
  {
    std::vector<int> spins(static_cast<std::size_t>(e.vertices));
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < e.configs; ++c)
      out[static_cast<std::size_t>(c)] = config_log_weight(c, field, depth, e.vertices, params.log_theta(), spins);
  }
  return out;
}

std::vector<AlternatingLimit> alternating_iterate(const ModelParams& params, std::span<const ReducedLaw> starts,
                                                  int max_iter, double tol) {
  std::vector<AlternatingLimit> out(starts.size());
  const auto n = static_cast<std::int64_t>(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < n; ++s)
    out[static_cast<std::size_t>(s)] = alternate_one(params, starts[static_cast<std::size_t>(s)], max_iter, tol);
  return out;
}

}  // namespace omp

}  // namespace sosgibbs::kernels

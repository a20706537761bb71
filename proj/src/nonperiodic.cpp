#include "sosgibbs/nonperiodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sosgibbs/ti_solver.hpp"

namespace sosgibbs {

namespace {

bool all_maximal(const std::vector<int>& digits, std::size_t count, int k) {
  for (std::size_t i = 0; i < count && i < digits.size(); ++i)
    if (digits[i] != (i == 0 ? k : k - 1)) return false;
  return true;
}

}  // namespace

std::vector<int> param_to_digits(double t, int k, int depth) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  const double top = (k + 1.0) / k;
  if (!(t >= 0.0) || !(t <= top)) throw std::out_of_range("path parameter " + std::to_string(t) + " outside [0, (k+1)/k]");
  double u = std::min(1.0, t * k / (k + 1.0));
  if (1.0 - u <= 1e-14) u = 1.0;

  std::vector<int> digits;
  digits.reserve(static_cast<std::size_t>(depth));
  if (depth == 0) return digits;
  double x = u * (k + 1);
  int d = std::min(k, static_cast<int>(std::floor(x)));
  digits.push_back(d);
  double r = x - d;
  for (int i = 1; i < depth; ++i) {
    x = r * k;
    // k = 1 leaves a single successor, so every later digit is 0.
    d = std::clamp(static_cast<int>(std::floor(x)), 0, k - 1);
    digits.push_back(d);
    r = x - d;
  }
  return digits;
}

std::vector<Word> param_to_path(double t, int k, int depth) { return path_vertices(param_to_digits(t, k, depth), k); }

std::vector<int> split_components(const Ball& ball, const std::vector<int>& path1, const std::vector<int>& path2) {
  if (static_cast<int>(path1.size()) < ball.depth() || static_cast<int>(path2.size()) < ball.depth())
    throw std::invalid_argument("paths shorter than the ball depth");
  if (std::lexicographical_compare(path2.begin(), path2.end(), path1.begin(), path1.end()))
    throw std::invalid_argument("split_components requires path1 <= path2");
  const int k = ball.k();
  std::vector<int> component(static_cast<std::size_t>(ball.size()));
  for (int v = 0; v < ball.size(); ++v) {
    const std::vector<int> d = ball.digits_to(v);
    const auto len = static_cast<std::ptrdiff_t>(d.size());
    const auto cmp1 = std::lexicographical_compare_three_way(d.begin(), d.end(), path1.begin(), path1.begin() + len);
    const auto cmp2 = std::lexicographical_compare_three_way(d.begin(), d.end(), path2.begin(), path2.begin() + len);
    int c;
    if (cmp1 == 0 && cmp2 == 0)
      c = all_maximal(path1, std::max<std::size_t>(d.size(), 1), k) ? 1 : 3;
    else if (cmp1 <= 0)
      c = 1;
    else if (cmp2 >= 0)
      c = 3;
    else
      c = 2;
    component[static_cast<std::size_t>(v)] = c;
  }
  return component;
}

NonTiField build_field(double t, double s, const ModelParams& params, int depth) {
  if (params.m() != 2) throw std::invalid_argument("build_field requires m = 2");
  if (depth < 1) throw std::invalid_argument("build_field requires depth >= 1");
  if (!(t <= s)) throw std::invalid_argument("build_field requires t <= s");
  const TiSolutionSet ti = solve_symmetric_ti(params);
  if (ti.classification != TiClass::Three)
    throw std::invalid_argument("build_field requires three symmetric TI solutions (FM, beta above critical)");
  const int k = params.k();
  const double theta = params.theta();

  auto ball = std::make_shared<const Ball>(k, depth);
  NonTiField out{t, s, BoundaryLawField(ball, 2), {}, *ti.labels};
  out.component = split_components(*ball, param_to_digits(t, k, depth), param_to_digits(s, k, depth));

  const std::array<ReducedLaw, 3> boundary{ReducedLaw{0.0, std::log(out.labels[0])},
                                           ReducedLaw{0.0, std::log(out.labels[1])},
                                           ReducedLaw{0.0, std::log(out.labels[2])}};
  for (int v = ball->level_begin(depth); v < ball->level_end(depth); ++v)
    out.field.set(v, boundary[static_cast<std::size_t>(out.component[static_cast<std::size_t>(v)] - 1)]);
  for (int level = depth - 1; level >= 1; --level) {
    const int begin = ball->level_begin(level), end = ball->level_end(level);
#pragma omp parallel for schedule(static)
    for (int v = begin; v < end; ++v) out.field.set(v, successor_image(out.field, v, theta));
  }
  out.field.set_root_from_successors(theta);
  return out;
}

RootConvergence root_convergence(double t, double s, const ModelParams& params, const std::vector<int>& depths) {
  RootConvergence rc;
  rc.depths = depths;
  std::sort(rc.depths.begin(), rc.depths.end());
  for (int d : rc.depths) rc.roots.push_back(build_field(t, s, params, d).field.root());
  for (std::size_t i = 1; i < rc.roots.size(); ++i) rc.differences.push_back(max_abs_diff(rc.roots[i], rc.roots[i - 1]));
  for (std::size_t i = 1; i < rc.differences.size(); ++i) {
    const double prev = rc.differences[i - 1], cur = rc.differences[i];
    rc.rates.push_back(prev > 0.0 ? cur / prev : 0.0);
    if (prev > 0.0 ? !(cur < prev) : cur > 0.0) rc.decreasing = false;
  }
  rc.rate_bound = params.k() * derivative_bounds(params.theta()).slice;
  return rc;
}

DistinctnessReport distinctness_check(const std::vector<std::array<double, 2>>& pairs, const ModelParams& params,
                                      int depth) {
  DistinctnessReport report;
  report.depth = depth;
  const int k = params.k();
  std::vector<BoundaryLawField> fields;
  std::vector<std::array<std::vector<int>, 2>> digits;
  for (const auto& p : pairs) {
    fields.push_back(build_field(p[0], p[1], params, depth).field);
    digits.push_back({param_to_digits(p[0], k, depth), param_to_digits(p[1], k, depth)});
  }
  const std::size_t n = pairs.size();
  report.distance.assign(n, std::vector<double>(n, 0.0));
  report.diverge.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double d = 0.0;
      for (int v = 0; v < fields[i].ball().size(); ++v) d = std::max(d, max_abs_diff(fields[i].law(v), fields[j].law(v)));
      report.distance[i][j] = d;
      report.diverge[i][j] = digits[i] != digits[j];
      if (report.diverge[i][j] && !(d > 0.0)) report.ok = false;
    }
  return report;
}

}  // namespace sosgibbs

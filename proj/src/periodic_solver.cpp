#include "sosgibbs/periodic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linalg.hpp"
#include "sosgibbs/kernels.hpp"
#include "sosgibbs/random.hpp"
#include "sosgibbs/ti_solver.hpp"

namespace sosgibbs {

namespace {

void check_m2(const ModelParams& params, const char* who) {
  if (params.m() != 2) throw std::invalid_argument(std::string(who) + " requires m = 2");
}

double log_psi(double x, double theta, int k) {
  return k * (std::log(2.0 * theta + x) - std::log(1.0 + theta * theta + theta * x));
}

// Invariant interval of psi, widened by 1e-3 on each side, in log coordinates.
std::array<double, 2> invariant_log_interval(double theta, int k) {
  const double a = log_psi(0.0, theta, k);
  const double b = -k * std::log(theta);
  return {std::min(a, b) + std::log1p(-1e-3), std::max(a, b) + std::log1p(1e-3)};
}

struct PsiSquaredResidual {
  double theta;
  int k;
  double operator()(double u) const {
    const double z = std::exp(u);
    return u - log_psi(psi(z, theta, k), theta, k);
  }
  double derivative(double u) const {
    const double z = std::exp(u);
    return 1.0 - psi_log_slope(psi(z, theta, k), theta, k) * psi_log_slope(z, theta, k);
  }
};

double isolate(const PsiSquaredResidual& g, double lo, double hi) {
  double glo = g(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-8; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  double u = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    const double gu = g(u);
    if (gu == 0.0) break;
    if ((gu < 0.0) == (glo < 0.0)) {
      lo = u;
      glo = gu;
    } else {
      hi = u;
    }
    double next = u - gu / g.derivative(u);
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 4e-16 * std::max(1.0, std::abs(u))) {
      u = next;
      break;
    }
    u = next;
  }
  return u;
}

double pair_residual(double z, double t, double theta, int k) {
  return std::max(std::abs(z - psi(t, theta, k)), std::abs(t - psi(z, theta, k)));
}

struct Pair4 {
  ReducedLaw z;
  ReducedLaw t;
};

double residual4(const Pair4& p, const ModelParams& params) {
  const double k = params.k();
  const ReducedLaw fz = F_map(p.z, 2, params.theta());
  const ReducedLaw ft = F_map(p.t, 2, params.theta());
  double r = 0.0;
  for (int i = 0; i < 2; ++i) {
    r = std::max(r, std::abs(p.z[i] - k * ft[i]));
    r = std::max(r, std::abs(p.t[i] - k * fz[i]));
  }
  return r;
}

// Newton on (z - kF(t), t - kF(z)) = 0 with backtracking; keeps the input
// when no step improves the residual.
Pair4 polish4(Pair4 p, const ModelParams& params) {
  const double k = params.k();
  const double theta = params.theta();
  double norm = residual4(p, params);
  for (int it = 0; it < 50 && norm > 0.0; ++it) {
    const ReducedLaw fz = F_map(p.z, 2, theta), ft = F_map(p.t, 2, theta);
    const std::vector<double> jz = F_jacobian(p.z, 2, theta), jt = F_jacobian(p.t, 2, theta);
    std::vector<double> a(16, 0.0);
    std::vector<double> b{p.z[0] - k * ft[0], p.z[1] - k * ft[1], p.t[0] - k * fz[0], p.t[1] - k * fz[1]};
    for (int i = 0; i < 4; ++i) a[static_cast<std::size_t>(i * 4 + i)] = 1.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        a[static_cast<std::size_t>(i * 4 + 2 + j)] = -k * jt[static_cast<std::size_t>(i * 2 + j)];
        a[static_cast<std::size_t>((2 + i) * 4 + j)] = -k * jz[static_cast<std::size_t>(i * 2 + j)];
      }
    try {
      detail::solve_linear(a, b, 4);
    } catch (const std::runtime_error&) {
      break;
    }
    bool improved = false;
    double lambda = 1.0;
    for (int ls = 0; ls < 30; ++ls, lambda *= 0.5) {
      Pair4 trial = p;
      for (int i = 0; i < 2; ++i) {
        trial.z[i] -= lambda * b[static_cast<std::size_t>(i)];
        trial.t[i] -= lambda * b[static_cast<std::size_t>(2 + i)];
      }
      const double nt = residual4(trial, params);
      if (std::isfinite(nt) && nt < norm) {
        p = trial;
        norm = nt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return p;
}

Period2Solution to_solution(const Pair4& p, const ModelParams& params) {
  Period2Solution s;
  s.type = max_abs_diff(p.z, p.t) <= 1e-8 ? Period2Type::Fixed : Period2Type::Cycle;
  s.z = std::exp(p.z[1]);
  s.t = std::exp(p.t[1]);
  s.full = std::array<std::array<double, 2>, 2>{
      std::array<double, 2>{std::exp(p.z[0]), std::exp(p.z[1])},
      std::array<double, 2>{std::exp(p.t[0]), std::exp(p.t[1])}};
  s.residual = residual4(p, params);
  return s;
}

struct VertexType {
  int same;
  int other;
};

std::vector<VertexType> vertex_types(const SubgroupSpec& spec) {
  const int n = spec.k() + 1;
  const int na = static_cast<int>(spec.parity_set().size());
  std::vector<VertexType> types;
  if (n - na > 0) types.push_back({n - na - 1, na});  // parent in the same coset
  if (na > 0) types.push_back({n - na, na - 1});      // parent in the other coset
  return types;
}

}  // namespace

double psi(double x, double theta, int k) { return std::exp(log_psi(x, theta, k)); }

double psi_log_slope(double x, double theta, int k) {
  return k * x * (1.0 - theta * theta) / ((2.0 * theta + x) * (1.0 + theta * theta + theta * x));
}

Condition414 condition_414(const ModelParams& params) {
  check_m2(params, "condition_414");
  if (params.regime() != Regime::Antiferromagnetic)
    throw std::invalid_argument("condition_414 requires antiferromagnetic parameters (theta > 1)");
  const TiSolutionSet ti = solve_symmetric_ti(params);
  if (ti.symmetric_roots.size() != 1) throw std::runtime_error("expected a unique symmetric root");
  Condition414 c;
  c.z_star = ti.symmetric_roots.front();
  const double th = params.theta();
  c.value = params.k() * c.z_star * (th * th - 1.0) / ((2.0 * th + c.z_star) * (1.0 + th * th + th * c.z_star));
  c.holds = c.value > 1.0;
  return c;
}

const char* to_string(Period2Type t) { return t == Period2Type::Fixed ? "FIXED" : "CYCLE"; }

std::vector<Period2Solution> solve_period2_symmetric(const ModelParams& params) {
  check_m2(params, "solve_period2_symmetric");
  const double theta = params.theta();
  const int k = params.k();
  const PsiSquaredResidual g{theta, k};
  const auto [lo, hi] = invariant_log_interval(theta, k);

  constexpr int kGrid = 1000;
  std::vector<double> roots;
  double prev_u = lo, prev = g(lo);
  if (prev == 0.0) roots.push_back(lo);
  for (int i = 1; i < kGrid; ++i) {
    const double u = lo + (hi - lo) * i / (kGrid - 1);
    const double cur = g(u);
    if (cur == 0.0)
      roots.push_back(u);
    else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0))
      roots.push_back(isolate(g, prev_u, u));
    prev_u = u;
    prev = cur;
  }
  std::vector<double> zs;
  for (double u : roots) zs.push_back(std::exp(u));

  std::vector<Period2Solution> out;
  for (double z : zs) {
    Period2Solution s;
    s.z = z;
    const double image = psi(z, theta, k);
    if (std::abs(std::log(image) - std::log(z)) <= 1e-9) {
      s.t = z;
      s.type = Period2Type::Fixed;
    } else {
      // Partner is the root closest to psi(z), which keeps the swap exact.
      auto gap = [&](double w) { return std::abs(std::log(w) - std::log(image)); };
      const double nearest = *std::min_element(zs.begin(), zs.end(), [&](double a, double b) { return gap(a) < gap(b); });
      s.t = gap(nearest) <= 1e-8 ? nearest : image;
      s.type = Period2Type::Cycle;
    }
    s.residual = pair_residual(s.z, s.t, theta, k);
    out.push_back(s);
  }
  return out;
}

PsiSquaredOrbit iterate_psi_squared(const ModelParams& params, double z0, int max_iter, double tol) {
  PsiSquaredOrbit orbit;
  double z = z0;
  int direction = 0;
  for (int it = 1; it <= max_iter; ++it) {
    const double next = psi(psi(z, params.theta(), params.k()), params.theta(), params.k());
    const int d = next > z ? 1 : (next < z ? -1 : 0);
    if (d != 0) {
      if (direction != 0 && d != direction) orbit.monotone = false;
      direction = d;
    }
    const double change = std::abs(next - z);
    z = next;
    orbit.iterations = it;
    if (change <= tol * std::max(1.0, std::abs(z))) {
      orbit.converged = true;
      break;
    }
  }
  orbit.limit = z;
  return orbit;
}

std::vector<Period2Limit> period2_limits(const ModelParams& params, const Period2Search& search) {
  check_m2(params, "period2_limits");
  SplitMix64 rng(search.seed);
  std::vector<ReducedLaw> starts;
  starts.reserve(static_cast<std::size_t>(search.starts));
  for (int s = 0; s < search.starts; ++s) {
    const double h0 = search.spread * (2.0 * rng.uniform() - 1.0);
    const double h1 = search.spread * (2.0 * rng.uniform() - 1.0);
    starts.push_back(ReducedLaw{search.slice_only ? 0.0 : h0, h1});
  }
  const auto raw = kernels::omp::alternating_iterate(params, starts, search.max_iter, search.tol);
  std::vector<Period2Limit> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back({r.z, r.t, r.converged, r.iterations});
  return out;
}

std::vector<Period2Solution> solve_period2_full(const ModelParams& params, const Period2Search& search) {
  check_m2(params, "solve_period2_full");
  std::vector<Pair4> candidates;
  for (const Period2Limit& l : period2_limits(params, search))
    if (l.converged) candidates.push_back({l.z, l.t});
  if (search.slice_only) {
    for (double z : solve_symmetric_ti(params).symmetric_roots) {
      const ReducedLaw h{0.0, std::log(z)};
      candidates.push_back({h, h});
    }
  } else {
    for (const auto& zz : solve_full_ti(params)) {
      const ReducedLaw h{std::log(zz[0]), std::log(zz[1])};
      candidates.push_back({h, h});
    }
  }
  for (Pair4& c : candidates) c = polish4(c, params);

  std::vector<Pair4> unique;
  for (const Pair4& c : candidates) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Pair4& u) {
      return std::max(max_abs_diff(u.z, c.z), max_abs_diff(u.t, c.t)) <= 1e-6;
    });
    if (!dup) unique.push_back(c);
  }
  std::sort(unique.begin(), unique.end(), [](const Pair4& a, const Pair4& b) {
    const std::array<double, 4> ka{a.z[1], a.t[1], a.z[0], a.t[0]}, kb{b.z[1], b.t[1], b.z[0], b.t[0]};
    return ka < kb;
  });
  std::vector<Period2Solution> out;
  for (const Pair4& p : unique) out.push_back(to_solution(p, params));
  return out;
}

PeriodicReport classify_periodic(const SubgroupSpec& spec, const ModelParams& params) {
  check_m2(params, "classify_periodic");
  if (spec.k() != params.k()) throw std::invalid_argument("subgroup and model disagree on k");
  PeriodicReport report;
  report.parity_set = spec.parity_set();
  report.i_nonempty = spec.generators_intersect();
  for (const auto& zz : solve_full_ti(params)) {
    Period2Solution s;
    s.z = s.t = zz[1];
    s.full = std::array<std::array<double, 2>, 2>{zz, zz};
    const ReducedLaw h{std::log(zz[0]), std::log(zz[1])};
    s.residual = ti_residual(h, params);
    report.solutions.push_back(s);
  }
  if (params.regime() == Regime::Antiferromagnetic) report.condition = condition_414(params);

  if (report.i_nonempty) {
    report.statement = "I(K) is nonempty: K-periodic solutions are translation invariant";
  } else if (params.regime() != Regime::Antiferromagnetic) {
    report.statement = "theta <= 1: G*_k-periodic solutions are translation invariant";
  } else {
    report.statement = "I(K) is empty: G*_k-periodic solutions are TI or chess-board two-cycles";
    for (const Period2Solution& s : solve_period2_symmetric(params)) {
      if (s.type != Period2Type::Cycle) continue;
      Period2Solution c = s;
      c.full = std::array<std::array<double, 2>, 2>{std::array<double, 2>{1.0, s.z}, std::array<double, 2>{1.0, s.t}};
      report.solutions.push_back(c);
    }
  }
  return report;
}

double periodic_residual(const SubgroupSpec& spec, const ModelParams& params, const std::array<ReducedLaw, 2>& h) {
  const double theta = params.theta();
  const std::array<ReducedLaw, 2> f{F_map(h[0], params.m(), theta), F_map(h[1], params.m(), theta)};
  double r = 0.0;
  for (int c = 0; c < 2; ++c)
    for (const VertexType& vt : vertex_types(spec)) {
      const ReducedLaw rhs = static_cast<double>(vt.same) * f[static_cast<std::size_t>(c)] +
                             static_cast<double>(vt.other) * f[static_cast<std::size_t>(1 - c)];
      r = std::max(r, max_abs_diff(h[static_cast<std::size_t>(c)], rhs));
    }
  return r;
}

ParityIteration iterate_periodic_system(const SubgroupSpec& spec, const ModelParams& params,
                                        std::array<ReducedLaw, 2> init, int max_iter, double tol) {
  if (spec.k() != params.k()) throw std::invalid_argument("subgroup and model disagree on k");
  const int m = params.m();
  if (init[0].m() != m || init[1].m() != m) throw std::invalid_argument("initial laws have wrong length");
  const std::vector<VertexType> types = vertex_types(spec);
  const bool relaxed = !spec.is_full();
  const double theta = params.theta();

  ParityIteration out;
  std::array<ReducedLaw, 2> h = std::move(init);
  for (int it = 1; it <= max_iter; ++it) {
    double change = 0.0;
    for (int c = 0; c < 2; ++c) {
      const ReducedLaw fc = F_map(h[static_cast<std::size_t>(c)], m, theta);
      const ReducedLaw fo = F_map(h[static_cast<std::size_t>(1 - c)], m, theta);
      ReducedLaw target(m);
      for (const VertexType& vt : types) target += static_cast<double>(vt.same) * fc + static_cast<double>(vt.other) * fo;
      target *= 1.0 / static_cast<double>(types.size());
      if (relaxed) target = 0.5 * (target + h[static_cast<std::size_t>(c)]);
      change = std::max(change, max_abs_diff(target, h[static_cast<std::size_t>(c)]));
      h[static_cast<std::size_t>(c)] = std::move(target);
    }
    out.iterations = it;
    if (!std::isfinite(change)) break;
    if (change <= tol) {
      out.converged = true;
      break;
    }
  }
  out.residual = periodic_residual(spec, params, h);
  out.translation_invariant = max_abs_diff(h[0], h[1]) <= 1e-8;
  out.limit = std::move(h);
  return out;
}

BoundaryLawField expand_periodic(std::shared_ptr<const Ball> ball, const SubgroupSpec& spec,
                                 const std::array<ReducedLaw, 2>& laws) {
  if (ball->k() != spec.k()) throw std::invalid_argument("subgroup and ball disagree on k");
  BoundaryLawField field(ball, laws[0].m());
  for (int v = 1; v < ball->size(); ++v) field.set(v, laws[static_cast<std::size_t>(spec.coset(ball->vertex(v)))]);
  return field;
}

}  // namespace sosgibbs

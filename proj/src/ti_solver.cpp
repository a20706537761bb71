#include "sosgibbs/ti_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sosgibbs/kernels.hpp"
#include "linalg.hpp"

namespace sosgibbs {

namespace {

double log_add(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Symmetric-branch residual in u = ln z1: u - k ln phi(e^u).
struct SymmetricResidual {
  int k;
  double theta;
  double log_theta;
  double log_2theta;
  double log_1p_theta2;

  SymmetricResidual(int k_, double theta_)
      : k(k_), theta(theta_), log_theta(std::log(theta_)), log_2theta(std::log(2.0 * theta_)),
        log_1p_theta2(std::log1p(theta_ * theta_)) {}

  double log_phi(double u) const { return log_add(log_2theta, u) - log_add(log_1p_theta2, log_theta + u); }
  double operator()(double u) const { return u - k * log_phi(u); }
  double derivative(double u) const {
    const double z = std::exp(u);
    return 1.0 - k * z * (1.0 - theta * theta) / ((2.0 * theta + z) * (1.0 + theta * theta + theta * z));
  }
};

// Root of a monotone residual on [lo, hi] with f(lo), f(hi) of opposite signs:
// bisection to 1e-8 then safeguarded Newton.
double isolate_root(const SymmetricResidual& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-8; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double u = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    const double fu = f(u);
    if (fu == 0.0) break;
    if ((fu < 0.0) == (flo < 0.0)) {
      lo = u;
      flo = fu;
    } else {
      hi = u;
    }
    const double d = f.derivative(u);
    double next = u - fu / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 4e-16 * std::max(1.0, std::abs(u))) {
      u = next;
      break;
    }
    u = next;
  }
  return u;
}

void check_m2(const ModelParams& params, const char* who) {
  if (params.m() != 2) throw std::invalid_argument(std::string(who) + " requires m = 2");
}

ReducedLaw ti_residual_vector(const ReducedLaw& h, const ModelParams& params) {
  ReducedLaw r = F_map(h, params.m(), params.theta());
  for (int i = 0; i < h.m(); ++i) r[i] = h[i] - params.k() * r[i];
  return r;
}

double inf_norm(const ReducedLaw& v) {
  double n = 0.0;
  for (double x : v.values()) n = std::max(n, std::abs(x));
  return n;
}

// Damped Newton on h - k F(h) = 0. Returns nullopt when it fails to converge.
std::optional<ReducedLaw> newton_ti(ReducedLaw h, const ModelParams& params) {
  const int m = params.m();
  ReducedLaw r = ti_residual_vector(h, params);
  double norm = inf_norm(r);
  for (int it = 0; it < 100 && norm > 1e-13; ++it) {
    std::vector<double> jac = F_jacobian(h, m, params.theta());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        jac[static_cast<std::size_t>(i * m + j)] = (i == j ? 1.0 : 0.0) - params.k() * jac[static_cast<std::size_t>(i * m + j)];
    std::vector<double> step(r.values());
    try {
      detail::solve_linear(jac, step, m);
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
      ReducedLaw trial = h;
      for (int i = 0; i < m; ++i) trial[i] -= lambda * step[static_cast<std::size_t>(i)];
      const ReducedLaw rt = ti_residual_vector(trial, params);
      const double nt = inf_norm(rt);
      if (std::isfinite(nt) && nt < norm) {
        h = trial;
        r = rt;
        norm = nt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (norm > 1e-10) return std::nullopt;
  return h;
}

}  // namespace

AbcForm AbcForm::from_theta(double theta, int k) {
  return {2.0 * std::pow(theta, k + 1), (1.0 + theta * theta) / (2.0 * theta * theta), theta};
}

Eq35Result classify_eq35(double a, double b, int k) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("classify_eq35 requires a, b > 0");
  if (k < 1) throw std::invalid_argument("classify_eq35 requires k >= 1");
  if (k == 1) return {1, std::nullopt};
  const double threshold = std::pow((k + 1.0) / (k - 1.0), 2);
  if (b <= threshold) return {1, std::nullopt};

  const double c = 2.0 - (b - 1.0) * (k - 1.0);  // c < 0 here
  const double disc = std::sqrt(std::max(0.0, c * c - 4.0 * b));
  // Stable pair: the larger root from the formula, the smaller from x1 x2 = b.
  const double x2 = (-c + disc) / 2.0;
  const double x1 = b / x2;
  auto nu = [&](double x) { return std::pow((1.0 + x) / (b + x), k) / x; };
  Classification35 cls{x1, x2, nu(x1), nu(x2)};
  if (cls.nu1 > cls.nu2) {
    std::swap(cls.nu1, cls.nu2);
    std::swap(cls.x1, cls.x2);
  }
  int count = 1;
  auto equal = [](double p, double q) { return std::abs(p - q) <= 1e-12 * std::max(std::abs(p), std::abs(q)); };
  if (equal(a, cls.nu1) || equal(a, cls.nu2))
    count = 2;
  else if (cls.nu1 < a && a < cls.nu2)
    count = 3;
  return {count, cls};
}

double critical_beta1(double J, int k) {
  if (!(J < 0.0)) throw std::invalid_argument("critical_beta1 requires J < 0");
  if (k < 2) throw std::invalid_argument("critical_beta1 requires k >= 2");
  const double kk = static_cast<double>(k);
  return std::log((kk - 1.0) * (kk - 1.0) / (kk * kk + 6.0 * kk + 1.0)) / (2.0 * J);
}

const char* to_string(TiClass c) {
  switch (c) {
    case TiClass::Unique: return "UNIQUE";
    case TiClass::BoundaryTwo: return "BOUNDARY_TWO";
    case TiClass::Three: return "THREE";
  }
  return "?";
}

TiSolutionSet solve_symmetric_ti(const ModelParams& params) {
  check_m2(params, "solve_symmetric_ti");
  const int k = params.k();
  const double theta = params.theta();
  const SymmetricResidual f(k, theta);

  // Every root lies in the invariant interval of psi; the search range is its
  // hull with [1e-12, max(10, theta^{-2k})].
  const double log_psi0 = k * (f.log_2theta - f.log_1p_theta2);
  const double log_psi_inf = -k * f.log_theta;
  const double u_lo = std::min(std::log(1e-12), std::min(log_psi0, log_psi_inf) - 1.0);
  const double u_hi = std::max(std::max(std::log(10.0), -2.0 * k * f.log_theta), std::max(log_psi0, log_psi_inf) + 1.0);

  // Breakpoints: a log grid plus the critical points of the residual, so that
  // the residual is monotone between consecutive breakpoints.
  constexpr int kGrid = 2000;
  std::vector<double> breaks;
  breaks.reserve(kGrid + 2);
  for (int i = 0; i < kGrid; ++i) breaks.push_back(u_lo + (u_hi - u_lo) * i / (kGrid - 1));
  const AbcForm abc = AbcForm::from_theta(theta, k);
  const Eq35Result eq35 = classify_eq35(abc.a, abc.b, k);
  if (eq35.critical) {
    for (double x : {eq35.critical->x1, eq35.critical->x2}) {
      const double u = std::log(abc.z_from_x(x));
      if (u > u_lo && u < u_hi) breaks.push_back(u);
    }
  }
  std::sort(breaks.begin(), breaks.end());

  std::vector<double> roots_u;
  double prev = f(breaks.front());
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double cur = f(breaks[i]);
    if (cur == 0.0) {
      roots_u.push_back(breaks[i]);
    } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
      roots_u.push_back(isolate_root(f, breaks[i - 1], breaks[i]));
    }
    prev = cur;
  }

  TiSolutionSet out;
  if (eq35.root_count == 2 && eq35.critical) {
    // Tangency: the double root sits at the critical point with nu_i = a.
    const auto& c = *eq35.critical;
    const double x = std::abs(abc.a - c.nu1) < std::abs(abc.a - c.nu2) ? c.x1 : c.x2;
    const double u_t = std::log(abc.z_from_x(x));
    std::erase_if(roots_u, [&](double u) { return std::abs(u - u_t) < 1e-6; });
    roots_u.push_back(u_t);
  }
  std::sort(roots_u.begin(), roots_u.end());
  roots_u.erase(std::unique(roots_u.begin(), roots_u.end(), [](double p, double q) { return std::abs(p - q) < 1e-12; }),
                roots_u.end());

  for (double u : roots_u) out.symmetric_roots.push_back(std::exp(u));
  for (double z : out.symmetric_roots) out.full_solutions.push_back({1.0, z});
  switch (out.symmetric_roots.size()) {
    case 3:
      out.classification = TiClass::Three;
      out.labels = std::array<double, 3>{out.symmetric_roots[0], out.symmetric_roots[1], out.symmetric_roots[2]};
      break;
    case 2: out.classification = TiClass::BoundaryTwo; break;
    default: out.classification = TiClass::Unique; break;
  }
  if (eq35.root_count == 2) out.classification = TiClass::BoundaryTwo;
  return out;
}

std::vector<std::array<double, 2>> solve_full_ti(const ModelParams& params, const FullTiOptions& options) {
  check_m2(params, "solve_full_ti");
  FullTiOptions box = options;
  if (!(box.z_min > 0.0) || !(box.z_max > box.z_min) || box.grid < 2) box = FullTiOptions{};

  const std::vector<double> axis = kernels::log_grid(box.z_min, box.z_max, box.grid);
  const kernels::TiGridScan scan = kernels::omp::ti_grid_scan(params, axis);

  std::vector<ReducedLaw> found;
  for (const auto& cell : scan.cells)
    if (auto h = newton_ti(ReducedLaw{cell.h0, cell.h1}, params)) found.push_back(*h);
  for (double z : solve_symmetric_ti(params).symmetric_roots) found.push_back(ReducedLaw{0.0, std::log(z)});

  std::sort(found.begin(), found.end(), [](const ReducedLaw& p, const ReducedLaw& q) {
    return p[0] != q[0] ? p[0] < q[0] : p[1] < q[1];
  });
  std::vector<ReducedLaw> unique;
  for (const ReducedLaw& h : found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const ReducedLaw& u) { return max_abs_diff(u, h) <= 1e-8; });
    if (!dup) unique.push_back(h);
  }
  std::vector<std::array<double, 2>> out;
  for (const ReducedLaw& h : unique) out.push_back({std::exp(h[0]), std::exp(h[1])});
  return out;
}

TiSolutionSet solve_ti(const ModelParams& params, const FullTiOptions& options) {
  TiSolutionSet out = solve_symmetric_ti(params);
  out.full_solutions = solve_full_ti(params, options);
  return out;
}

double ti_residual(const ReducedLaw& h, const ModelParams& params) { return inf_norm(ti_residual_vector(h, params)); }

IterationReport general_m_iterate(const ModelParams& params, const ReducedLaw& init, int max_iter, double tol) {
  const int m = params.m();
  if (m < 2) throw std::invalid_argument("general_m_iterate requires m >= 2");
  if (init.m() != m) throw std::invalid_argument("initial law has wrong length");
  IterationReport report;
  ReducedLaw h = init;
  for (int it = 1; it <= max_iter; ++it) {
    ReducedLaw next = 0.5 * (h + params.k() * F_map(h, m, params.theta()));
    const double change = max_abs_diff(next, h);
    h = std::move(next);
    report.iterations = it;
    if (!std::isfinite(change)) break;
    if (change <= tol) {
      report.converged = true;
      break;
    }
  }
  report.limit = h;
  report.residual = ti_residual(h, params);
  bool symmetric = std::abs(h[0]) <= 1e-8;
  for (int i = 1; i < m; ++i) symmetric = symmetric && std::abs(h[i] - h[m - i]) <= 1e-8;
  report.symmetric = symmetric && report.converged;
  return report;
}

double locate_count_transition(const ModelParams& params, double beta_lo, double beta_hi, double tol) {
  auto count = [&](double beta) { return solve_symmetric_ti(params.with_beta(beta)).symmetric_roots.size(); };
  if (count(beta_lo) != 1 || count(beta_hi) < 3)
    throw std::invalid_argument("bracket does not straddle the 1 -> 3 transition");
  while (beta_hi - beta_lo > tol) {
    const double mid = 0.5 * (beta_lo + beta_hi);
    if (count(mid) > 1)
      beta_hi = mid;
    else
      beta_lo = mid;
  }
  return 0.5 * (beta_lo + beta_hi);
}

}  // namespace sosgibbs

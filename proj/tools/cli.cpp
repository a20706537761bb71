#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "sosgibbs/gibbs_measure.hpp"
#include "sosgibbs/nonperiodic.hpp"
#include "sosgibbs/periodic_solver.hpp"
#include "sosgibbs/serialize.hpp"
#include "sosgibbs/ti_solver.hpp"

#ifndef SOSGIBBS_VERSION
#define SOSGIBBS_VERSION "0.0.0"
#endif

namespace sosgibbs::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  int k = 2;
  int m = 2;
  std::optional<double> J;
  std::optional<double> beta;
  std::optional<double> theta;
  std::string out;
  std::string format;
  std::uint64_t seed = 1;
};

struct FieldOptions {
  std::string source = "ti";
  int root_index = -1;  // symmetric TI root, -1 picks the largest
  double t = 0.0;
  double s = 0.0;
  int depth = 2;
  double perturb = 0.0;
};

void add_common(CLI::App* app, Common& c, bool with_seed) {
  app->add_option("--k", c.k, "order of the Cayley tree")->capture_default_str();
  app->add_option("--m", c.m, "largest spin value")->capture_default_str();
  app->add_option("--J", c.J, "coupling constant");
  app->add_option("--beta", c.beta, "inverse temperature");
  app->add_option("--theta", c.theta, "theta = exp(J beta), instead of --J/--beta");
  app->add_option("--out", c.out, "output file (default: standard output)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  if (with_seed) app->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

void add_field_options(CLI::App* app, FieldOptions& f) {
  app->add_option("--source", f.source, "field: ti, period2, nonti or uniform")
      ->check(CLI::IsMember({"ti", "period2", "nonti", "uniform"}))
      ->capture_default_str();
  app->add_option("--root-index", f.root_index, "symmetric TI root (ascending), default the largest");
  app->add_option("--t", f.t, "first path parameter (nonti)");
  app->add_option("--s", f.s, "second path parameter (nonti)");
  app->add_option("--depth", f.depth, "ball depth")->capture_default_str();
  app->add_option("--perturb", f.perturb, "added to every law component (negative controls)");
}

ModelParams make_params(const Common& c) {
  if (c.theta) {
    if (c.J || c.beta) throw UsageError("give either --theta or --J/--beta, not both");
    return ModelParams::from_theta(c.k, c.m, *c.theta);
  }
  if (!c.J || !c.beta) throw UsageError("model needs --J and --beta (or --theta)");
  return ModelParams::from_coupling(c.k, c.m, *c.J, *c.beta);
}

std::string format_or(const Common& c, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = c.format.empty() ? fallback : c.format;
  if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return f == a; }))
    throw UsageError("format " + f + " is not available for this command");
  return f;
}

struct Emitted {
  std::string body;
  json params = nullptr;
};

void emit(const Emitted& result, const Common& c, const std::string& command, const std::vector<std::string>& args,
          std::ostream& out, std::ostream& err) {
  json manifest{{"tool", "sosgibbs"},
                {"version", SOSGIBBS_VERSION},
                {"command", command},
                {"argv", args},
                {"params", result.params},
                {"seed", c.seed}};
  if (c.out.empty()) {
    out << result.body;
    err << manifest.dump() << '\n';
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + c.out);
  file << result.body;
  std::ofstream mf(c.out + ".manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("cannot open " + c.out + ".manifest.json");
  mf << manifest.dump(2) << '\n';
}

struct BuiltField {
  BoundaryLawField field;
  std::optional<NonTiField> nonti;
};

BuiltField build_source_field(const FieldOptions& f, const ModelParams& params) {
  if (f.depth < 1) throw UsageError("--depth must be at least 1");
  auto ball = std::make_shared<const Ball>(params.k(), f.depth);
  std::optional<NonTiField> nonti;
  BoundaryLawField field(ball, params.m());
  if (f.source == "uniform") {
    field = BoundaryLawField::constant(ball, ReducedLaw(params.m()));
  } else if (f.source == "ti") {
    if (params.m() != 2) throw UsageError("--source ti requires m = 2");
    const TiSolutionSet ti = solve_symmetric_ti(params);
    const int n = static_cast<int>(ti.symmetric_roots.size());
    const int index = f.root_index < 0 ? n - 1 : f.root_index;
    if (index >= n) throw UsageError("--root-index out of range: " + std::to_string(n) + " symmetric roots");
    field = BoundaryLawField::constant(ball, ReducedLaw{0.0, std::log(ti.symmetric_roots[static_cast<std::size_t>(index)])});
  } else if (f.source == "period2") {
    const auto sols = solve_period2_full(params);
    auto it = std::find_if(sols.begin(), sols.end(), [](const Period2Solution& s) { return s.type == Period2Type::Cycle; });
    if (it == sols.end()) it = sols.begin();
    if (it == sols.end()) throw std::runtime_error("no period-2 solution found");
    const auto& full = *it->full;
    const std::array<ReducedLaw, 2> laws{ReducedLaw{std::log(full[0][0]), std::log(full[0][1])},
                                         ReducedLaw{std::log(full[1][0]), std::log(full[1][1])}};
    field = expand_periodic(ball, SubgroupSpec::even_length(params.k()), laws);
  } else {
    nonti = build_field(f.t, f.s, params, f.depth);
    field = nonti->field;
  }
  if (!field.has_root()) field.set_root_from_successors(params.theta());
  if (f.perturb != 0.0) {
    for (int v = 0; v < ball->size(); ++v) {
      ReducedLaw h = field.law(v);
      for (int i = 0; i < h.m(); ++i) h[i] += f.perturb;
      field.set(v, std::move(h));
    }
  }
  return {std::move(field), std::move(nonti)};
}

Emitted cmd_solve_ti(const Common& c) {
  const ModelParams params = make_params(c);
  const std::string format = format_or(c, "json", {"json", "csv"});
  if (params.m() != 2) {
    const IterationReport r = general_m_iterate(params, ReducedLaw(params.m()), 100000, 1e-13);
    if (format == "csv") throw UsageError("csv output needs m = 2");
    json j{{"params", to_json(params)},
           {"iteration", {{"limit", r.limit.values()}, {"converged", r.converged}, {"iterations", r.iterations},
                          {"residual", r.residual}, {"symmetric", r.symmetric}}}};
    return {j.dump(2) + "\n", to_json(params)};
  }
  const TiSolutionSet set = solve_ti(params);
  if (format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : set.full_solutions) rows.push_back({format_double(s[0]), format_double(s[1])});
    return {csv({"z0", "z1"}, rows), to_json(params)};
  }
  json j = to_json(set);
  j["params"] = to_json(params);
  j["beta_cr"] = !params.theta_given() && params.J() < 0.0 && params.k() >= 2 ? json(critical_beta1(params.J(), params.k()))
                                                                             : json(nullptr);
  return {j.dump(2) + "\n", to_json(params)};
}

Emitted cmd_critical_beta(const Common& c) {
  if (!c.J) throw UsageError("critical-beta needs --J");
  format_or(c, "json", {"json"});
  const double beta_cr = critical_beta1(*c.J, c.k);
  const ModelParams base = ModelParams::from_coupling(c.k, 2, *c.J, 0.0);
  auto count = [&](double beta) { return solve_symmetric_ti(base.with_beta(beta)).symmetric_roots.size(); };
  double hi = std::max(beta_cr, 1e-3);
  while (count(hi) < 3 && hi < 1e3) hi *= 1.5;
  json j{{"k", c.k}, {"J", *c.J}, {"beta_cr", beta_cr}};
  j["count_transition"] = count(hi) >= 3 ? json(locate_count_transition(base, 0.0, hi, 1e-10)) : json(nullptr);
  return {j.dump(2) + "\n", j};
}

struct SweepOptions {
  double beta_min = 0.0;
  double beta_max = 0.0;
  double step = 1e-3;
};

Emitted cmd_phase_diagram(const Common& c, const SweepOptions& sweep) {
  if (!c.J) throw UsageError("phase-diagram needs --J");
  if (c.m != 2) throw UsageError("phase-diagram requires m = 2");
  if (!(sweep.step > 0.0) || !(sweep.beta_max >= sweep.beta_min) || sweep.beta_min < 0.0)
    throw UsageError("bad beta range");
  const std::string format = format_or(c, "csv", {"csv", "json"});
  const auto n = static_cast<int>(std::floor((sweep.beta_max - sweep.beta_min) / sweep.step + 1e-9)) + 1;
  const ModelParams base = ModelParams::from_coupling(c.k, 2, *c.J, 0.0);
  std::vector<double> betas(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> roots(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    betas[static_cast<std::size_t>(i)] = sweep.beta_min + i * sweep.step;
    roots[static_cast<std::size_t>(i)] = solve_symmetric_ti(base.with_beta(betas[static_cast<std::size_t>(i)])).symmetric_roots;
  }
  const double beta_cr = *c.J < 0.0 && c.k >= 2 ? critical_beta1(*c.J, c.k) : std::nan("");
  std::vector<std::vector<std::string>> rows;
  json jrows = json::array();
  for (int i = 0; i < n; ++i) {
    const auto& r = roots[static_cast<std::size_t>(i)];
    const double b = betas[static_cast<std::size_t>(i)];
    const bool flag = i > 0 && betas[static_cast<std::size_t>(i - 1)] < beta_cr && beta_cr <= b;
    std::string lo, mid, hi;
    if (r.size() == 3) {
      lo = format_double(r[0]);
      mid = format_double(r[1]);
      hi = format_double(r[2]);
    } else if (r.size() == 1) {
      mid = format_double(r[0]);
    } else if (r.size() == 2) {
      lo = format_double(r[0]);
      hi = format_double(r[1]);
    }
    rows.push_back({format_double(b), std::to_string(r.size()), lo, mid, hi, flag ? "1" : "0"});
    jrows.push_back({{"beta", b}, {"root_count", r.size()}, {"roots", r}, {"beta_cr_flag", flag}});
  }
  json params{{"k", c.k}, {"J", *c.J}, {"beta_min", sweep.beta_min}, {"beta_max", sweep.beta_max}, {"step", sweep.step}};
  if (format == "json") return {json{{"params", params}, {"rows", jrows}}.dump(2) + "\n", params};
  return {csv({"beta", "root_count", "z_minus", "z_mid", "z_plus", "beta_cr_flag"}, rows), params};
}

SubgroupSpec parse_subgroup(const std::string& text, int k) {
  if (text == "full") return SubgroupSpec::even_length(k);
  std::vector<int> a;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      a.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("bad --subgroup entry '" + item + "'");
    }
  }
  for (int g : a)
    if (g < 1 || g > k + 1) throw UsageError("--subgroup letters must lie in 1..k+1");
  return SubgroupSpec(k, a);
}

Emitted cmd_solve_periodic(const Common& c, const std::string& subgroup) {
  const ModelParams params = make_params(c);
  if (params.m() != 2) throw UsageError("solve-periodic requires m = 2");
  format_or(c, "json", {"json"});
  const SubgroupSpec spec = parse_subgroup(subgroup, params.k());
  const PeriodicReport report = classify_periodic(spec, params);
  json j = to_json(report, params);
  json four = json::array();
  for (const auto& s : solve_period2_full(params)) four.push_back(to_json(s));
  j["four_dimensional_solutions"] = std::move(four);
  return {j.dump(2) + "\n", to_json(params)};
}

Emitted cmd_build_nonti(const Common& c, const FieldOptions& f) {
  const ModelParams params = make_params(c);
  format_or(c, "json", {"json"});
  const NonTiField field = build_field(f.t, f.s, params, f.depth);
  json j = to_json(field);
  j["params"] = to_json(params);
  return {j.dump(2) + "\n", to_json(params)};
}

Emitted cmd_sample(const Common& c, const FieldOptions& f, int count) {
  const ModelParams params = make_params(c);
  format_or(c, "csv", {"csv"});
  if (count < 0) throw UsageError("--count must be nonnegative");
  const BuiltField built = build_source_field(f, params);
  const auto samples = sample(built.field, params, f.depth, c.seed, count);
  return {samples_csv(built.field.ball(), samples), to_json(params)};
}

struct Check {
  std::string name;
  std::optional<double> value;
  double tolerance = 0.0;
  bool pass = true;
  std::string note;
};

Emitted cmd_verify(const Common& c, const FieldOptions& f, bool& all_pass) {
  const ModelParams params = make_params(c);
  format_or(c, "json", {"json"});
  const BuiltField built = build_source_field(f, params);
  const BoundaryLawField& field = built.field;
  const double theta = params.theta();
  std::vector<Check> checks;
  auto add = [&](std::string name, double value, double tol) {
    checks.push_back({std::move(name), value, tol, value <= tol, ""});
  };
  auto skip = [&](std::string name, std::string why) { checks.push_back({std::move(name), std::nullopt, 0.0, true, std::move(why)}); };

  add("compatibility_residual", compatibility_residual(field, theta), 1e-10);
  try {
    add("compatibility_oracle", compatibility_oracle(field, f.depth, params), 1e-10);
    add("dlr_oracle", dlr_oracle(field, f.depth - 1, params).max(), 1e-10);
  } catch (const std::length_error& e) {
    skip("enumeration_oracles", e.what());
  }
  bool symmetric_field = true;
  for (int v = 0; v < field.ball().size(); ++v)
    symmetric_field = symmetric_field && max_abs_diff(flipped(field.law(v)), field.law(v)) <= 1e-12;
  if (symmetric_field) {
    try {
      add("flip_symmetry", flip_distance(field, f.depth, params), 1e-10);
    } catch (const std::length_error& e) {
      skip("flip_symmetry", e.what());
    }
  } else {
    skip("flip_symmetry", "field is not flip-symmetric");
  }
  if (params.m() == 2) {
    const DerivativeBoundReport bounds = derivative_bound_check(theta, 1000, c.seed);
    checks.push_back({"derivative_bounds", static_cast<double>(bounds.violations[0] + bounds.violations[1] +
                                                               bounds.violations[2] + bounds.violations[3]),
                      0.0, bounds.ok(), ""});
  }
  if (built.nonti) {
    const auto& lab = built.nonti->labels;
    double excess = 0.0;
    for (int v = 0; v < field.ball().size(); ++v) {
      const ReducedLaw& h = field.law(v);
      if (v == 0) continue;
      excess = std::max(excess, std::abs(h[0]));
      const double z1 = std::exp(h[1]);
      excess = std::max({excess, lab[0] - z1 - 1e-9, z1 - lab[2] - 1e-9});
    }
    add("sandwich", excess, 0.0);
  }

  json jc = json::array();
  all_pass = true;
  for (const Check& ch : checks) {
    all_pass = all_pass && ch.pass;
    json e{{"name", ch.name}, {"pass", ch.pass}, {"tolerance", ch.tolerance}};
    e["value"] = ch.value ? json(*ch.value) : json(nullptr);
    if (!ch.note.empty()) e["note"] = ch.note;
    jc.push_back(std::move(e));
  }
  json j{{"params", to_json(params)}, {"source", f.source}, {"depth", f.depth}, {"checks", jc}, {"pass", all_pass}};
  return {j.dump(2) + "\n", to_json(params)};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Splitting Gibbs measures of the SOS model on Cayley trees"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SOSGIBBS_VERSION);
  // Option defaults from a TOML/INI file, one [command] section per subcommand.
  app.set_config("--config", "", "option defaults, keys under a [command] section");
  app.fallthrough();

  Common common;
  FieldOptions field;
  SweepOptions sweep;
  std::string subgroup = "full";
  int count = 1000;

  auto* solve_ti_cmd = app.add_subcommand("solve-ti", "translation-invariant solutions");
  add_common(solve_ti_cmd, common, false);
  auto* crit = app.add_subcommand("critical-beta", "critical inverse temperature and the observed count transition");
  crit->add_option("--k", common.k)->capture_default_str();
  crit->add_option("--J", common.J)->required();
  crit->add_option("--out", common.out);
  crit->add_option("--format", common.format)->check(CLI::IsMember({"json"}));
  auto* phase = app.add_subcommand("phase-diagram", "symmetric root count over a beta sweep");
  add_common(phase, common, false);
  phase->add_option("--beta-min", sweep.beta_min)->required();
  phase->add_option("--beta-max", sweep.beta_max)->required();
  phase->add_option("--step", sweep.step)->capture_default_str();
  auto* periodic = app.add_subcommand("solve-periodic", "periodic solutions for a parity subgroup");
  add_common(periodic, common, false);
  periodic->add_option("--subgroup", subgroup, "'full' (even-length words) or generator list like 1,2")->capture_default_str();
  auto* nonti = app.add_subcommand("build-nonti", "non translation-invariant field from two paths");
  add_common(nonti, common, false);
  nonti->add_option("--t", field.t)->required();
  nonti->add_option("--s", field.s)->required();
  nonti->add_option("--depth", field.depth)->capture_default_str();
  auto* samp = app.add_subcommand("sample", "forward samples on a ball");
  add_common(samp, common, true);
  add_field_options(samp, field);
  samp->add_option("--count", count)->capture_default_str();
  auto* verify = app.add_subcommand("verify", "run the oracle suite on a field");
  add_common(verify, common, true);
  add_field_options(verify, field);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << SOSGIBBS_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    bool pass = true;
    Emitted result;
    std::string name;
    if (solve_ti_cmd->parsed()) {
      name = "solve-ti";
      result = cmd_solve_ti(common);
    } else if (crit->parsed()) {
      name = "critical-beta";
      result = cmd_critical_beta(common);
    } else if (phase->parsed()) {
      name = "phase-diagram";
      result = cmd_phase_diagram(common, sweep);
    } else if (periodic->parsed()) {
      name = "solve-periodic";
      result = cmd_solve_periodic(common, subgroup);
    } else if (nonti->parsed()) {
      name = "build-nonti";
      result = cmd_build_nonti(common, field);
    } else if (samp->parsed()) {
      name = "sample";
      result = cmd_sample(common, field, count);
    } else {
      name = "verify";
      result = cmd_verify(common, field, pass);
    }
    emit(result, common, name, args, out, err);
    return pass ? kOk : kVerificationFailed;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace sosgibbs::cli

#include "sosgibbs/serialize.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace sosgibbs {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return {buf, res.ptr};
}

json to_json(const ModelParams& params) {
  json j{{"k", params.k()}, {"m", params.m()}, {"theta", params.theta()}, {"regime", to_string(params.regime())}};
  if (params.theta_given()) {
    j["theta_given"] = true;
  } else {
    j["J"] = params.J();
    j["beta"] = params.beta();
  }
  return j;
}

json to_json(const BoundaryLawField& field) {
  json laws = json::array();
  for (int v = 1; v < field.ball().size(); ++v)
    laws.push_back({{"vertex", field.ball().vertex(v).to_string()}, {"h", field.law(v).values()}});
  return {{"k", field.ball().k()},
          {"m", field.m()},
          {"depth", field.depth()},
          {"root", field.has_root() ? json(field.root().values()) : json(nullptr)},
          {"entries", std::move(laws)}};
}

json to_json(const TiSolutionSet& set) {
  json full = json::array();
  for (const auto& s : set.full_solutions) full.push_back(json::array({s[0], s[1]}));
  json j{{"classification", to_string(set.classification)},
         {"symmetric_roots", set.symmetric_roots},
         {"full_solutions", std::move(full)},
         {"full_search", "exploratory grid scan with Newton refinement"}};
  if (set.labels) j["labels"] = {{"z_minus", (*set.labels)[0]}, {"z_mid", (*set.labels)[1]}, {"z_plus", (*set.labels)[2]}};
  return j;
}

json to_json(const Period2Solution& s) {
  json j{{"type", to_string(s.type)}, {"z", s.z}, {"t", s.t}, {"residual", s.residual}};
  if (s.full) j["full"] = {{"z", (*s.full)[0]}, {"t", (*s.full)[1]}};
  return j;
}

json to_json(const PeriodicReport& report, const ModelParams& params) {
  json sols = json::array();
  for (const auto& s : report.solutions) sols.push_back(to_json(s));
  json j{{"params", to_json(params)},
         {"subgroup", {{"A", report.parity_set}}},
         {"I_nonempty", report.i_nonempty},
         {"statement", report.statement},
         {"solutions", std::move(sols)}};
  j["condition_414"] = report.condition ? json{{"value", report.condition->value}, {"holds", report.condition->holds}}
                                        : json(nullptr);
  return j;
}

json to_json(const NonTiField& field) {
  json j = to_json(field.field);
  j["t"] = field.t;
  j["s"] = field.s;
  j["labels"] = {{"z_minus", field.labels[0]}, {"z_mid", field.labels[1]}, {"z_plus", field.labels[2]}};
  json comp = json::object();
  for (int v = 0; v < field.field.ball().size(); ++v)
    comp[field.field.ball().vertex(v).to_string()] = field.component[static_cast<std::size_t>(v)];
  j["component_map"] = std::move(comp);
  return j;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string samples_csv(const Ball& ball, const std::vector<SpinConfig>& samples) {
  std::string out;
  const int n = samples.empty() ? 0 : static_cast<int>(samples.front().spins.size());
  for (int v = 0; v < n; ++v) {
    if (v) out += ',';
    out += ball.vertex(v).to_string();
  }
  out += '\n';
  for (const auto& s : samples) {
    for (std::size_t v = 0; v < s.spins.size(); ++v) {
      if (v) out += ',';
      out += std::to_string(s.spins[v]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace sosgibbs

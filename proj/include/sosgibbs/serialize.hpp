#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sosgibbs/boundary_law.hpp"
#include "sosgibbs/model.hpp"
#include "sosgibbs/nonperiodic.hpp"
#include "sosgibbs/periodic_solver.hpp"
#include "sosgibbs/ti_solver.hpp"

namespace sosgibbs {

// 17 significant digits, '.' decimal point regardless of locale.
std::string format_double(double x);

nlohmann::json to_json(const ModelParams& params);
// {k, m, depth, root: [...] | null, entries: [{vertex, h}, ...]} over non-root vertices.
nlohmann::json to_json(const BoundaryLawField& field);
nlohmann::json to_json(const TiSolutionSet& set);
nlohmann::json to_json(const Period2Solution& s);
nlohmann::json to_json(const PeriodicReport& report, const ModelParams& params);
nlohmann::json to_json(const NonTiField& field);

// Header of vertex words, then one row per configuration; LF line endings.
std::string samples_csv(const Ball& ball, const std::vector<SpinConfig>& samples);

// Generic CSV writer: header plus rows of already formatted cells.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace sosgibbs

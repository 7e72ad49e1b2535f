#pragma once

#include <string>

#include <json.hpp>

#include "causalid/estimate.hpp"
#include "causalid/identify.hpp"

namespace causalid::io {

using json = nlohmann::json;

json to_json(const Grid& grid);
GridPtr grid_from_json(const json& j);

json table_to_json(const GridPtr& grid, const std::vector<double>& raw);
std::vector<double> table_from_json(const GridPtr& grid, const json& j, const char* what);

json to_json(const ObservationalStudy& study);
ObservationalStudy study_from_json(const json& j);

json samples_to_json(const GridPtr& grid, const SampleVec& samples);
std::pair<GridPtr, SampleVec> samples_from_json(const json& j);

json to_json(const Polynomial& poly);
Polynomial polynomial_from_json(const json& j);

json to_json(const ClassPair& pair);
ClassPair class_pair_from_json(const json& j);

json to_json(const EstimateReport& report);

json to_json(const ConditionVerdict& verdict);

/// Certificate for a counterexample pair: the shared censored law and the
/// effect gaps. The two studies are written separately.
json certificate_to_json(const CounterexamplePair& cex);

json censored_to_json(const CensoredPMF& cpmf);

/// Number rendered with 12 significant digits, as used in CSV rows.
std::string format_number(double v);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

} // namespace causalid::io

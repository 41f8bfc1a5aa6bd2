#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "lureid/dynamic_ident.hpp"
#include "lureid/rational_tf.hpp"
#include "lureid/simulator.hpp"
#include "lureid/static_ident.hpp"
#include "lureid/static_nl.hpp"

namespace lureid {

using Json = nlohmann::json;

/// CSV: RFC-4180-style, header row, '.' decimal separator, 17 significant
/// digits. All columns must have equal length.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& headers,
               const std::vector<const std::vector<double>*>& columns);

std::string format_full(double value);

/// {"num": [...], "den": [...]} with descending powers of s.
Json to_json(const RationalTF& tf);
RationalTF tf_from_json(const Json& j);

/// {"a1": r, "terms": [{"coeff", "kind", "param"}]}.
Json to_json(const StaticNL& nl);
StaticNL nl_from_json(const Json& j);

/// {"g": {...}, "h": {...}} with an optional "name".
Json to_json(const LureModel& model);
LureModel lure_model_from_json(const Json& j);

Json to_json(const StaticFit& fit);
StaticFit static_fit_from_json(const Json& j);

Json to_json(const FrfEstimate& frf);

Json to_json(const IdentifiedModel& model);
IdentifiedModel identified_model_from_json(const Json& j);

/// Record CSV (t, v_r, v_m, i_m[, v, i]) plus a sidecar metadata document.
void write_record(const std::filesystem::path& csv_path, const SampledRecord& record);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace lureid

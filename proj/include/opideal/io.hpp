#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "opideal/amenable.hpp"
#include "opideal/classical.hpp"
#include "opideal/linalg.hpp"
#include "opideal/nest.hpp"

namespace opideal::io {

using nlohmann::json;

/// {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

/// {"basis": <matrix>, "dims": [d1, ..., n]}
json flag_to_json(const Flag& f);
Flag flag_from_json(const json& j);

/// {"order": n, "table": [[...]], "labels": [...]}
json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const json& j);

/// {"weights": [w0, w1, ...]} with each weight a number or [re, im].
json functional_to_json(const Functional& f);
Functional functional_from_json(const json& j);

/// {"type": "AIII", "n": 4, "split": [2, 2]}; missing antilinear data
/// gets the standard defaults.
std::pair<ClassicalType, StructureData> structure_from_json(const json& j);

/// One nonnegative real per line; blank lines and '#' comments skipped.
std::vector<double> parse_sequence_csv(const std::string& text);

std::string read_text_file(const std::string& path);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Real numbers as JSON; +-inf become the strings "inf" / "-inf".
json real_to_json(double v);

} // namespace opideal::io

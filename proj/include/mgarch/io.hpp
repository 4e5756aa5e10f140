#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "mgarch/aggregation.hpp"
#include "mgarch/asymptotics.hpp"
#include "mgarch/simulate.hpp"

namespace mgarch::io {

using json = nlohmann::json;

json matrix_to_json(const Matrix& m);  // row-major nested arrays
Matrix matrix_from_json(const json& j, const char* what);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j, const char* what);
json complex_to_json(const ComplexVector& v);  // [{"re": .., "im": ..}, ...]

/// {"d": int, "c": [..], "A": [[..]], "B": [[..]]}
json spec_to_json(const GarchSpec& spec);
GarchSpec spec_from_json(const json& j);

/// {"h": [..], "M0": [[..]], "M1": [[..]], "M2": [[..]]}
json moments_to_json(const MomentSet& ms);
MomentSet moments_from_json(const json& j);

json diagnostics_to_json(const Diagnostics& d);
json report_to_json(const EstimateReport& rep);
json asymptotics_to_json(const AsymptoticReport& rep);
json aggregated_to_json(const AggregatedSpec& agg);

/// Reads a JSON document; InvalidInput on I/O or parse failure.
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

/// Accepts either a bare nested array or an object with the given key.
Matrix read_matrix_file(const std::string& path, const char* key);

/// Returns CSV with header y1,...,yd and one row per observation, 17 significant digits.
void write_returns_csv(std::ostream& os, const Matrix& y);
void write_returns_csv(const std::string& path, const Matrix& y);
Matrix read_returns_csv(std::istream& is);
Matrix read_returns_csv(const std::string& path);

}  // namespace mgarch::io

#pragma once

#include <string>

#include <json.hpp>

#include "limlab/diagnostics.hpp"
#include "limlab/limits.hpp"
#include "limlab/rp.hpp"
#include "limlab/weights.hpp"
#include "limlab/witnesses.hpp"

namespace limlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

/// {kind, d, params}. Throws SpecError on malformed documents.
Json weight_to_json(const WeightSpec& spec);
WeightSpec weight_from_json(const Json& doc);

/// {kind, d, params}; "axis_chain" {i_min, i_max} is accepted as input shorthand.
Json function_to_json(const TestFunction& fn);
TestFunction function_from_json(const Json& doc);

Json to_json(const Vec& v);
Vec vec_from_json(const Json& doc);
Json to_json(const Cube& q);
Json to_json(const MassEstimate& m);
Json to_json(const RpReport& r);
Json to_json(const RpSweep& s);
Json to_json(const ApEstimate& a);
Json to_json(const ApMembership& a);
Json to_json(const DoublingEstimate& d);
Json to_json(const InfimumReport& r);
Json to_json(const TraceReport& r);
Json to_json(const LimitCensus& c);
Json to_json(const DivergenceWitness& w);

/// Parse a JSON document from a file; throws SpecError with the path on failure.
Json read_json_file(const std::string& path);

/// Write text to `path` via a temporary sibling and rename.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace limlab

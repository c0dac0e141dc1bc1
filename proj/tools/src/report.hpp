#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cmk/config.hpp"
#include "cmk/continuation.hpp"
#include "cmk/diagnostics.hpp"

namespace cmk::cli {

using nlohmann::json;

json to_json(const TraceStep& s);
json to_json(const AfCheck& a);
json to_json(const DiagnosticsReport& d);
json to_json(const ResidualReport& r);
json parameters_json(const ProblemSpec& spec);

void write_json(const std::string& path, const json& j);
void write_trace_jsonl(const std::string& path, const SolveTrace& trace);

}  // namespace cmk::cli

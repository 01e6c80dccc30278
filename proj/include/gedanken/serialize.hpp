#pragma once

// JSON forms of reports, transcripts and diagrams. Field order is fixed
// (ordered_json), so identical inputs dump to identical bytes.

#include "json.hpp"

#include "gedanken/channels.hpp"
#include "gedanken/qstate.hpp"
#include "gedanken/relativity.hpp"
#include "gedanken/scenario.hpp"
#include "gedanken/teleport.hpp"

namespace gedanken::serialize {

using Json = nlohmann::ordered_json;

/// Complex numbers are [re, im] pairs; matrices are row-major lists of rows.
Json to_json(const qstate::StateVector& state);
Json to_json(const qstate::Matrix& matrix);
Json to_json(const relativity::SpacetimeEvent& event);
Json to_json(const teleport::TeleportTranscript& transcript);
Json to_json(const channels::LinearityReport& report);
Json to_json(const scenario::ScenarioConfig& config);
Json to_json(const scenario::ScenarioReport& report);
Json to_json(const scenario::DiagramData& diagram);

/// Read a matrix written by to_json(Matrix).
qstate::Matrix matrix_from_json(const Json& json);

/// Non-finite speeds are written as the string "inf"; reading accepts that
/// string or a number.
double speed_from_json(const Json& json);

/// Overlay the fields present in `json` onto `config`. Unknown keys throw
/// ValidationError; the result is not validated.
void merge_config(scenario::ScenarioConfig& config, const Json& json);

}  // namespace gedanken::serialize

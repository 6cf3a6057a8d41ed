#pragma once

#include <string>

#include <json.hpp>

#include "hmiv/checker.hpp"
#include "hmiv/coexec.hpp"
#include "hmiv/document.hpp"
#include "hmiv/petri.hpp"
#include "hmiv/statechart.hpp"
#include "hmiv/taskmodel.hpp"

// Structured output. Keys keep insertion order; see docs/json-schema.md.
namespace hmiv::json {

using Json = nlohmann::ordered_json;

Json document(const Document& doc);

// Rendered device display. Models shaped like the FCU (modes STD/QNH/
// EDIT_PRESSURE, variables display and units, optional buffer) use the FCU
// rendering; any other model shows its mode name.
std::string display_text(const StatechartModel& m, const SystemState& s);

// {mode, variables: {name: value-as-string}, display, enabled: [events]}
Json state(const StatechartModel& m, const SystemState& s);

Json diagnostic(const Diagnostic& d);
Json obligation(const check::Obligation& ob);
Json verdict(const StatechartModel& m, const check::Verdict& v);
Json analysis(const petri::PetriNet& net, const petri::AnalysisReport& r);
Json workload(const task::WorkloadMetrics& w);
Json divergence(const coexec::DivergenceReport& d);

}  // namespace hmiv::json

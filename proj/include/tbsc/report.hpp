#pragma once

#include <string>

#include <json.hpp>

#include "tbsc/constructions.hpp"
#include "tbsc/gf2.hpp"
#include "tbsc/oracle.hpp"
#include "tbsc/relay.hpp"
#include "tbsc/streaming_code.hpp"

namespace tbsc {

// Insertion-ordered so that serialized documents are stable and diffable.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

std::string tool_version();

Json to_json(const BinMatrix& m);  // array of '0'/'1' row strings
BinMatrix matrix_from_json(const Json& j);

Json to_json(const DelayProfile& p);
DelayProfile profile_from_json(const Json& j);

Json to_json(const ErasureSchedule& s);  // sorted index array

/// Code dimensions plus every nonzero P_i.
Json to_json(const StreamCodeSpec& spec);
StreamCodeSpec stream_code_from_json(const Json& j);

/// Versioned spec manifest; spec_from_manifest(manifest(s)) == s.
Json manifest(const RelayNetworkSpec& spec);
RelayNetworkSpec spec_from_manifest(const Json& j);

Json to_json(const FeasibilityReport& rep);
Json to_json(const SimulationReport& rep);
Json to_json(const VerificationReport& rep);

/// Wraps a report body with schema and tool versions.
Json envelope(const std::string& kind, Json body);

}  // namespace tbsc

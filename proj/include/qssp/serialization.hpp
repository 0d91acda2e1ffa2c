#pragma once

#include "qssp/capacity.hpp"
#include "qssp/channel.hpp"
#include "qssp/scheduler.hpp"

#include <json.hpp>

#include <string_view>

namespace qssp::serialization {

using nlohmann::json;

/// Integer or the string "unbounded".
json capacity_to_json(Capacity c);
Capacity capacity_from_json(const json& j, std::string_view field);

/// Flat object keyed by the ChannelParams field names. Missing keys keep the
/// values of `base`; unknown keys are rejected.
json to_json(const channel::ChannelParams& p);
channel::ChannelParams channel_params_from_json(const json& j, channel::ChannelParams base = {});

/// {"satellites":[{"id","transmitters"}], "stations":[{"id","receivers"}],
///  "pairs":[{"id","a","b","max_connections"}], "weights":[{"satellite","pair","weight"}]}
json to_json(const scheduler::QsspInstance& inst);
scheduler::QsspInstance instance_from_json(const json& j);

/// {"objective": number, "assignment":[{"satellite","pair","x","weight"}]}
json to_json(const scheduler::QsspInstance& inst, const scheduler::Assignment& a);
scheduler::Assignment assignment_from_json(const scheduler::QsspInstance& inst, const json& j);

/// {"V1":[...], "V2":[...], "V3":[...], "edges":[[v1, v2, v3], ...]}
scheduler::ThreeDMInstance hypergraph_from_json(const json& j);
json to_json(const scheduler::ThreeDMInstance& h);

/// {"instance": {...}, "correspondence":[{"hyperedge":[...], "satellite", "pair"}]}
json to_json(const scheduler::ThreeDMInstance& h, const scheduler::Reduction& r);

/// Parses text, converting library exceptions into qssp::ParseError.
json parse(std::string_view text);

}  // namespace qssp::serialization

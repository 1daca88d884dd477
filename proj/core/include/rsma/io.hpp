#pragma once

#include <json.hpp>

#include "rsma/optimizer.hpp"

namespace rsma {

using json = nlohmann::json;

// Complex matrices serialize as {"r","c","v"} with row-major [re, im] pairs;
// doubles round-trip bit-exactly through the shortest-representation writer.
json matrix_to_json(const MatC& m);
MatC matrix_from_json(const json& j);

void to_json(json& j, const GeometryModel& g);
void from_json(const json& j, GeometryModel& g);
void to_json(json& j, const NetworkConfig& cfg);
void from_json(const json& j, NetworkConfig& cfg);
void to_json(json& j, const PrecoderSet& p);
void from_json(const json& j, PrecoderSet& p);
void to_json(json& j, const RISPhases& r);
void from_json(const json& j, RISPhases& r);
void to_json(json& j, const CommonRateSplit& s);
void from_json(const json& j, CommonRateSplit& s);
void to_json(json& j, const ChannelSet& ch);
void from_json(const json& j, ChannelSet& ch);
void to_json(json& j, const ConvergenceTrace& t);
void from_json(const json& j, ConvergenceTrace& t);
void to_json(json& j, const Allocation& a);
void from_json(const json& j, Allocation& a);

} // namespace rsma

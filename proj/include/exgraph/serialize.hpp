#pragma once

// JSON wire formats.
//
//   graph     {"format_version": 1, "n": 4, "edges": [[1,2],[3,4]]}   1-based, i < j, sorted
//   family    {"format_version": 1, "n": 3, "members": [[], [1,3]]}   sorted by bit pattern
//   cover     same shape as a family; members must form an antichain
//   schedule  {"kind": "geometric", "alpha": a, "c": c}
//             {"kind": "beta_uniform", "c": c}
//             {"kind": "moment_atoms", "atoms": [[x, w], ...]}
//             {"kind": "table", "n": n_max, "rows": {"3": [λ_3(0), ..., λ_3(3)], ...}}
//
// "format_version" is written on output and optional on input.

#include <json.hpp>

#include "exgraph/exact_inference.hpp"
#include "exgraph/rate_schedule.hpp"
#include "exgraph/sampler.hpp"
#include "exgraph/subset_lattice.hpp"

namespace exgraph {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::json;

// Parses text as JSON; malformed input raises ArgumentError.
Json parse_document(const std::string& text);

Json to_json(SubsetMask a);  // sorted element list
SubsetMask subset_from_json(const Json& doc, int n);

Json to_json(const SubsetFamily& family);
SubsetFamily family_from_json(const Json& doc);

Json to_json(const GeneratingClass& cover);
GeneratingClass cover_from_json(const Json& doc);

Json to_json(const Graph& graph);
Graph graph_from_json(const Json& doc);

Json to_json(const RateSchedule& schedule);
RateSchedule schedule_from_json(const Json& doc);

Json to_json(const PointProcessRealization& realization);
Json to_json(const PipelineSample& sample);

Json to_json(const ConsistencyReport& report);

}  // namespace exgraph

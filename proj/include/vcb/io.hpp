#pragma once

// JSON model and event files.
//
// Model:  {"n": 3, "edges": [[0,1],[1,2]], "node_params": [..n..],
//          "edge_params": [..|E|.. in the order of "edges"], "log_offset": 0.0}
// Event:  {"type": "node_marginal", "s": 0, "v": 1}
//         {"type": "pair_marginal", "s": 0, "t": 1, "vs": 1, "vt": -1}
//         {"type": "linear_threshold", "a": [..n..], "b": 2.0}
//         {"type": "explicit", "configs": [[1,-1,1], ...]}
//
// Parse failures throw InputError whose message names the offending key.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vcb/model.hpp"

namespace vcb {

ExponentialModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ExponentialModel& model);

// `n` is the node count of the model the event will be evaluated against.
Event event_from_json(const nlohmann::json& j, int n);
nlohmann::json event_to_json(const Event& event);

ExponentialModel load_model(const std::filesystem::path& path);
Event load_event(const std::filesystem::path& path, int n);

nlohmann::json bound_to_json(const BoundResult& result);

}  // namespace vcb

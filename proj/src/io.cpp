#include "vcb/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "vcb/error.hpp"

namespace vcb {

namespace {

using nlohmann::json;

const json& require_key(const json& j, const char* key) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing key \"") + key + "\"");
  return *it;
}

[[noreturn]] void bad_key(const char* key, const std::string& why) {
  throw InputError(std::string("invalid key \"") + key + "\": " + why);
}

int get_int(const json& j, const char* key) {
  const json& v = require_key(j, key);
  if (!v.is_number_integer()) bad_key(key, "expected an integer");
  return v.get<int>();
}

double get_real(const json& v, const char* key) {
  if (!v.is_number()) bad_key(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad_key(key, "expected a finite number");
  return x;
}

std::vector<double> get_reals(const json& j, const char* key) {
  const json& v = require_key(j, key);
  if (!v.is_array()) bad_key(key, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& x : v) out.push_back(get_real(x, key));
  return out;
}

Spin get_spin(const json& j, const char* key) {
  const int v = get_int(j, key);
  if (v != 1 && v != -1) bad_key(key, "expected a spin value, +1 or -1");
  return v;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace

ExponentialModel model_from_json(const json& j) {
  const int n = get_int(j, "n");
  if (n < 1) bad_key("n", "expected a positive node count");

  const json& edges_json = require_key(j, "edges");
  if (!edges_json.is_array()) bad_key("edges", "expected an array of [s, t] pairs");
  std::vector<Edge> edges;
  for (const json& pair : edges_json) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !pair[1].is_number_integer()) {
      bad_key("edges", "each entry must be an [s, t] pair of integers");
    }
    edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
  }

  std::vector<double> node_params = get_reals(j, "node_params");
  if (static_cast<int>(node_params.size()) != n) {
    bad_key("node_params", "expected " + std::to_string(n) + " entries, got " +
                               std::to_string(node_params.size()));
  }
  std::vector<double> edge_params = get_reals(j, "edge_params");
  if (edge_params.size() != edges.size()) {
    bad_key("edge_params", "expected " + std::to_string(edges.size()) + " entries, got " +
                               std::to_string(edge_params.size()));
  }
  double offset = 0.0;
  if (auto it = j.find("log_offset"); it != j.end()) offset = get_real(*it, "log_offset");

  try {
    return ExponentialModel::from_edge_list(n, edges, std::move(node_params), edge_params, offset);
  } catch (const InputError& e) {
    bad_key("edges", e.what());
  }
}

json model_to_json(const ExponentialModel& model) {
  json edges = json::array();
  for (const Edge& e : model.graph().edges()) edges.push_back({e.s, e.t});
  return json{{"n", model.num_nodes()},
              {"edges", edges},
              {"node_params", std::vector<double>(model.node_params().begin(), model.node_params().end())},
              {"edge_params", std::vector<double>(model.edge_params().begin(), model.edge_params().end())},
              {"log_offset", model.log_offset()}};
}

Event event_from_json(const json& j, int n) {
  const json& type_json = require_key(j, "type");
  if (!type_json.is_string()) bad_key("type", "expected a string");
  const std::string type = type_json.get<std::string>();

  auto checked = [n](Event ev, const char* key) {
    try {
      ev.validate(n);
    } catch (const InputError& e) {
      bad_key(key, e.what());
    }
    return ev;
  };

  if (type == "node_marginal") {
    const int s = get_int(j, "s");
    if (s < 0 || s >= n) bad_key("s", "node index out of range");
    return checked(NodeMarginal{s, get_spin(j, "v")}, "s");
  }
  if (type == "pair_marginal") {
    const int s = get_int(j, "s");
    const int t = get_int(j, "t");
    if (s < 0 || s >= n) bad_key("s", "node index out of range");
    if (t < 0 || t >= n || t == s) bad_key("t", "node index out of range or equal to s");
    return checked(PairMarginal{s, t, get_spin(j, "vs"), get_spin(j, "vt")}, "t");
  }
  if (type == "linear_threshold") {
    std::vector<double> a = get_reals(j, "a");
    if (static_cast<int>(a.size()) != n) {
      bad_key("a", "expected " + std::to_string(n) + " weights, got " + std::to_string(a.size()));
    }
    const double b = get_real(require_key(j, "b"), "b");
    return checked(LinearThreshold{std::move(a), b}, "a");
  }
  if (type == "explicit") {
    const json& cj = require_key(j, "configs");
    if (!cj.is_array() || cj.empty()) bad_key("configs", "expected a non-empty array of configurations");
    std::vector<Config> configs;
    for (const json& row : cj) {
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        bad_key("configs", "each configuration must be an array of " + std::to_string(n) + " spins");
      }
      std::vector<Spin> values;
      for (const json& v : row) {
        if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1)) {
          bad_key("configs", "entries must be +1 or -1");
        }
        values.push_back(v.get<int>());
      }
      configs.emplace_back(std::move(values));
    }
    return checked(ExplicitEvent{std::move(configs)}, "configs");
  }
  bad_key("type", "unknown event type \"" + type + "\"");
}

json event_to_json(const Event& event) {
  struct Visitor {
    json operator()(const NodeMarginal& e) const {
      return {{"type", "node_marginal"}, {"s", e.node}, {"v", e.value}};
    }
    json operator()(const PairMarginal& e) const {
      return {{"type", "pair_marginal"}, {"s", e.s}, {"t", e.t}, {"vs", e.vs}, {"vt", e.vt}};
    }
    json operator()(const LinearThreshold& e) const {
      return {{"type", "linear_threshold"}, {"a", e.weights}, {"b", e.threshold}};
    }
    json operator()(const ExplicitEvent& e) const {
      json rows = json::array();
      for (const Config& c : e.configs) {
        rows.push_back(std::vector<int>(c.values().begin(), c.values().end()));
      }
      return {{"type", "explicit"}, {"configs", rows}};
    }
  };
  return std::visit(Visitor{}, event.variant());
}

ExponentialModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path));
}

Event load_event(const std::filesystem::path& path, int n) {
  return event_from_json(read_json_file(path), n);
}

json bound_to_json(const BoundResult& r) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json diag{{"iterations", r.diagnostics.iterations},
            {"converged", r.diagnostics.converged},
            {"final_step", finite_or_null(r.diagnostics.final_step)},
            {"clipped", r.diagnostics.clipped},
            {"raw_value", finite_or_null(r.diagnostics.raw_value)}};
  if (!r.diagnostics.note.empty()) diag["note"] = r.diagnostics.note;
  return json{{"value", finite_or_null(r.value)},
              {"probability", std::exp(r.value)},
              {"direction", to_string(r.direction)},
              {"method", r.method},
              {"converged", r.diagnostics.converged},
              {"diagnostics", diag}};
}

}  // namespace vcb

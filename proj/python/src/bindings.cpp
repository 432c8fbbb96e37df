// Python bindings. Structured values cross the boundary as JSON text; the
// package __init__ turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vcb/classical.hpp"
#include "vcb/engine.hpp"
#include "vcb/error.hpp"
#include "vcb/exact.hpp"
#include "vcb/harness.hpp"
#include "vcb/io.hpp"

namespace py = pybind11;
using namespace vcb;

namespace {

MethodSelector selector(const std::string& up, const std::string& low) {
  return {parse_upper_method(up), parse_lower_method(low)};
}

ApproxConfig config_or_default(const std::optional<ApproxConfig>& c) { return c.value_or(ApproxConfig{}); }

LambdaOptions::Path parse_path(const std::string& s) {
  using P = LambdaOptions::Path;
  if (s == "auto") return P::automatic;
  if (s == "count") return P::count_direction;
  if (s == "full") return P::full;
  if (s == "node") return P::node_only;
  throw InputError("unknown lambda path \"" + s + "\" (expected auto, count, full or node)");
}

}  // namespace

PYBIND11_MODULE(_varchernoff, m) {
  m.doc() = "Variational Chernoff bounds for binary pairwise models";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ScaleExceeded>(m, "ScaleExceeded", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());

  py::class_<ExponentialModel>(m, "Model")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges, std::vector<double> node_params,
                       const std::vector<double>& edge_params, double log_offset) {
             std::vector<Edge> es;
             for (const auto& [s, t] : edges) es.push_back({s, t});
             return ExponentialModel::from_edge_list(n, es, std::move(node_params), edge_params, log_offset);
           }),
           py::arg("n"), py::arg("edges"), py::arg("node_params"), py::arg("edge_params"),
           py::arg("log_offset") = 0.0)
      .def_static("from_json", [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); })
      .def("to_json", [](const ExponentialModel& self) { return model_to_json(self).dump(); })
      .def_property_readonly("n", &ExponentialModel::num_nodes)
      .def_property_readonly("edges",
                             [](const ExponentialModel& self) {
                               std::vector<std::pair<int, int>> out;
                               for (const Edge& e : self.graph().edges()) out.emplace_back(e.s, e.t);
                               return out;
                             })
      .def_property_readonly("params", &ExponentialModel::params)
      .def_property_readonly("log_offset", &ExponentialModel::log_offset);

  py::class_<Event>(m, "Event")
      .def_static("from_json", [](const std::string& text, int n) { return event_from_json(nlohmann::json::parse(text), n); })
      .def_static("node_marginal", [](int s, int v) { return Event(NodeMarginal{s, v}); }, py::arg("s"), py::arg("v"))
      .def_static("pair_marginal", [](int s, int t, int vs, int vt) { return Event(PairMarginal{s, t, vs, vt}); },
                  py::arg("s"), py::arg("t"), py::arg("vs"), py::arg("vt"))
      .def_static("linear_threshold",
                  [](std::vector<double> w, double b) { return Event(LinearThreshold{std::move(w), b}); },
                  py::arg("weights"), py::arg("threshold"))
      .def_static("spin_sum_at_least", &Event::spin_sum_at_least, py::arg("n"), py::arg("min_sum"))
      .def("to_json", [](const Event& self) { return event_to_json(self).dump(); })
      .def_property_readonly("kind", &Event::kind);

  py::class_<ApproxConfig>(m, "ApproxConfig")
      .def(py::init<>())
      .def_readwrite("max_iterations", &ApproxConfig::max_iterations)
      .def_readwrite("tolerance", &ApproxConfig::tolerance)
      .def_readwrite("damping", &ApproxConfig::damping)
      .def_readwrite("restarts", &ApproxConfig::restarts)
      .def_readwrite("seed", &ApproxConfig::seed)
      .def_readwrite("mbest", &ApproxConfig::mbest);

  m.def("brute_phi", &brute_phi);
  m.def("tree_phi", &tree_phi);
  m.def("event_log_prob", &event_log_prob);
  m.def("chain_count_log_prob", [](const ExponentialModel& model, int k) {
    return chain_count_log_prob(ChainModel(model), k);
  });

  m.def("phi_bound",
        [](const ExponentialModel& model, const std::string& method, std::optional<ApproxConfig> cfg) {
          const ApproxConfig c = config_or_default(cfg);
          if (method == "mf" || method == "mbest") {
            return estimate_phi_lower(model, parse_lower_method(method), c).value;
          }
          return estimate_phi_upper(model, parse_upper_method(method), c).value;
        },
        py::arg("model"), py::arg("method"), py::arg("config") = py::none());

  m.def("bound_event",
        [](const ExponentialModel& model, const Event& event, const std::string& direction, const std::string& up,
           const std::string& low, std::optional<ApproxConfig> cfg) {
          const ApproxConfig c = config_or_default(cfg);
          const MethodSelector sel = selector(up, low);
          if (direction == "upper") return bound_to_json(bound_event_upper(model, event, sel, c)).dump();
          if (direction == "lower") return bound_to_json(bound_event_lower(model, event, sel, c)).dump();
          throw InputError("direction must be upper or lower");
        },
        py::arg("model"), py::arg("event"), py::arg("direction") = "upper", py::arg("phi_upper") = "trbp",
        py::arg("phi_lower") = "mf", py::arg("config") = py::none());

  m.def("lambda_bound",
        [](const ExponentialModel& model, const Event& event, const std::string& up, const std::string& low,
           const std::string& path, std::optional<int> iterations, std::optional<ApproxConfig> cfg) {
          LambdaOptions opts;
          opts.path = parse_path(path);
          opts.max_iterations = iterations;
          const LambdaBound lb = chernoff_lambda_bound(model, event, selector(up, low), config_or_default(cfg), opts);
          nlohmann::json j = bound_to_json(lb.bound);
          j["lambda"] = lb.lambda;
          j["ray_flagged"] = lb.ray_flagged;
          return j.dump();
        },
        py::arg("model"), py::arg("event"), py::arg("phi_upper") = "trbp", py::arg("phi_lower") = "mf",
        py::arg("path") = "auto", py::arg("max_iterations") = py::none(), py::arg("config") = py::none());

  m.def("tightness_check",
        [](const ExponentialModel& model, const Event& event, double tol) {
          const TightnessResult r = tightness_check(model, event, tol);
          return nlohmann::json{{"gap", r.gap}, {"bound", r.bound}, {"log_prob", r.log_prob},
                                {"lambda", r.lambda}, {"passed", r.passed}}.dump();
        },
        py::arg("model"), py::arg("event"), py::arg("tol") = 1e-3);

  m.def("table_csv",
        [](const std::string& graph, const std::string& coupling, double d_pot, double d_coup, int trials,
           std::uint64_t seed, const std::string& targets, const std::string& domain,
           const std::vector<std::string>& methods, std::optional<ApproxConfig> cfg) {
          TrialSpec spec{parse_graph_kind(graph), parse_coupling(coupling), d_pot, d_coup, trials, seed,
                         parse_domain(domain)};
          std::vector<TableMethod> chosen;
          for (const auto& name : methods) chosen.push_back(parse_table_method(name));
          if (chosen.empty()) chosen = all_table_methods();
          std::ostringstream os;
          write_table_csv(os, run_table(spec, parse_targets(targets), chosen, config_or_default(cfg)));
          return os.str();
        },
        py::arg("graph") = "grid3x3", py::arg("coupling") = "mixed", py::arg("d_pot") = 0.25,
        py::arg("d_coup") = 1.0, py::arg("trials") = 20, py::arg("seed") = 0, py::arg("targets") = "node",
        py::arg("domain") = "spin", py::arg("methods") = std::vector<std::string>{}, py::arg("config") = py::none());

  m.def("figure1",
        [](int n, double p, double delta, double theta_pair, int points, double lambda_max) {
          const Figure1Data d = figure1_data(n, p, delta, theta_pair, points, lambda_max);
          return nlohmann::json{{"lambda", d.lambda},
                                {"iid_objective", d.iid_objective},
                                {"markov_objective", d.markov_objective},
                                {"reference", d.reference}}.dump();
        },
        py::arg("n") = 30, py::arg("p") = 0.5, py::arg("delta") = 0.5, py::arg("theta_pair") = -1.0,
        py::arg("points") = 200, py::arg("lambda_max") = 3.0);

  m.def("binomial_log_upper_tail", &binomial_log_upper_tail, py::arg("n"), py::arg("p"), py::arg("k"));
}

// vcb: event-probability bounds for binary pairwise models.
//
// Exit codes: 0 success, 1 property violation, 2 input error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vcb/engine.hpp"
#include "vcb/error.hpp"
#include "vcb/harness.hpp"
#include "vcb/io.hpp"

namespace {

constexpr int kViolation = 1;
constexpr int kInputError = 2;
constexpr int kNumericFailure = 3;

void add_approx_flags(CLI::App* cmd, vcb::ApproxConfig& cfg) {
  cmd->add_option("--mf-restarts", cfg.restarts, "Random mean-field restarts");
  cmd->add_option("--trbp-damping", cfg.damping, "Message damping in [0, 1)");
  cmd->add_option("--max-iters", cfg.max_iterations, "Iteration cap per solver");
  cmd->add_option("--tol", cfg.tolerance, "Convergence tolerance");
  cmd->add_option("--seed", cfg.seed, "Seed for solver restarts");
  cmd->add_option("--mbest", cfg.mbest, "Configurations kept by the top-M lower bound");
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vcb::InputError("cannot open output file " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational Chernoff bounds on event probabilities"};
  app.require_subcommand(1);

  vcb::ApproxConfig cfg;

  // bound
  auto* bound = app.add_subcommand("bound", "Bound log p(X in C) for one model and event");
  std::string model_path, event_path, method = "upper", phi_upper = "trbp", phi_lower = "mf", path = "auto";
  int lambda_iters = -1;
  bound->add_option("--model", model_path, "Model JSON")->required();
  bound->add_option("--event", event_path, "Event JSON")->required();
  bound->add_option("--method", method, "upper, lower or lambda")
      ->check(CLI::IsMember({"upper", "lower", "lambda"}));
  bound->add_option("--phi-upper", phi_upper, "trbp, logdet or exact");
  bound->add_option("--phi-lower", phi_lower, "mf, mbest or exact");
  bound->add_option("--lambda-path", path, "auto, count, full or node")
      ->check(CLI::IsMember({"auto", "count", "full", "node"}));
  bound->add_option("--lambda-iters", lambda_iters, "Subgradient iterations for --method lambda");
  add_approx_flags(bound, cfg);

  // table
  auto* table = app.add_subcommand("table", "Marginal-error table over random models");
  std::string graph = "grid3x3", coupling = "mixed", targets = "node", out_csv = "-", methods, domain = "spin";
  vcb::TrialSpec spec;
  table->add_option("--graph", graph, "grid3x3 or full9");
  table->add_option("--coupling", coupling, "repulsive, mixed or attractive");
  table->add_option("--dpot", spec.d_pot, "Node parameter half-width");
  table->add_option("--dcoup", spec.d_coup, "Coupling strength");
  table->add_option("--trials", spec.trials, "Trials per table");
  table->add_option("--seed", spec.seed, "Model seed");
  table->add_option("--targets", targets, "node or pair");
  table->add_option("--domain", domain, "spin (default) or binary reading of the drawn parameters");
  table->add_option("--methods", methods, "Comma-separated subset of the four methods");
  table->add_option("--out", out_csv, "CSV output file ('-' for stdout)");
  table->add_option("--mf-restarts", cfg.restarts, "Random mean-field restarts");
  table->add_option("--trbp-damping", cfg.damping, "Message damping in [0, 1)");
  table->add_option("--max-iters", cfg.max_iterations, "Iteration cap per solver");
  table->add_option("--tol", cfg.tolerance, "Convergence tolerance");

  // fig1
  auto* fig = app.add_subcommand("fig1", "Tail-bound curves for iid and Markov trials");
  int fig_n = 30, points = 200;
  double p = 0.5, delta = 0.5, theta_pair = -1.0, lambda_max = 3.0;
  std::string fig_out = "fig1.csv";
  fig->add_option("--n", fig_n, "Number of trials");
  fig->add_option("--p", p, "Success probability");
  fig->add_option("--delta", delta, "Relative deviation");
  fig->add_option("--theta-pair", theta_pair, "Coupling between neighbouring successes");
  fig->add_option("--points", points, "Lambda grid size");
  fig->add_option("--lambda-max", lambda_max, "Right end of the lambda grid");
  fig->add_option("--out", fig_out, "CSV output; reference lines go to the same name with .json");

  // check
  auto* check = app.add_subcommand("check", "Run a property suite");
  std::string suite;
  std::uint64_t check_seed = 1;
  int count = -1;
  check->add_option("--suite", suite, "validity, tightness or oracles")
      ->required()
      ->check(CLI::IsMember({"validity", "tightness", "oracles"}));
  check->add_option("--seed", check_seed, "Seed for generated models");
  check->add_option("--count", count, "Models per cell (validity) or in total");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*bound) {
      const vcb::ExponentialModel model = vcb::load_model(model_path);
      const vcb::Event event = vcb::load_event(event_path, model.num_nodes());
      const vcb::MethodSelector sel{vcb::parse_upper_method(phi_upper), vcb::parse_lower_method(phi_lower)};
      nlohmann::json j;
      if (method == "upper") {
        j = vcb::bound_to_json(vcb::bound_event_upper(model, event, sel, cfg));
      } else if (method == "lower") {
        j = vcb::bound_to_json(vcb::bound_event_lower(model, event, sel, cfg));
      } else {
        vcb::LambdaOptions opts;
        using P = vcb::LambdaOptions::Path;
        opts.path = path == "count" ? P::count_direction : path == "full" ? P::full
                  : path == "node"  ? P::node_only        : P::automatic;
        if (lambda_iters >= 0) opts.max_iterations = lambda_iters;
        const vcb::LambdaBound lb = vcb::chernoff_lambda_bound(model, event, sel, cfg, opts);
        j = vcb::bound_to_json(lb.bound);
        j["lambda"] = lb.lambda;
        j["ray_flagged"] = lb.ray_flagged;
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*table) {
      spec.graph = vcb::parse_graph_kind(graph);
      spec.coupling = vcb::parse_coupling(coupling);
      spec.domain = vcb::parse_domain(domain);
      std::vector<vcb::TableMethod> chosen;
      if (methods.empty()) {
        chosen = vcb::all_table_methods();
      } else {
        std::stringstream ss(methods);
        for (std::string item; std::getline(ss, item, ',');) chosen.push_back(vcb::parse_table_method(item));
      }
      const auto rows = vcb::run_table(spec, vcb::parse_targets(targets), chosen, cfg);
      std::ostringstream csv;
      vcb::write_table_csv(csv, rows);
      write_text(out_csv, csv.str());
      int violations = 0;
      for (const auto& r : rows) {
        violations += r.violations;
        if (r.violations > 0) {
          std::cerr << vcb::to_string(r.method) << ": " << r.violations << " trials violate the bound\n";
        }
      }
      return violations > 0 ? kViolation : 0;
    }

    if (*fig) {
      const vcb::Figure1Data data = vcb::figure1_data(fig_n, p, delta, theta_pair, points, lambda_max);
      std::ostringstream csv;
      vcb::write_figure1_csv(csv, data);
      write_text(fig_out, csv.str());
      if (fig_out != "-") {
        std::filesystem::path side(fig_out);
        side.replace_extension(".json");
        write_text(side.string(), data.reference.dump(2) + "\n");
      } else {
        std::cerr << data.reference.dump(2) << "\n";
      }
      return 0;
    }

    if (*check) {
      vcb::SuiteReport rep;
      if (suite == "validity") {
        rep = vcb::run_validity_suite(check_seed, cfg, count > 0 ? count : 20);
      } else if (suite == "tightness") {
        rep = vcb::run_tightness_suite(check_seed, count > 0 ? count : 20);
      } else {
        rep = vcb::run_oracle_suite(check_seed, count > 0 ? count : 50);
      }
      for (const auto& line : rep.lines) std::cout << line << "\n";
      std::cout << (rep.passed() ? "PASS" : "FAIL") << " " << suite << " (" << rep.violations
                << " violations)\n";
      return rep.passed() ? 0 : kViolation;
    }
  } catch (const vcb::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const vcb::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const vcb::ScaleExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericFailure;
  }
  return 0;
}

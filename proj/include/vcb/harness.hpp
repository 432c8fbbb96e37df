#pragma once

// Random-model experiments: marginal-error tables, the tail-bound curves for
// iid and Markov trials, and the property suites behind `vcb check`.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcb/approx.hpp"
#include "vcb/model.hpp"

namespace vcb {

enum class GraphKind { grid3x3, full9 };
enum class Coupling { repulsive, mixed, attractive };
enum class Targets { node, pair };
enum class Domain { spin, binary };
enum class TableMethod { mf_tree_lower, mf_sdp_lower, tree_mf_upper, sdp_heuristic };

std::string to_string(GraphKind g);
std::string to_string(Coupling c);
std::string to_string(Targets t);
std::string to_string(Domain d);
std::string to_string(TableMethod m);
GraphKind parse_graph_kind(const std::string& s);
Coupling parse_coupling(const std::string& s);
Targets parse_targets(const std::string& s);
Domain parse_domain(const std::string& s);
TableMethod parse_table_method(const std::string& s);

const std::vector<TableMethod>& all_table_methods();

struct TrialSpec {
  GraphKind graph = GraphKind::grid3x3;
  Coupling coupling = Coupling::mixed;
  double d_pot = 0.25;
  double d_coup = 1.0;
  int trials = 20;
  std::uint64_t seed = 0;
  // spin: parameters are drawn in +/-1 form. binary: the same draws are read as
  // potentials over {0,1} variables and converted with binary_to_spin.
  Domain domain = Domain::spin;

  void validate() const;
};

Graph make_graph(GraphKind kind);

// Exact spin form of sum_s a_s b_s + sum_st a_st b_s b_t with b = (1 + x) / 2,
// where `potentials` holds the a's; constants go to the log offset.
ExponentialModel binary_to_spin(const ExponentialModel& potentials);

// Trial `trial_index` draws from an mt19937_64 seeded with seed ^ trial_index:
// node parameters first, then edge parameters in edge order.
ExponentialModel random_model(const TrialSpec& spec, int trial_index);

// Mean absolute difference; throws InputError on length mismatch or empty input.
double l1_error(std::span<const double> estimates, std::span<const double> truths);

struct TableRow {
  TableMethod method = TableMethod::mf_tree_lower;
  double mean_l1 = 0.0;
  double std_l1 = 0.0;  // sample standard deviation over kept trials
  int discarded = 0;
  int kept = 0;
  // Kept trials where a provable bound missed the exact probability by more than 1e-6.
  int violations = 0;
};

// Targets: p(x_s = +1) per node, or p(x_s = +1, x_t = +1) per edge.
std::vector<TableRow> run_table(const TrialSpec& spec, Targets targets,
                                std::span<const TableMethod> methods, const ApproxConfig& cfg);

void write_table_csv(std::ostream& os, std::span<const TableRow> rows);

struct Figure1Data {
  std::vector<double> lambda;
  std::vector<double> iid_objective;
  std::vector<double> markov_objective;
  nlohmann::json reference;  // horizontal lines and both parameterizations of the chain
};

// Curves over `points` values of lambda evenly spaced on [0, lambda_max].
Figure1Data figure1_data(int n, double p, double delta, double theta_pair, int points = 200,
                         double lambda_max = 3.0);

void write_figure1_csv(std::ostream& os, const Figure1Data& data);

// Outcome of a property suite: one line per check and the violation count.
struct SuiteReport {
  std::vector<std::string> lines;
  int violations = 0;
  bool passed() const { return violations == 0; }
};

SuiteReport run_validity_suite(std::uint64_t seed, const ApproxConfig& cfg, int trials_per_cell = 20);
SuiteReport run_tightness_suite(std::uint64_t seed, int models = 20);
SuiteReport run_oracle_suite(std::uint64_t seed, int models = 50);

// The six (graph, coupling) settings at both strengths used in the tables.
struct Cell {
  GraphKind graph;
  Coupling coupling;
  double d_pot;
  double d_coup;
};
const std::vector<Cell>& table_cells();

}  // namespace vcb

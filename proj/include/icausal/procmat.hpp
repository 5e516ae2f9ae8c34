#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icausal/choi.hpp"

namespace icausal {

std::string in_wire(int k);
std::string out_wire(int k);
std::string ancilla_wire(int n, std::size_t part = 0, std::size_t parts = 1);
std::string future_ancilla_wire(std::size_t part = 0, std::size_t parts = 1);

struct AgentWires {
  std::string name;
  std::string in;
  std::string out;
};

struct Layout {
  std::string past = "P";
  std::string future = "F";
  std::vector<AgentWires> agents;

  // agents named 1..n with wires A{k}.I / A{k}.O
  static Layout standard(int n_agents);
  std::vector<std::string> io_wires() const;
};

struct ProcessMatrix {
  LabeledOperator w;
  Layout layout;

  int wire_dim(const std::string& name) const;
  int d_past() const { return wire_dim(layout.past); }
  int d_future() const { return wire_dim(layout.future); }
  // d_P times the product of all agent output dims
  double expected_trace() const;
};

struct Instrument {
  std::vector<std::pair<std::string, std::vector<LabeledOperator>>> outcomes;

  double completeness_deviation() const;
  ChoiMatrix outcome_choi(std::size_t i) const;
};

// _X W = (1/d_X) 1^X (x) Tr_X W, keeping the wire order of W
LabeledOperator reduce_replace(const LabeledOperator& w, const std::vector<std::string>& wires);

LabeledOperator lv_project(const LabeledOperator& w, const Layout& layout);

struct PmReport {
  bool pass = false;
  double min_eig = 0.0;
  double trace = 0.0;
  double trace_dev = 0.0;
  double lv_dev = 0.0;
  double herm_dev = 0.0;
};

PmReport validate_process_matrix(const ProcessMatrix& pm, double tol = kDefaultTol);

struct BornResult {
  double probability = 0.0;
  LabeledOperator future_state;  // unnormalised state left on the future wires
};

// ops[i] is a Choi matrix on agent i's input and output wires; rho acts on the
// past wire and may be omitted when the past is trivial
BornResult born_probability(const ProcessMatrix& pm, const std::vector<ChoiMatrix>& ops,
                            const std::optional<LabeledOperator>& rho = std::nullopt);

// order lists agent positions in layout.agents, earliest first
bool is_fixed_order(const ProcessMatrix& pm, const std::vector<int>& order, double tol = kDefaultTol);

// Internal instruments of a classically controlled circuit. The branch key is the
// sequence of agents that already acted; the inner key is the next agent (0 = future).
struct InstrumentTree {
  int n_agents = 0;
  std::vector<int> d_in, d_out;  // indexed by agent - 1
  int d_past = 1, d_future = 1;
  std::vector<int> ancilla_dims;  // alpha_1 .. alpha_N, 1 when absent
  std::map<std::vector<int>, std::map<int, std::vector<LabeledOperator>>> branches;

  Signature branch_in(const std::vector<int>& prefix) const;
  Signature branch_out(const std::vector<int>& prefix, int next) const;
};

ProcessMatrix build_qccc(const InstrumentTree& tree, double tol = kDefaultTol);

}  // namespace icausal

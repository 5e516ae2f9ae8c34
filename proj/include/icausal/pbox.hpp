#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "icausal/cbox.hpp"
#include "icausal/qcqc.hpp"

namespace icausal {

enum class Extension { symmetrization, abort, custom };
const char* to_string(Extension e);

// A sequence representation with agents. Agent inputs arrive on slices
// in_base@t whose parts are labelled by agent name; the agent answers on
// out_base@O(t) with the same parts.
struct ProcessBox {
  SequenceRep rep;
  std::vector<AgentTiming> agents;
  std::string in_base = "I";
  std::string out_base = "O";
  std::string past;          // slice of the global past
  std::string future;        // slice of the global future
  std::string future_extra;  // optional internal output, index 0 carries nothing
  Extension kind = Extension::custom;
  int cap = kDefaultCap;

  int agent_index(const std::string& name) const;
};

ProcessBox relabel_positions(const ProcessBox& box, const std::map<int, int>& r);

struct LiftedLocalOp {
  LabeledOperator base;     // name.I -> name.O
  LabeledOperator lifted;   // product form over name.I@t (dim 1 + d_in) -> name.O@O(t)
  LabeledOperator notime;   // sum over t of A at t with vacuum projectors elsewhere
  AgentTiming timing;
};

LiftedLocalOp lift_local_op(const std::string& name, const Mat& a, const std::vector<int>& t_in,
                            const std::map<int, int>& o);

// Lift of all agents on one agent input slice: each part gets its agent's map
// on the system index and the identity on the extra index. With wsr set, basis
// states where one part holds two or more messages map to zero.
Mat lift_on_slice(const ProcessBox& box, const std::vector<Mat>& ops, const FockSlice& in, const FockSlice& out,
                  bool wsr = true);

// controls K (in this order) of agent k at level n of the symmetrization box
std::vector<AgentMask> symm_controls(const QcQc& q, int n, int k);
// payload of agent k's part at level n for system x, ancilla a and control K
int symm_payload(const QcQc& q, int n, int k, AgentMask K, int x, int a);

ProcessBox extend_symmetrization(const QcQc& q, int cap = kDefaultCap);
ProcessBox extend_abort(const QcQc& q, int cap = 2);
// the hand-built box with internal ancillas alpha (2) and alpha3 (vacuum + 4)
ProcessBox dynamical_parallel_box(const Vec& psi = Vec(), int cap = 2);

struct SimOptions {
  bool track_agents = false;  // flag wires flag:<agent> record who received a message
  bool wsr_agents = true;     // agents annihilate double deliveries instead of acting on each message
};

struct SimResult {
  LabeledVector out;
  double rejected = 0.0;       // weight removed by restricted step domains
  double wsr_violation = 0.0;  // weight of second deliveries (track_agents only)
  std::vector<double> activity;  // per agent, final weight fraction with a received message
};

// Runs the steps in order; after each step every agent input slice is replaced by
// the lifted agents' answer. ops follow box.agents.
SimResult simulate(const ProcessBox& box, const std::vector<Mat>& ops, const LabeledVector& input,
                   const SimOptions& opt = {});

// single message with payload psi on the past slice
LabeledVector past_message(const ProcessBox& box, const Vec& psi);

// Future isomorphism: a single future message j (with extra index 1 + e when
// future_extra is set) maps to j * d_extra + e. Everything else is leak.
Vec future_to_qc(const ProcessBox& box, const LabeledVector& out, int d_total, double& leak);

double accept_probability(const ProcessBox& box, const std::vector<Mat>& ops, const LabeledVector& input);

struct EquivalenceReport {
  bool pass = false;
  int trials = 0;
  double max_deviation = 0.0;
  std::vector<double> deviations;
};

// Random single-Kraus agents, one seed per trial (seed + trial).
EquivalenceReport check_operational_equivalence(const QcQc& q, const ProcessBox& pb, int trials = 20,
                                                double tol = kDefaultTol, std::uint64_t seed = 42);

struct UnitaryExtension {
  ProcessBox box;               // step n reads P'n and writes F'n
  std::vector<Mat> unitaries;   // rows: step outputs then junk; columns: (step input, P'n)
  std::vector<int> p_dims;
  std::vector<int> junk_dims;
  double unitarity_dev = 0.0;   // max over steps of |U^dag U - 1| and |U U^dag - 1|
  double reduction_dev = 0.0;   // max over steps of |U(. (x) |0>) - V (+) 0|

  int p_total() const;
};

// Completes every step to a unitary. Junk leaves on F'n (index 1 + j) with the
// step outputs at index 0, so the extension is again a sequence representation.
UnitaryExtension unitary_extension(const ProcessBox& pb, double tol = kDefaultTol);

// base input (x) p_state on P'1 ... P'N
LabeledVector extension_input(const UnitaryExtension& u, const LabeledVector& base, const Vec& p_state);

struct QcqcUnitaryExtension {
  QcQc q;
  int p_prime = 1;            // new past = old past (x) P'
  std::vector<int> ancillas;  // a'_1 .. a'_N, then alpha'_F
  double unitarity_dev = 0.0;
};

// Needs equal agent dimensions. Per level and agent set the collective map is
// completed to a unitary; ancillas grow to the smallest sizes that allow it.
QcqcUnitaryExtension unitary_extension(const QcQc& q);
// |w'> with P' = |0> against |w>, ancillas embedded
double extension_reduction_deviation(const QcQc& q, const QcqcUnitaryExtension& ext);

struct UnitaryEquivalenceReport {
  bool pass = false;
  double unitarity_dev = 0.0;
  double reduction_dev = 0.0;
  double equivalence_dev = 0.0;  // symmetrization box of q' against q'
  double restriction_dev = 0.0;  // that box with P' = |0> against the box of q
};

UnitaryEquivalenceReport check_unitary_equivalence(const QcQc& q, int trials = 20, double tol = kDefaultTol,
                                                   std::uint64_t seed = 42, int cap = 1);

struct ConstraintReport {
  bool pass = false;
  double lo_dev = 0.0;
  double osr_dev = 0.0;
  double time_dev = 0.0;
  double factor_dev = 0.0;
  double wsr_violation = 0.0;
  double min_activity = 1.0;
  std::vector<double> passive_gap;
  std::string witness;
};

// agents follow pb.agents
ConstraintReport check_pb_constraints(const ProcessBox& pb, const std::vector<LiftedLocalOp>& agents,
                                      double tol = kDefaultTol, std::uint64_t seed = 7);

// Link product of all parts over shared wire names, in the given order.
LabeledVector compose_boxes(const std::vector<LabeledVector>& parts);

struct CompositionReport {
  std::string mode;
  double born = 0.0;
  double total_probability = 0.0;
  double loop_activity = 0.0;
  double in_flight = 0.0;
  std::vector<double> single_delivery;  // Alice, Bob: probability of exactly one received message
  bool wsr = true;
};

// Two fixed-order wire processes in opposite orders, Alice applies X on the
// loop and Bob the identity.
CompositionReport loop_process_matrices();
CompositionReport loop_causal_boxes(int horizon = 8);

}  // namespace icausal

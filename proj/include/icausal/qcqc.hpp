#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "icausal/procmat.hpp"
#include "icausal/random.hpp"

namespace icausal {

using AgentMask = std::uint32_t;

inline int popcount(AgentMask m) { return __builtin_popcount(m); }
inline AgentMask bit(int k) { return AgentMask(1) << (k - 1); }
inline bool contains(AgentMask m, int k) { return (m & bit(k)) != 0; }

// A block V^{->to}_{K,k}: k = 0 is the global past, to = 0 the global future.
struct BlockKey {
  AgentMask K = 0;
  int k = 0;
  int to = 0;
  auto operator<=>(const BlockKey&) const = default;
};

struct QcQc {
  int n_agents = 0;
  std::vector<int> d_in, d_out;  // agent k at index k - 1
  int d_past = 1;
  int d_future = 1;
  // ancillas[n - 1] lists the wire dims of alpha_n (n = 1..N); ancillas[N] is alpha_F
  std::vector<std::vector<int>> ancillas;
  std::map<BlockKey, LabeledOperator> blocks;

  QcQc() = default;
  QcQc(int n, std::vector<int> din, std::vector<int> dout, int dp, int df,
       std::vector<std::vector<int>> anc);

  int level(AgentMask K, int k) const { return k == 0 ? 0 : popcount(K) + 1; }
  AgentMask all() const { return (AgentMask(1) << n_agents) - 1; }

  Signature ancilla_sig(int n) const;  // n = 1..N, N + 1 for alpha_F
  Signature block_in(AgentMask K, int k) const;
  Signature block_out(AgentMask K, int k, int to) const;

  // stores m zero-padded to the block signature
  void set_block(AgentMask K, int k, int to, const Mat& m);
  bool has_block(AgentMask K, int k, int to) const { return blocks.count({K, k, to}) > 0; }
  LabeledOperator block(AgentMask K, int k, int to) const;

  // targets that (K, k) may send to
  std::vector<int> successors(AgentMask K, int k) const;
  // (K, k) pairs with |K| = n - 1 reached by some chain of non-zero blocks
  std::vector<std::pair<AgentMask, int>> reachable(int n) const;

  // wires P, A1.I, A1.O, ..., F, alpha_F in this order
  Signature process_sig() const;
};

LabeledVector choi_of_block(const QcQc& q, AgentMask K, int k, int to);

// |w_{(K,k)}>, summed over the orders of K
LabeledVector partial_process_vector(const QcQc& q, AgentMask K, int k);
LabeledVector process_vector(const QcQc& q);
// |w_{(k_1,...,k_N,F)}> for one order
LabeledVector order_vector(const QcQc& q, const std::vector<int>& order);
ProcessMatrix process_matrix(const QcQc& q);

// (|A_1>> (x) ... (x) |A_N>>) * |w>, agent k acting A{k}.I -> A{k}.O
LabeledVector contract_agents(const LabeledVector& w, const std::vector<LabeledOperator>& agents);

using Witnesses = std::map<std::pair<AgentMask, int>, LabeledOperator>;
Witnesses witnesses(const QcQc& q);

struct QcqcReport {
  bool pass = false;
  double past_dev = 0.0;
  double recursion_dev = 0.0;
  double future_dev = 0.0;
};

QcqcReport check_qcqc_conditions(const QcQc& q, const LabeledOperator& w, const Witnesses& ws,
                                 double tol = kDefaultTol);

struct KrausisoReport {
  bool pass = false;
  double diagonal_dev = 0.0;
  double cross_dev = 0.0;
};

KrausisoReport check_krausiso(const QcQc& q, double tol = kDefaultTol);

// Control-register form of step n (1..N+1) on generic agent spaces At.I / At.O,
// with control wires C{n} over the reachable (K, k) pairs.
LabeledOperator assemble_control_isometry(const QcQc& q, int n);

// Random QC-QC whose blocks satisfy the isometry condition: for every level and
// every agent set S, the blocks leaving the sectors (S \ k, k) are slices of one
// Haar isometry. Ancilla dims are the smallest that make this possible.
QcQc random_qcqc(Rng& rng, int n, int d, int d_past = 1, int d_future = 0);

namespace fixtures {
QcQc dynamical_switch(const Vec& psi = Vec());
QcQc quantum_switch();
QcQc double_quantum_switch(const Vec& psi = Vec(), bool phase_flip = true);
QcQc dynamical_parallel(const Vec& psi = Vec());
std::vector<std::pair<std::string, QcQc>> all();
}  // namespace fixtures

}  // namespace icausal

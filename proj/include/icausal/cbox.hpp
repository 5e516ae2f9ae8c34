#pragma once

#include <map>
#include <string>
#include <vector>

#include "icausal/choi.hpp"
#include "icausal/fock.hpp"

namespace icausal {

// One isometry of a sequence representation. Wires that name a slice of the
// representation are Fock wires; every other wire is internal and must be
// produced by an earlier step (or be a free input/output of the box).
struct Step {
  LabeledOperator op;
  // columns span the declared domain in op.in_sig coordinates; no columns means
  // the whole capped space
  Mat domain;
  std::string generator = "fock_sector";  // "fock_sector", "accept_subspace" or "explicit"

  bool restricted() const { return domain.cols() > 0; }
};

struct SequenceRep {
  std::vector<Step> steps;
  std::map<std::string, FockSlice> slices;  // keyed by slice name base@t

  void add_slice(const FockSlice& s) { slices[s.name()] = s; }
  bool is_slice(const std::string& wire) const { return slices.count(wire) > 0; }
  // slice wires read by no step and internal wires produced by no step
  Signature free_inputs() const;
  Signature free_outputs() const;
};

struct CausalBoxChoi {
  ChoiVector choi;
  std::map<std::string, FockSlice> slices;
};

// Chained link product of the step Choi vectors. Throws AncillaMismatch when an
// internal wire is produced twice or consumed with a different dimension, and
// NotIsometry in strict mode.
CausalBoxChoi compose_sequence(const SequenceRep& rep, bool strict = false, double tol = kDefaultTol);

// Feeds output `c` back into input `b` of a Choi matrix:
// sum_{k,l} <k|_B <k|_C M |l>_B |l>_C on the remaining wires.
ChoiMatrix loop_compose(const ChoiMatrix& m, const std::string& c, const std::string& b);

// Position maps must be strictly increasing on every position in use.
SequenceRep relabel_positions(const SequenceRep& rep, const std::map<int, int>& r);
CausalBoxChoi relabel_positions(const CausalBoxChoi& box, const std::map<int, int>& r);
// "base@t" -> "base@R(t)"; names without a position are returned unchanged
std::string relabel_name(const std::string& name, const std::map<int, int>& r);
void check_monotone(const std::map<int, int>& r);

struct StepCheck {
  std::size_t step = 0;
  std::size_t columns = 0;
  double deviation = 0.0;
};

struct IsometryReport {
  bool pass = false;
  double max_deviation = 0.0;
  std::vector<StepCheck> steps;
};

// Gram check D^dag V^dag V D - D^dag D of every step on its declared domain.
// sector_cap >= 0 keeps only domain vectors supported on occupations with at
// most that many messages per slice.
IsometryReport verify_sequence_isometries(const SequenceRep& rep, int sector_cap = -1, double tol = kDefaultTol);

// splits "base@t"; returns false for names without a position
bool parse_slice_name(const std::string& name, std::string& base, int& t);

}  // namespace icausal

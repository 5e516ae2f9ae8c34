#pragma once

#include <map>
#include <string>
#include <vector>

#include "icausal/tensor.hpp"

namespace icausal {

inline constexpr int kDefaultCap = 3;

// One message: a basis payload index at a position.
struct Message {
  int t = 0;
  int payload = 0;
  auto operator<=>(const Message&) const = default;
};

// Sorted multiset of messages on one wire; empty is the vacuum.
using Occupation = std::vector<Message>;

// <occ|occ> for the symmetric product of the basis messages in occ, i.e. the
// product of the factorials of the multiplicities.
double occupation_weight(const Occupation& occ);
int count_messages(const Occupation& occ, int t);

struct FockWire {
  std::string name;
  int dim = 1;
  int cap = kDefaultCap;
  bool operator==(const FockWire&) const = default;
};

// Amplitudes are stored on unnormalised symmetric products of basis messages,
// one occupation per wire, so |0> (.) |0> has norm sqrt(2).
struct FockState {
  std::vector<FockWire> wires;
  std::map<std::vector<Occupation>, cplx> amps;

  FockState() = default;
  explicit FockState(std::vector<FockWire> w);
  static FockState vacuum(std::vector<FockWire> w, cplx amp = 1.0);

  int wire_index(const std::string& name) const;
  void add(const std::vector<Occupation>& key, cplx a);
  FockState scaled(cplx s) const;
  double norm() const;
};

struct MessageState {
  Vec payload;
  int t = 0;
};

struct RawMessage {
  std::string wire;
  Vec payload;
  int t = 0;
};

FockState add(const FockState& a, const FockState& b, cplx s = 1.0);
FockState tensor_product(const FockState& a, const FockState& b);

// (1/sqrt(n!)) sum over permutations of the tensor product, expanded multilinearly
FockState symmetric_product(const FockWire& w, const std::vector<MessageState>& msgs);

// Eq. of the permanent form; wires must agree as sets
cplx fock_inner(const FockState& a, const FockState& b);

// groups the factors by wire, symmetrises within each wire and tensors the wires
FockState symm(const std::vector<FockWire>& wires, const std::vector<RawMessage>& raw);

// all occupations with at most cap messages over dim payloads and the positions
std::vector<Occupation> enumerate_occupations(int dim, const std::vector<int>& positions, int cap);

// Orthonormal basis of a product of capped Fock wires; the coordinate of a state
// along occupation key k is amp(k) * sqrt(weight(k)).
struct FockBasis {
  std::vector<FockWire> wires;
  std::vector<std::vector<int>> positions;
  std::vector<std::vector<Occupation>> per_wire;

  static FockBasis build(std::vector<FockWire> wires, std::vector<std::vector<int>> positions);

  // one signature wire per Fock wire, dim = number of occupations
  Signature signature() const;
  std::uint64_t dim() const { return signature().dim(); }
  std::vector<Occupation> key(std::uint64_t idx) const;
  std::uint64_t index(const std::vector<Occupation>& key) const;
  Vec coordinates(const FockState& s) const;
  FockState state(const Vec& v) const;
};

// A Fock wire at a single position whose payload is a direct sum of parts.
// Part p has sys * extra payload states (local index = x * extra + e).
struct SlicePart {
  std::string label;
  int sys = 1;
  int extra = 1;
  int dim() const { return sys * extra; }
  bool operator==(const SlicePart&) const = default;
};

struct FockSlice {
  std::string base;
  int t = 0;
  int cap = kDefaultCap;
  std::vector<SlicePart> parts;
  std::vector<Occupation> basis;
  std::map<Occupation, std::size_t> lookup;

  static FockSlice make(std::string base, int t, int cap, std::vector<SlicePart> parts);

  std::string name() const { return base + "@" + std::to_string(t); }
  Wire wire() const { return {name(), static_cast<int>(basis.size()), WireKind::system}; }
  int payload_dim() const;
  int part_index(const std::string& label) const;
  int offset(std::size_t part) const;
  // (part, local index) of a payload index
  std::pair<std::size_t, int> locate(int payload) const;
  std::size_t index(const Occupation& occ) const;
  std::size_t vacuum() const { return 0; }
  FockSlice at(int new_t) const;
};

// Applies the single-message map w (out payloads x in payloads) to every message
// of every basis state; matrix in the orthonormal slice bases.
Mat second_quantize(const Mat& w, const FockSlice& in, const FockSlice& out);

// Per-agent wiring of a process box.
struct AgentTiming {
  std::string name;
  int d_in = 1;
  int d_out = 1;
  std::vector<int> t_in;
  std::map<int, int> O;

  // BadTimeMap unless O is defined on t_in, increasing, injective and O(t) > t
  void validate() const;
  std::vector<int> t_out() const;
};

struct EffectiveSubspace {
  std::vector<AgentTiming> agents;
  int cap = 1;
};

// wires name.I over t_in and name.O over O(t_in) for each agent, in agent order
FockBasis effective_basis(const EffectiveSubspace& sub);
// diagonal projector onto the span of the one-message-per-agent basis states
LabeledOperator effective_projector(const EffectiveSubspace& sub);

struct WireSplit {
  enum class Kind { payload, positions };
  Kind kind = Kind::payload;
  std::string wire;
  std::string first;
  std::string second;
  int first_dim = 0;           // payload split: first keeps payloads [0, first_dim)
  std::vector<int> positions;  // position split: first keeps these positions
};

FockState split_wire(const FockState& s, const WireSplit& spec);
FockState merge_wire(const FockState& s, const WireSplit& spec);

}  // namespace icausal

#pragma once

#include <map>
#include <string>
#include <vector>

#include "icausal/common.hpp"

namespace icausal {

enum class WireKind { system, time, control, ancilla };

const char* to_string(WireKind k);
WireKind wire_kind_from_string(const std::string& s);

struct Wire {
  std::string name;
  int dim = 1;
  WireKind kind = WireKind::system;

  bool operator==(const Wire& o) const { return name == o.name && dim == o.dim; }
};

// Ordered product of named wires. The first wire is the most significant
// digit of the flat index, so |x>|y> sits at x * dim(y) + y.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<Wire> wires);
  Signature(std::initializer_list<Wire> wires) : Signature(std::vector<Wire>(wires)) {}

  const std::vector<Wire>& wires() const { return wires_; }
  std::size_t size() const { return wires_.size(); }
  bool empty() const { return wires_.empty(); }
  std::uint64_t dim() const { return dim_; }

  int find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) >= 0; }
  const Wire& at(const std::string& name) const;
  std::vector<std::string> names() const;

  std::vector<int> unravel(std::uint64_t idx) const;
  std::uint64_t ravel(const std::vector<int>& digits) const;
  std::uint64_t stride(std::size_t pos) const { return strides_[pos]; }

  Signature concat(const Signature& other) const;
  Signature select(const std::vector<std::string>& names) const;
  Signature without(const std::vector<std::string>& names) const;
  // same wires irrespective of order
  bool same_set(const Signature& other) const;

  bool operator==(const Signature& o) const { return wires_ == o.wires_; }

 private:
  std::vector<Wire> wires_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t dim_ = 1;
};

// Sparse ket over a signature, keyed by flat index.
struct LabeledVector {
  Signature sig;
  std::map<std::uint64_t, cplx> amps;

  LabeledVector() = default;
  explicit LabeledVector(Signature s) : sig(std::move(s)) {}

  static LabeledVector basis(const Signature& s, const std::vector<int>& digits);
  static LabeledVector from_dense(const Signature& s, const Vec& v, double prune = 0.0);
  Vec to_dense() const;

  void add(std::uint64_t idx, cplx a);
  double norm() const;
  void prune(double tol);
  LabeledVector scaled(cplx s) const;
};

// Dense operator, rows over out_sig and columns over in_sig.
struct LabeledOperator {
  Signature in_sig;
  Signature out_sig;
  Mat m;

  LabeledOperator() = default;
  LabeledOperator(Signature in, Signature out, Mat mat);

  static LabeledOperator identity(const Signature& in, const Signature& out);
  static LabeledOperator square(const Signature& s, Mat mat) { return {s, s, std::move(mat)}; }

  bool is_square_on_same_wires() const { return in_sig.same_set(out_sig); }
  LabeledOperator adjoint() const;
  LabeledOperator permuted(const std::vector<std::string>& in_order,
                           const std::vector<std::string>& out_order) const;
  // reorders a square operator so that both sides follow `order`
  LabeledOperator permuted_square(const std::vector<std::string>& order) const;
};

LabeledVector tensor_product(const LabeledVector& a, const LabeledVector& b);
LabeledOperator tensor_product(const LabeledOperator& a, const LabeledOperator& b);

LabeledVector permute_wires(const LabeledVector& v, const std::vector<std::string>& order);

cplx inner(const LabeledVector& a, const LabeledVector& b);

// a + s*b with b aligned to a by name
LabeledVector add(const LabeledVector& a, const LabeledVector& b, cplx s = 1.0);
LabeledOperator add(const LabeledOperator& a, const LabeledOperator& b, cplx s = 1.0);
// max |a - b| entrywise after name alignment
double max_diff(const LabeledVector& a, const LabeledVector& b);
double max_diff(const LabeledOperator& a, const LabeledOperator& b);

LabeledOperator partial_trace(const LabeledOperator& m, const std::vector<std::string>& wires);
std::complex<double> trace(const LabeledOperator& m);

// b after a, matching a.out_sig to b.in_sig by name
LabeledOperator compose(const LabeledOperator& b, const LabeledOperator& a);

// applies op to the wires op.in_sig of v; other wires of v are spectators
LabeledVector apply(const LabeledOperator& op, const LabeledVector& v);

// renames wires; map old -> new
Signature renamed(const Signature& s, const std::map<std::string, std::string>& names);
LabeledVector renamed(const LabeledVector& v, const std::map<std::string, std::string>& names);
LabeledOperator renamed(const LabeledOperator& m, const std::map<std::string, std::string>& names);

bool is_isometry(const LabeledOperator& m, double tol = kDefaultTol);
double isometry_deviation(const Mat& m);

}  // namespace icausal

#include "icausal/tensor.hpp"

#include <algorithm>
#include <set>

namespace icausal {

const char* to_string(WireKind k) {
  switch (k) {
    case WireKind::system: return "system";
    case WireKind::time: return "time";
    case WireKind::control: return "control";
    case WireKind::ancilla: return "ancilla";
  }
  return "system";
}

WireKind wire_kind_from_string(const std::string& s) {
  if (s == "system") return WireKind::system;
  if (s == "time") return WireKind::time;
  if (s == "control") return WireKind::control;
  if (s == "ancilla") return WireKind::ancilla;
  throw Error(ErrorKind::ParseError, "unknown wire kind '" + s + "'");
}

Signature::Signature(std::vector<Wire> wires) : wires_(std::move(wires)) {
  std::set<std::string> seen;
  for (const auto& w : wires_) {
    if (w.dim < 1) throw Error(ErrorKind::DimMismatch, "wire '" + w.name + "' has dim < 1");
    if (!seen.insert(w.name).second) throw Error(ErrorKind::DuplicateWire, w.name);
  }
  strides_.assign(wires_.size(), 1);
  dim_ = 1;
  for (std::size_t i = wires_.size(); i-- > 0;) {
    strides_[i] = dim_;
    dim_ *= static_cast<std::uint64_t>(wires_[i].dim);
  }
}

int Signature::find(const std::string& name) const {
  for (std::size_t i = 0; i < wires_.size(); ++i)
    if (wires_[i].name == name) return static_cast<int>(i);
  return -1;
}

const Wire& Signature::at(const std::string& name) const {
  int i = find(name);
  if (i < 0) throw Error(ErrorKind::UnknownWire, name);
  return wires_[static_cast<std::size_t>(i)];
}

std::vector<std::string> Signature::names() const {
  std::vector<std::string> r;
  r.reserve(wires_.size());
  for (const auto& w : wires_) r.push_back(w.name);
  return r;
}

std::vector<int> Signature::unravel(std::uint64_t idx) const {
  std::vector<int> d(wires_.size());
  for (std::size_t i = 0; i < wires_.size(); ++i)
    d[i] = static_cast<int>((idx / strides_[i]) % static_cast<std::uint64_t>(wires_[i].dim));
  return d;
}

std::uint64_t Signature::ravel(const std::vector<int>& digits) const {
  if (digits.size() != wires_.size()) throw Error(ErrorKind::DimMismatch, "digit count");
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < wires_.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= wires_[i].dim)
      throw Error(ErrorKind::DimMismatch, "digit out of range on '" + wires_[i].name + "'");
    r += static_cast<std::uint64_t>(digits[i]) * strides_[i];
  }
  return r;
}

Signature Signature::concat(const Signature& other) const {
  std::vector<Wire> w = wires_;
  w.insert(w.end(), other.wires_.begin(), other.wires_.end());
  return Signature(std::move(w));
}

Signature Signature::select(const std::vector<std::string>& names) const {
  std::vector<Wire> w;
  for (const auto& n : names) w.push_back(at(n));
  return Signature(std::move(w));
}

Signature Signature::without(const std::vector<std::string>& names) const {
  for (const auto& n : names) at(n);
  std::vector<Wire> w;
  for (const auto& x : wires_)
    if (std::find(names.begin(), names.end(), x.name) == names.end()) w.push_back(x);
  return Signature(std::move(w));
}

bool Signature::same_set(const Signature& other) const {
  if (other.size() != size()) return false;
  for (const auto& w : wires_) {
    int j = other.find(w.name);
    if (j < 0 || other.wires_[static_cast<std::size_t>(j)].dim != w.dim) return false;
  }
  return true;
}

namespace {

// position of every src index inside dst (dst is a reordering of src)
std::vector<std::uint64_t> index_map(const Signature& src, const Signature& dst) {
  if (!src.same_set(dst)) throw Error(ErrorKind::SignatureMismatch, "wire sets differ");
  std::vector<std::uint64_t> dstride(src.size());
  for (std::size_t i = 0; i < src.size(); ++i)
    dstride[i] = dst.stride(static_cast<std::size_t>(dst.find(src.wires()[i].name)));
  std::vector<std::uint64_t> out(src.dim());
  std::vector<int> digits(src.size(), 0);
  std::uint64_t cur = 0;
  for (std::uint64_t i = 0; i < src.dim(); ++i) {
    out[i] = cur;
    for (std::size_t k = src.size(); k-- > 0;) {
      ++digits[k];
      cur += dstride[k];
      if (digits[k] < src.wires()[k].dim) break;
      cur -= dstride[k] * static_cast<std::uint64_t>(digits[k]);
      digits[k] = 0;
    }
  }
  return out;
}

// flat offset of each index of `part` inside `full`
std::vector<std::uint64_t> offsets(const Signature& part, const Signature& full) {
  std::vector<std::uint64_t> st(part.size());
  for (std::size_t i = 0; i < part.size(); ++i) {
    int p = full.find(part.wires()[i].name);
    if (p < 0) throw Error(ErrorKind::UnknownWire, part.wires()[i].name);
    st[i] = full.stride(static_cast<std::size_t>(p));
  }
  std::vector<std::uint64_t> out(part.dim());
  for (std::uint64_t i = 0; i < part.dim(); ++i) {
    auto d = part.unravel(i);
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < d.size(); ++k) r += static_cast<std::uint64_t>(d[k]) * st[k];
    out[i] = r;
  }
  return out;
}

void check_disjoint(const Signature& a, const Signature& b) {
  for (const auto& w : b.wires())
    if (a.has(w.name)) throw Error(ErrorKind::DuplicateWire, w.name);
}

}  // namespace

LabeledVector LabeledVector::basis(const Signature& s, const std::vector<int>& digits) {
  LabeledVector v(s);
  v.amps[s.ravel(digits)] = 1.0;
  return v;
}

LabeledVector LabeledVector::from_dense(const Signature& s, const Vec& d, double prune) {
  if (static_cast<std::uint64_t>(d.size()) != s.dim())
    throw Error(ErrorKind::DimMismatch, "dense vector size");
  LabeledVector v(s);
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (std::abs(d(i)) > prune) v.amps[static_cast<std::uint64_t>(i)] = d(i);
  return v;
}

Vec LabeledVector::to_dense() const {
  Vec d = Vec::Zero(static_cast<Eigen::Index>(sig.dim()));
  for (const auto& [i, a] : amps) d(static_cast<Eigen::Index>(i)) = a;
  return d;
}

void LabeledVector::add(std::uint64_t idx, cplx a) {
  if (idx >= sig.dim()) throw Error(ErrorKind::DimMismatch, "index out of range");
  amps[idx] += a;
}

double LabeledVector::norm() const {
  double s = 0.0;
  for (const auto& [i, a] : amps) s += std::norm(a);
  return std::sqrt(s);
}

void LabeledVector::prune(double tol) {
  for (auto it = amps.begin(); it != amps.end();) {
    if (std::abs(it->second) <= tol)
      it = amps.erase(it);
    else
      ++it;
  }
}

LabeledVector LabeledVector::scaled(cplx s) const {
  LabeledVector r = *this;
  for (auto& [i, a] : r.amps) a *= s;
  return r;
}

LabeledOperator::LabeledOperator(Signature in, Signature out, Mat mat)
    : in_sig(std::move(in)), out_sig(std::move(out)), m(std::move(mat)) {
  if (static_cast<std::uint64_t>(m.rows()) != out_sig.dim() ||
      static_cast<std::uint64_t>(m.cols()) != in_sig.dim())
    throw Error(ErrorKind::DimMismatch, "operator shape does not match signatures");
}

LabeledOperator LabeledOperator::identity(const Signature& in, const Signature& out) {
  if (in.dim() != out.dim()) throw Error(ErrorKind::DimMismatch, "identity needs equal dims");
  auto d = static_cast<Eigen::Index>(in.dim());
  return {in, out, Mat::Identity(d, d)};
}

LabeledOperator LabeledOperator::adjoint() const { return {out_sig, in_sig, m.adjoint()}; }

LabeledOperator LabeledOperator::permuted(const std::vector<std::string>& in_order,
                                          const std::vector<std::string>& out_order) const {
  Signature ni = in_sig.select(in_order), no = out_sig.select(out_order);
  auto ci = index_map(in_sig, ni), ro = index_map(out_sig, no);
  Mat r(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      r(static_cast<Eigen::Index>(ro[static_cast<std::size_t>(i)]),
        static_cast<Eigen::Index>(ci[static_cast<std::size_t>(j)])) = m(i, j);
  return {ni, no, std::move(r)};
}

LabeledOperator LabeledOperator::permuted_square(const std::vector<std::string>& order) const {
  return permuted(order, order);
}

LabeledVector tensor_product(const LabeledVector& a, const LabeledVector& b) {
  check_disjoint(a.sig, b.sig);
  LabeledVector r(a.sig.concat(b.sig));
  const std::uint64_t db = b.sig.dim();
  for (const auto& [i, x] : a.amps)
    for (const auto& [j, y] : b.amps) r.amps[i * db + j] = x * y;
  return r;
}

LabeledOperator tensor_product(const LabeledOperator& a, const LabeledOperator& b) {
  check_disjoint(a.in_sig, b.in_sig);
  check_disjoint(a.out_sig, b.out_sig);
  Mat k(a.m.rows() * b.m.rows(), a.m.cols() * b.m.cols());
  for (Eigen::Index i = 0; i < a.m.rows(); ++i)
    for (Eigen::Index j = 0; j < a.m.cols(); ++j)
      k.block(i * b.m.rows(), j * b.m.cols(), b.m.rows(), b.m.cols()) = a.m(i, j) * b.m;
  return {a.in_sig.concat(b.in_sig), a.out_sig.concat(b.out_sig), std::move(k)};
}

LabeledVector permute_wires(const LabeledVector& v, const std::vector<std::string>& order) {
  if (order.size() != v.sig.size()) throw Error(ErrorKind::UnknownWire, "order is not a permutation");
  Signature ns = v.sig.select(order);
  if (ns == v.sig) return v;
  auto map = index_map(v.sig, ns);
  LabeledVector r(ns);
  for (const auto& [i, a] : v.amps) r.amps[map[i]] = a;
  return r;
}

cplx inner(const LabeledVector& a, const LabeledVector& b) {
  if (!a.sig.same_set(b.sig)) throw Error(ErrorKind::SignatureMismatch, "inner product");
  LabeledVector bb = permute_wires(b, a.sig.names());
  cplx s = 0.0;
  const auto& small = a.amps.size() <= bb.amps.size() ? a.amps : bb.amps;
  const auto& big = a.amps.size() <= bb.amps.size() ? bb.amps : a.amps;
  for (const auto& [i, x] : small) {
    auto it = big.find(i);
    if (it == big.end()) continue;
    s += (&small == &a.amps) ? std::conj(x) * it->second : std::conj(it->second) * x;
  }
  return s;
}

LabeledVector add(const LabeledVector& a, const LabeledVector& b, cplx s) {
  if (!a.sig.same_set(b.sig)) throw Error(ErrorKind::SignatureMismatch, "vector sum");
  LabeledVector r = a;
  LabeledVector bb = permute_wires(b, a.sig.names());
  for (const auto& [i, x] : bb.amps) r.amps[i] += s * x;
  return r;
}

LabeledOperator add(const LabeledOperator& a, const LabeledOperator& b, cplx s) {
  if (!a.in_sig.same_set(b.in_sig) || !a.out_sig.same_set(b.out_sig))
    throw Error(ErrorKind::SignatureMismatch, "operator sum");
  LabeledOperator bb = b.permuted(a.in_sig.names(), a.out_sig.names());
  return {a.in_sig, a.out_sig, a.m + s * bb.m};
}

double max_diff(const LabeledVector& a, const LabeledVector& b) {
  LabeledVector d = add(a, b, -1.0);
  double r = 0.0;
  for (const auto& [i, x] : d.amps) r = std::max(r, std::abs(x));
  return r;
}

double max_diff(const LabeledOperator& a, const LabeledOperator& b) {
  return max_abs(add(a, b, -1.0).m);
}

LabeledOperator partial_trace(const LabeledOperator& m, const std::vector<std::string>& wires) {
  if (!m.in_sig.same_set(m.out_sig)) throw Error(ErrorKind::NonSquare, "partial trace");
  for (const auto& w : wires) m.in_sig.at(w);
  LabeledOperator a = m.permuted_square(m.in_sig.names());
  Signature kept = a.in_sig.without(wires);
  Signature tr = a.in_sig.select(wires);
  auto ko = offsets(kept, a.in_sig), to = offsets(tr, a.in_sig);
  auto dk = static_cast<Eigen::Index>(kept.dim());
  Mat r = Mat::Zero(dk, dk);
  for (Eigen::Index c = 0; c < dk; ++c)
    for (Eigen::Index rr = 0; rr < dk; ++rr) {
      cplx s = 0.0;
      for (auto t : to)
        s += a.m(static_cast<Eigen::Index>(ko[static_cast<std::size_t>(rr)] + t),
                 static_cast<Eigen::Index>(ko[static_cast<std::size_t>(c)] + t));
      r(rr, c) = s;
    }
  return {kept, kept, std::move(r)};
}

cplx trace(const LabeledOperator& m) {
  if (!m.in_sig.same_set(m.out_sig)) throw Error(ErrorKind::NonSquare, "trace");
  LabeledOperator a = m.permuted_square(m.in_sig.names());
  return a.m.trace();
}

LabeledOperator compose(const LabeledOperator& b, const LabeledOperator& a) {
  if (!b.in_sig.same_set(a.out_sig)) throw Error(ErrorKind::SignatureMismatch, "compose");
  LabeledOperator bb = b.permuted(a.out_sig.names(), b.out_sig.names());
  return {a.in_sig, b.out_sig, bb.m * a.m};
}

LabeledVector apply(const LabeledOperator& op, const LabeledVector& v) {
  std::vector<std::string> in_names = op.in_sig.names();
  for (const auto& n : in_names)
    if (v.sig.at(n).dim != op.in_sig.at(n).dim) throw Error(ErrorKind::DimMismatch, n);
  Signature spect = v.sig.without(in_names);
  Signature out = spect.concat(op.out_sig);
  LabeledVector vv = permute_wires(v, spect.concat(op.in_sig).names());
  const std::uint64_t din = op.in_sig.dim(), dout = op.out_sig.dim();
  LabeledVector r(out);
  for (const auto& [idx, a] : vv.amps) {
    std::uint64_t s = idx / din, c = idx % din;
    for (std::uint64_t row = 0; row < dout; ++row) {
      cplx x = op.m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c));
      if (x != cplx(0.0)) r.amps[s * dout + row] += x * a;
    }
  }
  return r;
}

Signature renamed(const Signature& s, const std::map<std::string, std::string>& names) {
  std::vector<Wire> w = s.wires();
  for (auto& x : w) {
    auto it = names.find(x.name);
    if (it != names.end()) x.name = it->second;
  }
  return Signature(std::move(w));
}

LabeledVector renamed(const LabeledVector& v, const std::map<std::string, std::string>& names) {
  LabeledVector r = v;
  r.sig = renamed(v.sig, names);
  return r;
}

LabeledOperator renamed(const LabeledOperator& m, const std::map<std::string, std::string>& names) {
  return {renamed(m.in_sig, names), renamed(m.out_sig, names), m.m};
}

double isometry_deviation(const Mat& m) {
  Mat g = m.adjoint() * m;
  g -= Mat::Identity(m.cols(), m.cols());
  return max_abs(g);
}

bool is_isometry(const LabeledOperator& m, double tol) {
  if (m.out_sig.dim() < m.in_sig.dim()) return false;
  return isometry_deviation(m.m) <= tol;
}

}  // namespace icausal

#include "icausal/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace icausal {

double occupation_weight(const Occupation& occ) {
  double w = 1.0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    run = (i > 0 && occ[i] == occ[i - 1]) ? run + 1 : 1;
    w *= static_cast<double>(run);
  }
  return w;
}

int count_messages(const Occupation& occ, int t) {
  return static_cast<int>(std::count_if(occ.begin(), occ.end(), [t](const Message& m) { return m.t == t; }));
}

namespace {

void check_key(const std::vector<FockWire>& wires, const std::vector<Occupation>& key) {
  if (key.size() != wires.size()) throw Error(ErrorKind::SignatureMismatch, "occupation count differs from wire count");
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (static_cast<int>(key[i].size()) > wires[i].cap)
      throw Error(ErrorKind::CapExceeded, "wire " + wires[i].name + " holds more than its cap");
    if (!std::is_sorted(key[i].begin(), key[i].end())) throw Error(ErrorKind::BadSpec, "occupation not sorted");
    for (const auto& m : key[i])
      if (m.payload < 0 || m.payload >= wires[i].dim)
        throw Error(ErrorKind::DimMismatch, "payload out of range on " + wires[i].name);
  }
}

bool vec_less(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

FockState::FockState(std::vector<FockWire> w) : wires(std::move(w)) {
  std::set<std::string> seen;
  for (const auto& x : wires)
    if (!seen.insert(x.name).second) throw Error(ErrorKind::DuplicateWire, x.name);
}

FockState FockState::vacuum(std::vector<FockWire> w, cplx amp) {
  FockState s(std::move(w));
  s.amps[std::vector<Occupation>(s.wires.size())] = amp;
  return s;
}

int FockState::wire_index(const std::string& name) const {
  for (std::size_t i = 0; i < wires.size(); ++i)
    if (wires[i].name == name) return static_cast<int>(i);
  return -1;
}

void FockState::add(const std::vector<Occupation>& key, cplx a) {
  check_key(wires, key);
  auto it = amps.find(key);
  if (it == amps.end()) {
    if (a != cplx(0.0)) amps.emplace(key, a);
    return;
  }
  it->second += a;
  if (it->second == cplx(0.0)) amps.erase(it);
}

FockState FockState::scaled(cplx s) const {
  FockState r(wires);
  for (const auto& [k, a] : amps)
    if (a * s != cplx(0.0)) r.amps.emplace(k, a * s);
  return r;
}

double FockState::norm() const {
  double n = 0.0;
  for (const auto& [k, a] : amps) {
    double w = 1.0;
    for (const auto& occ : k) w *= occupation_weight(occ);
    n += std::norm(a) * w;
  }
  return std::sqrt(n);
}

namespace {

// permutation taking b's wires to a's order; throws unless the wire sets agree
std::vector<std::size_t> align(const std::vector<FockWire>& a, const std::vector<FockWire>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::SignatureMismatch, "different Fock wire sets");
  std::vector<std::size_t> perm(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = std::find_if(b.begin(), b.end(), [&](const FockWire& w) { return w.name == a[i].name; });
    if (it == b.end() || !(*it == a[i])) throw Error(ErrorKind::SignatureMismatch, "wire " + a[i].name + " differs");
    perm[i] = static_cast<std::size_t>(it - b.begin());
  }
  return perm;
}

std::vector<Occupation> reorder(const std::vector<Occupation>& key, const std::vector<std::size_t>& perm) {
  std::vector<Occupation> r(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) r[i] = key[perm[i]];
  return r;
}

}  // namespace

FockState add(const FockState& a, const FockState& b, cplx s) {
  auto perm = align(a.wires, b.wires);
  FockState r = a;
  for (const auto& [k, v] : b.amps) r.add(reorder(k, perm), s * v);
  return r;
}

FockState tensor_product(const FockState& a, const FockState& b) {
  std::vector<FockWire> w = a.wires;
  w.insert(w.end(), b.wires.begin(), b.wires.end());
  FockState r(std::move(w));
  for (const auto& [ka, va] : a.amps)
    for (const auto& [kb, vb] : b.amps) {
      std::vector<Occupation> k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      r.add(k, va * vb);
    }
  return r;
}

FockState symmetric_product(const FockWire& w, const std::vector<MessageState>& msgs_in) {
  if (static_cast<int>(msgs_in.size()) > w.cap) throw Error(ErrorKind::CapExceeded, "too many messages for " + w.name);
  std::vector<MessageState> msgs = msgs_in;
  for (const auto& m : msgs)
    if (m.payload.size() != w.dim) throw Error(ErrorKind::DimMismatch, "payload dimension on " + w.name);
  // canonical factor order makes the floating point result independent of the input order
  std::stable_sort(msgs.begin(), msgs.end(), [](const MessageState& a, const MessageState& b) {
    if (a.t != b.t) return a.t < b.t;
    return vec_less(a.payload, b.payload);
  });
  FockState r({w});
  Occupation cur;
  std::function<void(std::size_t, cplx)> rec = [&](std::size_t k, cplx amp) {
    if (k == msgs.size()) {
      Occupation o = cur;
      std::sort(o.begin(), o.end());
      r.add({o}, amp);
      return;
    }
    for (Eigen::Index j = 0; j < msgs[k].payload.size(); ++j) {
      cplx c = msgs[k].payload(j);
      if (c == cplx(0.0)) continue;
      cur.push_back({msgs[k].t, static_cast<int>(j)});
      rec(k + 1, amp * c);
      cur.pop_back();
    }
  };
  rec(0, 1.0);
  return r;
}

cplx fock_inner(const FockState& a, const FockState& b) {
  auto perm = align(a.wires, b.wires);
  cplx s = 0.0;
  for (const auto& [kb, vb] : b.amps) {
    auto k = reorder(kb, perm);
    auto it = a.amps.find(k);
    if (it == a.amps.end()) continue;
    double w = 1.0;
    for (const auto& occ : k) w *= occupation_weight(occ);
    s += std::conj(it->second) * vb * w;
  }
  return s;
}

FockState symm(const std::vector<FockWire>& wires, const std::vector<RawMessage>& raw) {
  std::vector<std::vector<MessageState>> per(wires.size());
  for (const auto& m : raw) {
    auto it = std::find_if(wires.begin(), wires.end(), [&](const FockWire& w) { return w.name == m.wire; });
    if (it == wires.end()) throw Error(ErrorKind::UnknownWire, m.wire);
    per[static_cast<std::size_t>(it - wires.begin())].push_back({m.payload, m.t});
  }
  FockState r = symmetric_product(wires[0], per[0]);
  for (std::size_t i = 1; i < wires.size(); ++i) r = tensor_product(r, symmetric_product(wires[i], per[i]));
  return r;
}

std::vector<Occupation> enumerate_occupations(int dim, const std::vector<int>& positions_in, int cap) {
  std::vector<int> positions = positions_in;
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  std::vector<Message> modes;
  for (int t : positions)
    for (int p = 0; p < dim; ++p) modes.push_back({t, p});
  std::vector<Occupation> out;
  Occupation cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = from; i < modes.size(); ++i) {
      cur.push_back(modes[i]);
      rec(i, left - 1);
      cur.pop_back();
    }
  };
  for (int n = 0; n <= cap; ++n) rec(0, n);
  return out;
}

FockBasis FockBasis::build(std::vector<FockWire> wires, std::vector<std::vector<int>> positions) {
  if (wires.size() != positions.size()) throw Error(ErrorKind::BadSpec, "one position list per wire");
  FockState check(wires);
  FockBasis b;
  b.wires = std::move(wires);
  b.positions = std::move(positions);
  for (std::size_t i = 0; i < b.wires.size(); ++i)
    b.per_wire.push_back(enumerate_occupations(b.wires[i].dim, b.positions[i], b.wires[i].cap));
  return b;
}

Signature FockBasis::signature() const {
  std::vector<Wire> w;
  for (std::size_t i = 0; i < wires.size(); ++i)
    w.push_back({wires[i].name, static_cast<int>(per_wire[i].size()), WireKind::system});
  return Signature(w);
}

std::vector<Occupation> FockBasis::key(std::uint64_t idx) const {
  auto digits = signature().unravel(idx);
  std::vector<Occupation> k;
  for (std::size_t i = 0; i < digits.size(); ++i) k.push_back(per_wire[i][static_cast<std::size_t>(digits[i])]);
  return k;
}

std::uint64_t FockBasis::index(const std::vector<Occupation>& key) const {
  if (key.size() != wires.size()) throw Error(ErrorKind::SignatureMismatch, "key size");
  std::vector<int> digits;
  for (std::size_t i = 0; i < key.size(); ++i) {
    auto it = std::find(per_wire[i].begin(), per_wire[i].end(), key[i]);
    if (it == per_wire[i].end()) throw Error(ErrorKind::BadSpec, "occupation outside the basis of " + wires[i].name);
    digits.push_back(static_cast<int>(it - per_wire[i].begin()));
  }
  return signature().ravel(digits);
}

Vec FockBasis::coordinates(const FockState& s) const {
  auto perm = align(wires, s.wires);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dim()));
  for (const auto& [k, a] : s.amps) {
    auto kk = reorder(k, perm);
    double w = 1.0;
    for (const auto& occ : kk) w *= occupation_weight(occ);
    v(static_cast<Eigen::Index>(index(kk))) += a * std::sqrt(w);
  }
  return v;
}

FockState FockBasis::state(const Vec& v) const {
  if (static_cast<std::uint64_t>(v.size()) != dim()) throw Error(ErrorKind::DimMismatch, "coordinate vector size");
  FockState s(wires);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == cplx(0.0)) continue;
    auto k = key(static_cast<std::uint64_t>(i));
    double w = 1.0;
    for (const auto& occ : k) w *= occupation_weight(occ);
    s.add(k, v(i) / std::sqrt(w));
  }
  return s;
}

FockSlice FockSlice::make(std::string base, int t, int cap, std::vector<SlicePart> parts) {
  FockSlice s;
  s.base = std::move(base);
  s.t = t;
  s.cap = cap;
  s.parts = std::move(parts);
  std::set<std::string> seen;
  for (const auto& p : s.parts) {
    if (!seen.insert(p.label).second) throw Error(ErrorKind::DuplicateWire, "slice part " + p.label);
    if (p.sys < 1 || p.extra < 1) throw Error(ErrorKind::BadSpec, "slice part dims must be positive");
  }
  s.basis = enumerate_occupations(s.payload_dim(), {t}, cap);
  for (std::size_t i = 0; i < s.basis.size(); ++i) s.lookup.emplace(s.basis[i], i);
  return s;
}

int FockSlice::payload_dim() const {
  int d = 0;
  for (const auto& p : parts) d += p.dim();
  return d;
}

int FockSlice::part_index(const std::string& label) const {
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (parts[i].label == label) return static_cast<int>(i);
  return -1;
}

int FockSlice::offset(std::size_t part) const {
  int o = 0;
  for (std::size_t i = 0; i < part; ++i) o += parts[i].dim();
  return o;
}

std::pair<std::size_t, int> FockSlice::locate(int payload) const {
  int o = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (payload < o + parts[i].dim()) return {i, payload - o};
    o += parts[i].dim();
  }
  throw Error(ErrorKind::DimMismatch, "payload outside slice " + name());
}

std::size_t FockSlice::index(const Occupation& occ) const {
  auto it = lookup.find(occ);
  if (it == lookup.end()) {
    if (static_cast<int>(occ.size()) > cap) throw Error(ErrorKind::CapExceeded, "slice " + name() + " over cap");
    throw Error(ErrorKind::BadSpec, "occupation outside slice " + name());
  }
  return it->second;
}

FockSlice FockSlice::at(int new_t) const { return make(base, new_t, cap, parts); }

Mat second_quantize(const Mat& w, const FockSlice& in, const FockSlice& out) {
  if (w.rows() != out.payload_dim() || w.cols() != in.payload_dim())
    throw Error(ErrorKind::DimMismatch, "single-message map does not fit the slices");
  std::vector<std::vector<std::pair<int, cplx>>> cols(static_cast<std::size_t>(w.cols()));
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      if (w(i, j) != cplx(0.0)) cols[static_cast<std::size_t>(j)].push_back({static_cast<int>(i), w(i, j)});

  Mat m = Mat::Zero(static_cast<Eigen::Index>(out.basis.size()), static_cast<Eigen::Index>(in.basis.size()));
  for (std::size_t c = 0; c < in.basis.size(); ++c) {
    const Occupation& occ = in.basis[c];
    std::map<Occupation, cplx> acc;
    Occupation cur;
    std::function<void(std::size_t, cplx)> rec = [&](std::size_t k, cplx amp) {
      if (k == occ.size()) {
        Occupation o = cur;
        std::sort(o.begin(), o.end());
        acc[o] += amp;
        return;
      }
      for (const auto& [q, v] : cols[static_cast<std::size_t>(occ[k].payload)]) {
        cur.push_back({out.t, q});
        rec(k + 1, amp * v);
        cur.pop_back();
      }
    };
    rec(0, 1.0);
    const double win = std::sqrt(occupation_weight(occ));
    for (const auto& [o, a] : acc) {
      if (a == cplx(0.0)) continue;
      m(static_cast<Eigen::Index>(out.index(o)), static_cast<Eigen::Index>(c)) +=
          a * std::sqrt(occupation_weight(o)) / win;
    }
  }
  return m;
}

void AgentTiming::validate() const {
  for (std::size_t i = 0; i < t_in.size(); ++i) {
    auto it = O.find(t_in[i]);
    if (it == O.end()) throw Error(ErrorKind::BadTimeMap, name + ": O undefined at " + std::to_string(t_in[i]));
    if (it->second <= t_in[i]) throw Error(ErrorKind::BadTimeMap, name + ": O(t) must exceed t");
    if (i > 0) {
      if (t_in[i] <= t_in[i - 1]) throw Error(ErrorKind::BadTimeMap, name + ": input times must increase");
      if (it->second <= O.at(t_in[i - 1])) throw Error(ErrorKind::BadTimeMap, name + ": O must be increasing");
    }
  }
}

std::vector<int> AgentTiming::t_out() const {
  std::vector<int> r;
  for (int t : t_in) r.push_back(O.at(t));
  return r;
}

FockBasis effective_basis(const EffectiveSubspace& sub) {
  std::vector<FockWire> wires;
  std::vector<std::vector<int>> pos;
  for (const auto& a : sub.agents) {
    a.validate();
    wires.push_back({a.name + ".I", a.d_in, sub.cap});
    pos.push_back(a.t_in);
    wires.push_back({a.name + ".O", a.d_out, sub.cap});
    pos.push_back(a.t_out());
  }
  return FockBasis::build(wires, pos);
}

LabeledOperator effective_projector(const EffectiveSubspace& sub) {
  FockBasis b = effective_basis(sub);
  Signature sig = b.signature();
  Mat p = Mat::Zero(static_cast<Eigen::Index>(sig.dim()), static_cast<Eigen::Index>(sig.dim()));
  for (std::uint64_t i = 0; i < sig.dim(); ++i) {
    auto k = b.key(i);
    bool ok = true;
    for (std::size_t a = 0; a < sub.agents.size() && ok; ++a) {
      const Occupation& in = k[2 * a];
      const Occupation& out = k[2 * a + 1];
      if (in.empty()) ok = out.empty();
      else if (in.size() == 1) ok = out.empty() || (out.size() == 1 && out[0].t == sub.agents[a].O.at(in[0].t));
      else ok = false;
    }
    if (ok) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return LabeledOperator::square(sig, std::move(p));
}

namespace {

void check_new_names(const FockState& s, const std::string& skip, const std::vector<std::string>& names) {
  if (names.size() == 2 && names[0] == names[1]) throw Error(ErrorKind::BadSpec, "split wires need distinct names");
  for (const auto& n : names)
    for (const auto& w : s.wires)
      if (w.name == n && w.name != skip) throw Error(ErrorKind::BadSpec, "wire name " + n + " already used");
}

}  // namespace

FockState split_wire(const FockState& s, const WireSplit& spec) {
  int i = s.wire_index(spec.wire);
  if (i < 0) throw Error(ErrorKind::BadSpec, "unknown wire " + spec.wire);
  check_new_names(s, spec.wire, {spec.first, spec.second});
  const FockWire& w = s.wires[static_cast<std::size_t>(i)];
  FockWire a{spec.first, w.dim, w.cap}, b{spec.second, w.dim, w.cap};
  if (spec.kind == WireSplit::Kind::payload) {
    if (spec.first_dim <= 0 || spec.first_dim >= w.dim) throw Error(ErrorKind::BadSpec, "payload split point out of range");
    a.dim = spec.first_dim;
    b.dim = w.dim - spec.first_dim;
  } else if (spec.positions.empty()) {
    throw Error(ErrorKind::BadSpec, "position split needs positions");
  }
  std::vector<FockWire> wires = s.wires;
  wires[static_cast<std::size_t>(i)] = a;
  wires.insert(wires.begin() + i + 1, b);
  FockState r(wires);
  for (const auto& [k, v] : s.amps) {
    Occupation oa, ob;
    for (const auto& m : k[static_cast<std::size_t>(i)]) {
      bool first = spec.kind == WireSplit::Kind::payload
                       ? m.payload < spec.first_dim
                       : std::find(spec.positions.begin(), spec.positions.end(), m.t) != spec.positions.end();
      if (first) oa.push_back(m);
      else ob.push_back({m.t, spec.kind == WireSplit::Kind::payload ? m.payload - spec.first_dim : m.payload});
    }
    std::vector<Occupation> key = k;
    key[static_cast<std::size_t>(i)] = oa;
    key.insert(key.begin() + i + 1, ob);
    r.add(key, v);
  }
  return r;
}

FockState merge_wire(const FockState& s, const WireSplit& spec) {
  int i = s.wire_index(spec.first), j = s.wire_index(spec.second);
  if (i < 0 || j < 0) throw Error(ErrorKind::BadSpec, "merge needs both wires");
  check_new_names(s, spec.first, {spec.wire});
  if (s.wire_index(spec.wire) >= 0 && spec.wire != spec.first && spec.wire != spec.second)
    throw Error(ErrorKind::BadSpec, "wire name " + spec.wire + " already used");
  const FockWire& a = s.wires[static_cast<std::size_t>(i)];
  const FockWire& b = s.wires[static_cast<std::size_t>(j)];
  FockWire m{spec.wire, a.dim, a.cap};
  if (spec.kind == WireSplit::Kind::payload) {
    if (a.dim != spec.first_dim) throw Error(ErrorKind::BadSpec, "first wire dim differs from the split point");
    m.dim = a.dim + b.dim;
  } else if (a.dim != b.dim) {
    throw Error(ErrorKind::BadSpec, "position merge needs equal payload dims");
  }
  std::vector<FockWire> wires;
  for (std::size_t x = 0; x < s.wires.size(); ++x) {
    if (static_cast<int>(x) == j) continue;
    wires.push_back(static_cast<int>(x) == i ? m : s.wires[x]);
  }
  FockState r(wires);
  for (const auto& [k, v] : s.amps) {
    Occupation o = k[static_cast<std::size_t>(i)];
    for (const auto& msg : k[static_cast<std::size_t>(j)])
      o.push_back({msg.t, spec.kind == WireSplit::Kind::payload ? msg.payload + spec.first_dim : msg.payload});
    std::sort(o.begin(), o.end());
    std::vector<Occupation> key;
    for (std::size_t x = 0; x < k.size(); ++x) {
      if (static_cast<int>(x) == j) continue;
      key.push_back(static_cast<int>(x) == i ? o : k[x]);
    }
    r.add(key, v);
  }
  return r;
}

}  // namespace icausal

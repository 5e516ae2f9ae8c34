#include "icausal/cbox.hpp"

#include <future>
#include <set>

namespace icausal {

bool parse_slice_name(const std::string& name, std::string& base, int& t) {
  auto at = name.rfind('@');
  if (at == std::string::npos || at + 1 >= name.size()) return false;
  try {
    std::size_t used = 0;
    int v = std::stoi(name.substr(at + 1), &used);
    if (used != name.size() - at - 1) return false;
    base = name.substr(0, at);
    t = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

Signature SequenceRep::free_inputs() const {
  std::vector<Wire> w;
  std::set<std::string> produced;
  for (const auto& s : steps) {
    for (const auto& x : s.op.in_sig.wires())
      if (is_slice(x.name) || !produced.count(x.name)) w.push_back(x);
    for (const auto& x : s.op.out_sig.wires())
      if (!is_slice(x.name)) produced.insert(x.name);
  }
  return Signature(w);
}

Signature SequenceRep::free_outputs() const {
  std::vector<Wire> w;
  for (std::size_t n = 0; n < steps.size(); ++n)
    for (const auto& x : steps[n].op.out_sig.wires()) {
      bool consumed = false;
      if (!is_slice(x.name))
        for (std::size_t m = n + 1; m < steps.size() && !consumed; ++m) consumed = steps[m].op.in_sig.has(x.name);
      if (!consumed) w.push_back(x);
    }
  return Signature(w);
}

namespace {

void check_internal_wires(const SequenceRep& rep) {
  std::map<std::string, int> live;
  std::set<std::string> ever;
  for (std::size_t n = 0; n < rep.steps.size(); ++n) {
    const auto& op = rep.steps[n].op;
    for (const auto& x : op.in_sig.wires()) {
      if (op.out_sig.has(x.name))
        throw Error(ErrorKind::AncillaMismatch, "step " + std::to_string(n + 1) + " reads and writes " + x.name);
      if (rep.is_slice(x.name)) {
        if (rep.slices.at(x.name).wire().dim != x.dim) throw Error(ErrorKind::DimMismatch, "slice " + x.name);
        continue;
      }
      auto it = live.find(x.name);
      if (it != live.end()) {
        if (it->second != x.dim)
          throw Error(ErrorKind::AncillaMismatch, "internal wire " + x.name + " changes dimension");
        live.erase(it);
      } else if (ever.count(x.name)) {
        throw Error(ErrorKind::AncillaMismatch, "internal wire " + x.name + " consumed twice");
      }
    }
    for (const auto& x : op.out_sig.wires()) {
      if (rep.is_slice(x.name)) {
        if (rep.slices.at(x.name).wire().dim != x.dim) throw Error(ErrorKind::DimMismatch, "slice " + x.name);
        continue;
      }
      if (!ever.insert(x.name).second) throw Error(ErrorKind::AncillaMismatch, "internal wire " + x.name + " produced twice");
      live[x.name] = x.dim;
    }
  }
}

Mat domain_columns(const Step& s, int sector_cap, const std::map<std::string, FockSlice>& slices) {
  const auto n = static_cast<Eigen::Index>(s.op.in_sig.dim());
  Mat d = s.restricted() ? s.domain : Mat::Identity(n, n);
  if (d.rows() != n) throw Error(ErrorKind::DimMismatch, "domain does not match the step input");
  if (sector_cap < 0) return d;
  std::vector<const FockSlice*> sl;
  for (const auto& w : s.op.in_sig.wires()) {
    auto it = slices.find(w.name);
    sl.push_back(it == slices.end() ? nullptr : &it->second);
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < d.cols(); ++c) {
    bool ok = true;
    for (Eigen::Index r = 0; r < n && ok; ++r) {
      if (d(r, c) == cplx(0.0)) continue;
      auto digits = s.op.in_sig.unravel(static_cast<std::uint64_t>(r));
      for (std::size_t i = 0; i < digits.size() && ok; ++i)
        if (sl[i] && static_cast<int>(sl[i]->basis[static_cast<std::size_t>(digits[i])].size()) > sector_cap) ok = false;
    }
    if (ok) keep.push_back(c);
  }
  Mat r(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) r.col(static_cast<Eigen::Index>(i)) = d.col(keep[i]);
  return r;
}

StepCheck check_step(const Step& s, std::size_t index, int sector_cap, const std::map<std::string, FockSlice>& slices) {
  Mat d = domain_columns(s, sector_cap, slices);
  StepCheck c;
  c.step = index;
  c.columns = static_cast<std::size_t>(d.cols());
  if (d.cols() == 0) return c;
  Mat vd = s.op.m * d;
  c.deviation = max_abs(vd.adjoint() * vd - d.adjoint() * d);
  return c;
}

}  // namespace

IsometryReport verify_sequence_isometries(const SequenceRep& rep, int sector_cap, double tol) {
  std::vector<std::future<StepCheck>> jobs;
  for (std::size_t n = 0; n < rep.steps.size(); ++n)
    jobs.push_back(std::async(std::launch::async, check_step, std::cref(rep.steps[n]), n + 1, sector_cap,
                              std::cref(rep.slices)));
  IsometryReport r;
  for (auto& j : jobs) {
    r.steps.push_back(j.get());
    r.max_deviation = std::max(r.max_deviation, r.steps.back().deviation);
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

CausalBoxChoi compose_sequence(const SequenceRep& rep, bool strict, double tol) {
  if (rep.steps.empty()) throw Error(ErrorKind::BadSpec, "empty sequence representation");
  check_internal_wires(rep);
  if (strict) {
    auto iso = verify_sequence_isometries(rep, -1, tol);
    if (!iso.pass) throw Error(ErrorKind::NotIsometry, "step deviation " + std::to_string(iso.max_deviation));
  }
  LabeledVector v = choi_vector_of(rep.steps[0].op).vec;
  for (std::size_t n = 1; n < rep.steps.size(); ++n) v = link_vectors(v, choi_vector_of(rep.steps[n].op).vec);
  CausalBoxChoi r;
  r.choi.in_sig = rep.free_inputs();
  r.choi.out_sig = rep.free_outputs();
  r.choi.vec = permute_wires(v, r.choi.in_sig.concat(r.choi.out_sig).names());
  r.slices = rep.slices;
  return r;
}

ChoiMatrix loop_compose(const ChoiMatrix& m, const std::string& c, const std::string& b) {
  if (!m.out_sig.has(c)) throw Error(ErrorKind::UnknownWire, "loop output " + c);
  if (!m.in_sig.has(b)) throw Error(ErrorKind::UnknownWire, "loop input " + b);
  const int d = m.out_sig.at(c).dim;
  if (m.in_sig.at(b).dim != d) throw Error(ErrorKind::DimMismatch, "loop " + c + " -> " + b);
  ChoiMatrix r;
  r.in_sig = m.in_sig.without({b});
  r.out_sig = m.out_sig.without({c});
  Signature rest = r.in_sig.concat(r.out_sig);
  std::vector<std::string> order = rest.names();
  order.push_back(b);
  order.push_back(c);
  LabeledOperator p = m.mat.permuted_square(order);
  const auto dr = static_cast<Eigen::Index>(rest.dim());
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  Mat acc = Mat::Zero(dr, dr);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = 0; l < d; ++l)
      for (Eigen::Index x = 0; x < dr; ++x)
        for (Eigen::Index y = 0; y < dr; ++y) acc(x, y) += p.m(x * dd + k * d + k, y * dd + l * d + l);
  r.mat = LabeledOperator(rest, rest, std::move(acc));
  return r;
}

void check_monotone(const std::map<int, int>& r) {
  bool first = true;
  int prev = 0;
  for (const auto& [t, v] : r) {
    if (!first && v <= prev)
      throw Error(ErrorKind::NonMonotone, "relabeling is not strictly increasing at t = " + std::to_string(t));
    prev = v;
    first = false;
  }
}

std::string relabel_name(const std::string& name, const std::map<int, int>& r) {
  std::string base;
  int t = 0;
  if (!parse_slice_name(name, base, t)) return name;
  auto it = r.find(t);
  if (it == r.end()) throw Error(ErrorKind::BadSpec, "relabeling undefined at t = " + std::to_string(t));
  return base + "@" + std::to_string(it->second);
}

namespace {

std::map<std::string, std::string> renaming(const std::vector<std::string>& names, const std::map<int, int>& r) {
  std::map<std::string, std::string> m;
  for (const auto& n : names) m[n] = relabel_name(n, r);
  return m;
}

}  // namespace

SequenceRep relabel_positions(const SequenceRep& rep, const std::map<int, int>& r) {
  check_monotone(r);
  SequenceRep out;
  for (const auto& [name, s] : rep.slices) {
    auto it = r.find(s.t);
    if (it == r.end()) throw Error(ErrorKind::BadSpec, "relabeling undefined at t = " + std::to_string(s.t));
    out.add_slice(s.at(it->second));
  }
  for (const auto& s : rep.steps) {
    Step n = s;
    auto names = s.op.in_sig.names();
    for (const auto& x : s.op.out_sig.names()) names.push_back(x);
    n.op = renamed(s.op, renaming(names, r));
    out.steps.push_back(std::move(n));
  }
  return out;
}

CausalBoxChoi relabel_positions(const CausalBoxChoi& box, const std::map<int, int>& r) {
  check_monotone(r);
  CausalBoxChoi out;
  auto m = renaming(box.choi.vec.sig.names(), r);
  out.choi.vec = renamed(box.choi.vec, m);
  out.choi.in_sig = renamed(box.choi.in_sig, m);
  out.choi.out_sig = renamed(box.choi.out_sig, m);
  for (const auto& [name, s] : box.slices) {
    auto it = r.find(s.t);
    if (it == r.end()) throw Error(ErrorKind::BadSpec, "relabeling undefined at t = " + std::to_string(s.t));
    auto moved = s.at(it->second);
    out.slices[moved.name()] = moved;
  }
  return out;
}

}  // namespace icausal

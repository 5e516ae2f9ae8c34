#include "icausal/procmat.hpp"

#include <algorithm>
#include <functional>

namespace icausal {

std::string in_wire(int k) { return "A" + std::to_string(k) + ".I"; }
std::string out_wire(int k) { return "A" + std::to_string(k) + ".O"; }

std::string ancilla_wire(int n, std::size_t part, std::size_t parts) {
  std::string b = "alpha" + std::to_string(n);
  return parts <= 1 ? b : b + "_" + std::to_string(part + 1);
}

std::string future_ancilla_wire(std::size_t part, std::size_t parts) {
  return parts <= 1 ? std::string("alphaF") : "alphaF_" + std::to_string(part + 1);
}

Layout Layout::standard(int n_agents) {
  Layout l;
  for (int k = 1; k <= n_agents; ++k) l.agents.push_back({std::to_string(k), in_wire(k), out_wire(k)});
  return l;
}

std::vector<std::string> Layout::io_wires() const {
  std::vector<std::string> r;
  for (const auto& a : agents) {
    r.push_back(a.in);
    r.push_back(a.out);
  }
  return r;
}

int ProcessMatrix::wire_dim(const std::string& name) const {
  if (name.empty() || !w.in_sig.has(name)) return 1;
  return w.in_sig.at(name).dim;
}

double ProcessMatrix::expected_trace() const {
  double t = d_past();
  for (const auto& a : layout.agents) t *= wire_dim(a.out);
  return t;
}

double Instrument::completeness_deviation() const {
  Eigen::Index d = -1;
  Mat acc;
  for (const auto& [label, kraus] : outcomes)
    for (const auto& k : kraus) {
      if (d < 0) {
        d = k.m.cols();
        acc = Mat::Zero(d, d);
      }
      acc += k.m.adjoint() * k.m;
    }
  if (d < 0) return 1.0;
  return max_abs(acc - Mat::Identity(d, d));
}

ChoiMatrix Instrument::outcome_choi(std::size_t i) const { return choi_matrix_of(outcomes.at(i).second); }

LabeledOperator reduce_replace(const LabeledOperator& w, const std::vector<std::string>& wires) {
  std::vector<std::string> present;
  double d = 1.0;
  for (const auto& n : wires)
    if (w.in_sig.has(n)) {
      present.push_back(n);
      d *= w.in_sig.at(n).dim;
    }
  if (present.empty()) return w;
  LabeledOperator a = w.permuted_square(w.in_sig.names());
  LabeledOperator red = partial_trace(a, present);
  Signature tr = a.in_sig.select(present);
  LabeledOperator full = tensor_product(red, LabeledOperator::identity(tr, tr));
  full.m /= d;
  return full.permuted_square(a.in_sig.names());
}

LabeledOperator lv_project(const LabeledOperator& w, const Layout& layout) {
  for (const auto& n : layout.io_wires()) w.in_sig.at(n);
  const std::size_t n = layout.agents.size();
  LabeledOperator acc = w;
  // - F prod_k (1 - A^O_k + A^{IO}_k)
  std::size_t terms = 1;
  for (std::size_t i = 0; i < n; ++i) terms *= 3;
  for (std::size_t code = 0; code < terms; ++code) {
    std::vector<std::string> wires{layout.future};
    double sign = 1.0;
    std::size_t c = code;
    for (std::size_t k = 0; k < n; ++k, c /= 3) {
      switch (c % 3) {
        case 0: break;
        case 1:
          sign = -sign;
          wires.push_back(layout.agents[k].out);
          break;
        case 2:
          wires.push_back(layout.agents[k].in);
          wires.push_back(layout.agents[k].out);
          break;
      }
    }
    LabeledOperator t = reduce_replace(w, wires);
    acc.m -= sign * t.m;
  }
  std::vector<std::string> all{layout.past, layout.future};
  for (const auto& x : layout.io_wires()) all.push_back(x);
  acc.m += reduce_replace(w, all).m;
  return acc;
}

PmReport validate_process_matrix(const ProcessMatrix& pm, double tol) {
  PmReport r;
  if (!pm.w.in_sig.same_set(pm.w.out_sig)) throw Error(ErrorKind::NonSquare, "process matrix");
  ProcessMatrix sq{pm.w.permuted_square(pm.w.in_sig.names()), pm.layout};
  const Mat& m = sq.w.m;
  r.herm_dev = max_abs(m - m.adjoint());
  Mat h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  r.min_eig = es.eigenvalues().minCoeff();
  r.trace = m.trace().real();
  r.trace_dev = std::abs(m.trace() - cplx(pm.expected_trace()));
  r.lv_dev = max_abs(lv_project(sq.w, pm.layout).m - m);
  r.pass = r.min_eig >= -tol && r.trace_dev <= tol && r.lv_dev <= tol && r.herm_dev <= tol;
  return r;
}

BornResult born_probability(const ProcessMatrix& pm, const std::vector<ChoiMatrix>& ops,
                            const std::optional<LabeledOperator>& rho) {
  if (ops.size() != pm.layout.agents.size())
    throw Error(ErrorKind::SignatureMismatch, "one operation per agent expected");
  LabeledOperator cur = pm.w;
  if (rho) {
    if (!rho->in_sig.same_set(Signature({pm.w.in_sig.at(pm.layout.past)})))
      throw Error(ErrorKind::SignatureMismatch, "state must live on the past wire");
    cur = link_matrices(*rho, cur);
  } else if (pm.d_past() != 1) {
    throw Error(ErrorKind::SignatureMismatch, "non-trivial past needs an input state");
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& a = pm.layout.agents[i];
    Signature want({pm.w.in_sig.at(a.in), pm.w.in_sig.at(a.out)});
    if (!ops[i].mat.in_sig.same_set(want))
      throw Error(ErrorKind::SignatureMismatch, "operation for agent " + a.name);
    cur = link_matrices(ops[i].mat, cur);
  }
  BornResult r;
  r.probability = trace(cur).real();
  r.future_state = cur;
  return r;
}

bool is_fixed_order(const ProcessMatrix& pm, const std::vector<int>& order, double tol) {
  LabeledOperator m = pm.w;
  if (pm.w.in_sig.has(pm.layout.future)) m = partial_trace(m, {pm.layout.future});
  for (std::size_t i = order.size(); i-- > 0;) {
    const auto& a = pm.layout.agents.at(static_cast<std::size_t>(order[i]));
    if (max_abs(reduce_replace(m, {a.out}).m - m.m) > tol) return false;
    double d = m.in_sig.at(a.out).dim;
    m = partial_trace(m, {a.out, a.in});
    m.m /= d;
  }
  if (m.in_sig.has(pm.layout.past) && max_abs(reduce_replace(m, {pm.layout.past}).m - m.m) > tol)
    return false;
  return true;
}

Signature InstrumentTree::branch_in(const std::vector<int>& prefix) const {
  std::vector<Wire> w;
  if (prefix.empty()) {
    w.push_back({"P", d_past, WireKind::system});
    return Signature(w);
  }
  int k = prefix.back();
  w.push_back({out_wire(k), d_out.at(static_cast<std::size_t>(k - 1)), WireKind::system});
  int n = static_cast<int>(prefix.size());
  int a = ancilla_dims.size() >= static_cast<std::size_t>(n) ? ancilla_dims[static_cast<std::size_t>(n - 1)] : 1;
  if (a > 1) w.push_back({ancilla_wire(n), a, WireKind::ancilla});
  return Signature(w);
}

Signature InstrumentTree::branch_out(const std::vector<int>& prefix, int next) const {
  std::vector<Wire> w;
  if (next == 0) {
    w.push_back({"F", d_future, WireKind::system});
    return Signature(w);
  }
  w.push_back({in_wire(next), d_in.at(static_cast<std::size_t>(next - 1)), WireKind::system});
  int n = static_cast<int>(prefix.size()) + 1;
  int a = ancilla_dims.size() >= static_cast<std::size_t>(n) ? ancilla_dims[static_cast<std::size_t>(n - 1)] : 1;
  if (a > 1) w.push_back({ancilla_wire(n), a, WireKind::ancilla});
  return Signature(w);
}

ProcessMatrix build_qccc(const InstrumentTree& tree, double tol) {
  const int n = tree.n_agents;
  std::map<std::pair<std::vector<int>, int>, ChoiMatrix> chois;
  for (const auto& [prefix, br] : tree.branches) {
    Signature in = tree.branch_in(prefix);
    auto d = static_cast<Eigen::Index>(in.dim());
    Mat acc = Mat::Zero(d, d);
    for (const auto& [next, kraus] : br) {
      Signature out = tree.branch_out(prefix, next);
      for (const auto& k : kraus) {
        if (!k.in_sig.same_set(in) || !k.out_sig.same_set(out))
          throw Error(ErrorKind::SignatureMismatch, "branch operator signature");
        LabeledOperator kk = k.permuted(in.names(), out.names());
        acc += kk.m.adjoint() * kk.m;
      }
      if (!kraus.empty()) chois.emplace(std::make_pair(prefix, next), choi_matrix_of(kraus));
    }
    if (max_abs(acc - Mat::Identity(d, d)) > tol)
      throw Error(ErrorKind::IncompleteInstrument, "branch after " + std::to_string(prefix.size()) + " agents");
  }

  std::vector<Wire> canon{{"P", tree.d_past, WireKind::system}};
  for (int k = 1; k <= n; ++k) {
    canon.push_back({in_wire(k), tree.d_in.at(static_cast<std::size_t>(k - 1)), WireKind::system});
    canon.push_back({out_wire(k), tree.d_out.at(static_cast<std::size_t>(k - 1)), WireKind::system});
  }
  canon.push_back({"F", tree.d_future, WireKind::system});
  Signature sig(canon);
  auto dd = static_cast<Eigen::Index>(sig.dim());
  LabeledOperator total(sig, sig, Mat::Zero(dd, dd));

  std::vector<int> order;
  std::function<void(std::vector<int>&, const LabeledOperator&)> rec = [&](std::vector<int>& pre,
                                                                           const LabeledOperator& acc) {
    int next_default = static_cast<int>(pre.size()) == n ? 0 : -1;
    for (int next = (next_default == 0 ? 0 : 1); next <= (next_default == 0 ? 0 : n); ++next) {
      if (next != 0 && std::find(pre.begin(), pre.end(), next) != pre.end()) continue;
      auto it = chois.find({pre, next});
      if (it == chois.end()) continue;
      LabeledOperator nxt = pre.empty() ? it->second.mat : link_matrices(acc, it->second.mat);
      if (next == 0) {
        total = add(total, nxt);
      } else {
        pre.push_back(next);
        rec(pre, nxt);
        pre.pop_back();
      }
    }
  };
  rec(order, LabeledOperator());
  return {total, Layout::standard(n)};
}

}  // namespace icausal

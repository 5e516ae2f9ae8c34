#include "icausal/qcqc.hpp"

#include <algorithm>
#include <set>

namespace icausal {

QcQc::QcQc(int n, std::vector<int> din, std::vector<int> dout, int dp, int df,
           std::vector<std::vector<int>> anc)
    : n_agents(n), d_in(std::move(din)), d_out(std::move(dout)), d_past(dp), d_future(df),
      ancillas(std::move(anc)) {
  if (n < 1 || n > 16) throw Error(ErrorKind::BadSpec, "agent count must be in 1..16");
  if (static_cast<int>(d_in.size()) != n || static_cast<int>(d_out.size()) != n)
    throw Error(ErrorKind::BadSpec, "agent dims");
  ancillas.resize(static_cast<std::size_t>(n + 1));
}

Signature QcQc::ancilla_sig(int n) const {
  const auto& dims = ancillas.at(static_cast<std::size_t>(n - 1));
  std::vector<Wire> w;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    std::string name = n == n_agents + 1 ? future_ancilla_wire(j, dims.size()) : ancilla_wire(n, j, dims.size());
    w.push_back({name, dims[j], WireKind::ancilla});
  }
  return Signature(w);
}

Signature QcQc::block_in(AgentMask K, int k) const {
  if (k == 0) return Signature({{"P", d_past, WireKind::system}});
  Signature s({{out_wire(k), d_out.at(static_cast<std::size_t>(k - 1)), WireKind::system}});
  return s.concat(ancilla_sig(level(K, k)));
}

Signature QcQc::block_out(AgentMask K, int k, int to) const {
  int n = level(K, k);
  if (to == 0) {
    if (n != n_agents) throw Error(ErrorKind::BadSpec, "only the last step reaches the future");
    return Signature({{"F", d_future, WireKind::system}}).concat(ancilla_sig(n_agents + 1));
  }
  if (n >= n_agents) throw Error(ErrorKind::BadSpec, "last step must go to the future");
  return Signature({{in_wire(to), d_in.at(static_cast<std::size_t>(to - 1)), WireKind::system}})
      .concat(ancilla_sig(n + 1));
}

void QcQc::set_block(AgentMask K, int k, int to, const Mat& m) {
  if (k != 0 && (contains(K, k) || k > n_agents)) throw Error(ErrorKind::BadSpec, "k must lie outside K");
  if (to != 0 && (contains(K, to) || to == k || to > n_agents)) throw Error(ErrorKind::BadSpec, "bad target");
  Signature in = block_in(K, k), out = block_out(K, k, to);
  auto r = static_cast<Eigen::Index>(out.dim()), c = static_cast<Eigen::Index>(in.dim());
  if (m.rows() > r || m.cols() > c) throw Error(ErrorKind::DimMismatch, "block larger than its wires");
  Mat p = Mat::Zero(r, c);
  p.topLeftCorner(m.rows(), m.cols()) = m;
  blocks.insert_or_assign(BlockKey{K, k, to}, LabeledOperator(in, out, std::move(p)));
}

LabeledOperator QcQc::block(AgentMask K, int k, int to) const {
  auto it = blocks.find({K, k, to});
  if (it != blocks.end()) return it->second;
  Signature in = block_in(K, k), out = block_out(K, k, to);
  return {in, out, Mat::Zero(static_cast<Eigen::Index>(out.dim()), static_cast<Eigen::Index>(in.dim()))};
}

std::vector<int> QcQc::successors(AgentMask K, int k) const {
  std::vector<int> r;
  if (level(K, k) == n_agents) {
    if (has_block(K, k, 0)) r.push_back(0);
    return r;
  }
  AgentMask used = k == 0 ? K : (K | bit(k));
  for (int t = 1; t <= n_agents; ++t)
    if (!contains(used, t)) {
      auto it = blocks.find({K, k, t});
      if (it != blocks.end() && max_abs(it->second.m) > 0.0) r.push_back(t);
    }
  return r;
}

std::vector<std::pair<AgentMask, int>> QcQc::reachable(int n) const {
  std::set<std::pair<AgentMask, int>> cur;
  for (int t : successors(0, 0)) cur.insert({0, t});
  for (int m = 2; m <= n; ++m) {
    std::set<std::pair<AgentMask, int>> nxt;
    for (const auto& [K, k] : cur)
      for (int t : successors(K, k))
        if (t != 0) nxt.insert({K | bit(k), t});
    cur = std::move(nxt);
  }
  return {cur.begin(), cur.end()};
}

Signature QcQc::process_sig() const {
  std::vector<Wire> w{{"P", d_past, WireKind::system}};
  for (int k = 1; k <= n_agents; ++k) {
    w.push_back({in_wire(k), d_in[static_cast<std::size_t>(k - 1)], WireKind::system});
    w.push_back({out_wire(k), d_out[static_cast<std::size_t>(k - 1)], WireKind::system});
  }
  w.push_back({"F", d_future, WireKind::system});
  return Signature(w).concat(ancilla_sig(n_agents + 1));
}

LabeledVector choi_of_block(const QcQc& q, AgentMask K, int k, int to) {
  return choi_vector_of(q.block(K, k, to)).vec;
}

namespace {

Signature witness_sig(const QcQc& q, AgentMask K, int k) {
  std::vector<Wire> w{{"P", q.d_past, WireKind::system}};
  for (int j = 1; j <= q.n_agents; ++j)
    if (contains(K, j)) {
      w.push_back({in_wire(j), q.d_in[static_cast<std::size_t>(j - 1)], WireKind::system});
      w.push_back({out_wire(j), q.d_out[static_cast<std::size_t>(j - 1)], WireKind::system});
    }
  w.push_back({in_wire(k), q.d_in[static_cast<std::size_t>(k - 1)], WireKind::system});
  return Signature(w).concat(q.ancilla_sig(popcount(K) + 1));
}

std::map<std::pair<AgentMask, int>, LabeledVector> all_partial_vectors(const QcQc& q) {
  std::map<std::pair<AgentMask, int>, LabeledVector> w;
  const int n = q.n_agents;
  for (int size = 0; size < n; ++size)
    for (AgentMask K = 0; K <= q.all(); ++K) {
      if (popcount(K) != size) continue;
      for (int k = 1; k <= n; ++k) {
        if (contains(K, k)) continue;
        LabeledVector acc(witness_sig(q, K, k));
        if (size == 0) {
          if (q.has_block(0, 0, k)) acc = add(acc, choi_of_block(q, 0, 0, k));
        } else {
          for (int j = 1; j <= n; ++j) {
            if (!contains(K, j)) continue;
            AgentMask prev = K & ~bit(j);
            if (!q.has_block(prev, j, k)) continue;
            acc = add(acc, link_vectors(w.at({prev, j}), choi_of_block(q, prev, j, k)));
          }
        }
        acc.prune(0.0);
        w.emplace(std::make_pair(K, k), std::move(acc));
      }
    }
  return w;
}

}  // namespace

LabeledVector partial_process_vector(const QcQc& q, AgentMask K, int k) {
  return all_partial_vectors(q).at({K, k});
}

LabeledVector process_vector(const QcQc& q) {
  auto w = all_partial_vectors(q);
  LabeledVector acc(q.process_sig());
  for (int k = 1; k <= q.n_agents; ++k) {
    AgentMask K = q.all() & ~bit(k);
    if (!q.has_block(K, k, 0)) continue;
    acc = add(acc, link_vectors(w.at({K, k}), choi_of_block(q, K, k, 0)));
  }
  acc.prune(0.0);
  return acc;
}

LabeledVector order_vector(const QcQc& q, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != q.n_agents) throw Error(ErrorKind::BadSpec, "order length");
  LabeledVector acc = choi_of_block(q, 0, 0, order[0]);
  AgentMask K = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int k = order[i];
    int to = i + 1 < order.size() ? order[i + 1] : 0;
    acc = link_vectors(acc, choi_of_block(q, K, k, to));
    K |= bit(k);
  }
  return permute_wires(acc, q.process_sig().names());
}

ProcessMatrix process_matrix(const QcQc& q) {
  LabeledVector w = process_vector(q);
  LabeledOperator full = outer(permute_wires(w, q.process_sig().names()));
  std::vector<std::string> af = q.ancilla_sig(q.n_agents + 1).names();
  LabeledOperator red = af.empty() ? full : partial_trace(full, af);
  return {red, Layout::standard(q.n_agents)};
}

LabeledVector contract_agents(const LabeledVector& w, const std::vector<LabeledOperator>& agents) {
  LabeledVector acc = w;
  for (const auto& a : agents) acc = link_vectors(choi_vector_of(a).vec, acc);
  return acc;
}

Witnesses witnesses(const QcQc& q) {
  Witnesses r;
  for (const auto& [key, v] : all_partial_vectors(q)) {
    LabeledOperator o = outer(v);
    std::vector<std::string> a = q.ancilla_sig(popcount(key.first) + 1).names();
    r.emplace(key, a.empty() ? o : partial_trace(o, a));
  }
  return r;
}

namespace {

LabeledOperator with_identity(const LabeledOperator& m, const Wire& w) {
  Signature s({w});
  return tensor_product(m, LabeledOperator::identity(s, s));
}

LabeledOperator zero_like(const Signature& s) {
  auto d = static_cast<Eigen::Index>(s.dim());
  return {s, s, Mat::Zero(d, d)};
}

}  // namespace

QcqcReport check_qcqc_conditions(const QcQc& q, const LabeledOperator& w, const Witnesses& ws, double tol) {
  QcqcReport r;
  const int n = q.n_agents;
  auto agent_in = [&](int k) { return Wire{in_wire(k), q.d_in[static_cast<std::size_t>(k - 1)], WireKind::system}; };
  auto agent_out = [&](int k) { return Wire{out_wire(k), q.d_out[static_cast<std::size_t>(k - 1)], WireKind::system}; };

  Signature psig({{"P", q.d_past, WireKind::system}});
  LabeledOperator lhs = zero_like(psig);
  for (int k = 1; k <= n; ++k) lhs = add(lhs, partial_trace(ws.at({0, k}), {in_wire(k)}));
  r.past_dev = max_diff(lhs, LabeledOperator::identity(psig, psig));

  for (AgentMask K = 1; K < q.all(); ++K) {
    std::vector<Wire> sw{{"P", q.d_past, WireKind::system}};
    for (int j = 1; j <= n; ++j)
      if (contains(K, j)) {
        sw.push_back(agent_in(j));
        sw.push_back(agent_out(j));
      }
    Signature s(sw);
    LabeledOperator l = zero_like(s), rr = zero_like(s);
    for (int k = 1; k <= n; ++k)
      if (!contains(K, k)) l = add(l, partial_trace(ws.at({K, k}), {in_wire(k)}));
    for (int k = 1; k <= n; ++k)
      if (contains(K, k)) rr = add(rr, with_identity(ws.at({K & ~bit(k), k}), agent_out(k)));
    r.recursion_dev = std::max(r.recursion_dev, max_diff(l, rr));
  }

  LabeledOperator trf = partial_trace(w, {"F"});
  LabeledOperator rf = zero_like(trf.in_sig);
  for (int k = 1; k <= n; ++k) rf = add(rf, with_identity(ws.at({q.all() & ~bit(k), k}), agent_out(k)));
  r.future_dev = max_diff(trf, rf);
  r.pass = r.past_dev <= tol && r.recursion_dev <= tol && r.future_dev <= tol;
  return r;
}

KrausisoReport check_krausiso(const QcQc& q, double tol) {
  KrausisoReport r;
  const int n = q.n_agents;
  // sum_{to} V^{->to}_{K,k}^dagger V^{->to}_{L,l}
  auto gram = [&](AgentMask K, int k, AgentMask L, int l) {
    Mat acc = Mat::Zero(static_cast<Eigen::Index>(q.block_in(K, k).dim()),
                        static_cast<Eigen::Index>(q.block_in(L, l).dim()));
    std::vector<int> targets;
    if (q.level(K, k) == n) {
      targets.push_back(0);
    } else {
      for (int t = 1; t <= n; ++t) targets.push_back(t);
    }
    for (int t : targets) {
      if (!q.has_block(K, k, t) || !q.has_block(L, l, t)) continue;
      acc += q.block(K, k, t).m.adjoint() * q.block(L, l, t).m;
    }
    return acc;
  };
  auto has_any = [&](AgentMask K, int k) {
    for (const auto& [key, op] : q.blocks)
      if (key.K == K && key.k == k) return true;
    return false;
  };

  if (has_any(0, 0)) {
    Mat g = gram(0, 0, 0, 0);
    r.diagonal_dev = max_abs(g - Mat::Identity(g.rows(), g.cols()));
  }
  for (AgentMask S = 1; S <= q.all(); ++S) {
    for (int k = 1; k <= n; ++k) {
      if (!contains(S, k)) continue;
      AgentMask K = S & ~bit(k);
      if (!has_any(K, k)) continue;
      for (int l = 1; l <= n; ++l) {
        if (!contains(S, l)) continue;
        AgentMask L = S & ~bit(l);
        if (!has_any(L, l)) continue;
        Mat g = gram(K, k, L, l);
        if (k == l)
          r.diagonal_dev = std::max(r.diagonal_dev, max_abs(g - Mat::Identity(g.rows(), g.cols())));
        else
          r.cross_dev = std::max(r.cross_dev, max_abs(g));
      }
    }
  }
  r.pass = r.diagonal_dev <= tol && r.cross_dev <= tol;
  return r;
}

LabeledOperator assemble_control_isometry(const QcQc& q, int n) {
  const int N = q.n_agents;
  if (n < 1 || n > N + 1) throw Error(ErrorKind::BadSpec, "step index out of range");
  int dI = *std::max_element(q.d_in.begin(), q.d_in.end());
  int dO = *std::max_element(q.d_out.begin(), q.d_out.end());

  std::vector<std::pair<AgentMask, int>> cin, cout;
  if (n == 1) cin.push_back({0, 0});
  else cin = q.reachable(n - 1);
  if (n <= N) cout = q.reachable(n);

  Signature in_sig, out_sig;
  Signature ain = n == 1 ? Signature() : q.ancilla_sig(n - 1);
  Signature aout = q.ancilla_sig(n);
  if (n == 1) {
    in_sig = Signature({{"P", q.d_past, WireKind::system}});
  } else {
    in_sig = Signature({{"At.O", dO, WireKind::system}})
                 .concat(ain)
                 .concat(Signature({{"C" + std::to_string(n - 1), static_cast<int>(cin.size()), WireKind::control}}));
  }
  if (n <= N) {
    out_sig = Signature({{"At.I", dI, WireKind::system}})
                  .concat(aout)
                  .concat(Signature({{"C" + std::to_string(n), static_cast<int>(cout.size()), WireKind::control}}));
  } else {
    out_sig = Signature({{"F", q.d_future, WireKind::system}}).concat(aout);
  }
  const std::uint64_t da_in = ain.dim(), da_out = aout.dim();
  const std::uint64_t nci = n == 1 ? 1 : cin.size(), nco = n <= N ? cout.size() : 1;
  Mat m = Mat::Zero(static_cast<Eigen::Index>(out_sig.dim()), static_cast<Eigen::Index>(in_sig.dim()));

  for (std::size_t ci = 0; ci < cin.size(); ++ci) {
    auto [K, k] = cin[ci];
    auto succ = q.successors(K, k);
    if (succ.empty()) throw Error(ErrorKind::MissingBlock, "reachable sector without outgoing blocks");
    AgentMask Kn = k == 0 ? K : (K | bit(k));
    for (int to : succ) {
      std::uint64_t co = 0;
      if (to != 0) {
        auto it = std::find(cout.begin(), cout.end(), std::make_pair(Kn, to));
        co = static_cast<std::uint64_t>(it - cout.begin());
      }
      LabeledOperator b = q.block(K, k, to);
      const std::uint64_t bin_t = k == 0 ? static_cast<std::uint64_t>(q.d_past)
                                         : static_cast<std::uint64_t>(q.d_out[static_cast<std::size_t>(k - 1)]);
      const std::uint64_t bout_t = to == 0 ? static_cast<std::uint64_t>(q.d_future)
                                           : static_cast<std::uint64_t>(q.d_in[static_cast<std::size_t>(to - 1)]);
      for (std::uint64_t x = 0; x < bin_t; ++x)
        for (std::uint64_t a = 0; a < da_in; ++a) {
          std::uint64_t col_b = x * da_in + a;
          std::uint64_t col = (x * da_in + a) * nci + (n == 1 ? 0 : ci);
          for (std::uint64_t y = 0; y < bout_t; ++y)
            for (std::uint64_t a2 = 0; a2 < da_out; ++a2) {
              cplx v = b.m(static_cast<Eigen::Index>(y * da_out + a2), static_cast<Eigen::Index>(col_b));
              if (v == cplx(0.0)) continue;
              std::uint64_t row = (y * da_out + a2) * nco + co;
              m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += v;
            }
        }
    }
  }
  return {in_sig, out_sig, std::move(m)};
}

QcQc random_qcqc(Rng& rng, int n, int d, int d_past, int d_future) {
  if (d_future <= 0) d_future = d;
  auto ceil_div = [](int a, int b) { return (a + b - 1) / b; };
  std::vector<int> a(static_cast<std::size_t>(n + 1), 1);
  a[1] = std::max(1, ceil_div(d_past, n * d));
  for (int m = 1; m < n; ++m)
    a[static_cast<std::size_t>(m + 1)] = std::max(1, ceil_div(m * a[static_cast<std::size_t>(m)], n - m));
  int af = std::max(1, ceil_div(n * d * a[static_cast<std::size_t>(n)], d_future));
  std::vector<std::vector<int>> anc;
  for (int m = 1; m <= n; ++m) {
    int x = a[static_cast<std::size_t>(m)];
    anc.push_back(x > 1 ? std::vector<int>{x} : std::vector<int>{});
  }
  anc.push_back(af > 1 ? std::vector<int>{af} : std::vector<int>{});
  QcQc q(n, std::vector<int>(static_cast<std::size_t>(n), d), std::vector<int>(static_cast<std::size_t>(n), d), d_past,
         d_future, anc);

  for (AgentMask S = 0; S <= q.all(); ++S) {
    std::vector<std::pair<AgentMask, int>> sources;
    if (S == 0) {
      sources.push_back({0, 0});
    } else {
      for (int k = 1; k <= n; ++k)
        if (contains(S, k)) sources.push_back({S & ~bit(k), k});
    }
    std::vector<int> targets;
    if (S == q.all()) {
      targets.push_back(0);
    } else {
      for (int t = 1; t <= n; ++t)
        if (!contains(S, t)) targets.push_back(t);
    }
    Eigen::Index cols = 0, rows = 0;
    for (auto [K, k] : sources) cols += static_cast<Eigen::Index>(q.block_in(K, k).dim());
    for (int t : targets)
      rows += static_cast<Eigen::Index>(q.block_out(sources[0].first, sources[0].second, t).dim());
    Mat v = haar_isometry(rng, rows, cols);
    Eigen::Index c0 = 0;
    for (auto [K, k] : sources) {
      auto c = static_cast<Eigen::Index>(q.block_in(K, k).dim());
      Eigen::Index r0 = 0;
      for (int t : targets) {
        auto r = static_cast<Eigen::Index>(q.block_out(K, k, t).dim());
        q.set_block(K, k, t, v.block(r0, c0, r, c));
        r0 += r;
      }
      c0 += c;
    }
  }
  return q;
}

namespace fixtures {

namespace {

Vec default_psi(const Vec& psi) {
  if (psi.size() == 0) {
    Vec v = Vec::Zero(2);
    v(0) = 1.0;
    return v;
  }
  return psi;
}

int other_of(int a, int lo) { return a == lo ? lo + 1 : lo; }

}  // namespace

QcQc dynamical_switch(const Vec& psi_in) {
  Vec psi = default_psi(psi_in);
  QcQc q(3, {2, 2, 2}, {2, 2, 2}, 1, 1, {{}, {}, {2}, {4, 3}});
  auto next = [](int k, int s) { return (k - 1 + s) % 3 + 1; };
  for (int k1 = 1; k1 <= 3; ++k1) q.set_block(0, 0, k1, psi / std::sqrt(3.0));
  for (int k1 = 1; k1 <= 3; ++k1) {
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    q.set_block(0, k1, next(k1, 1), p0);
    q.set_block(0, k1, next(k1, 2), p1);
  }
  for (int k1 = 1; k1 <= 3; ++k1)
    for (int s = 1; s <= 2; ++s) {
      int k2 = next(k1, s), k3 = next(k1, 3 - s);
      // rows (A^I_{k3}, alpha_3), columns A^O_{k2}
      Mat v = Mat::Zero(4, 2);
      if (s == 1) {
        v(0 * 2 + 0, 0) = 1.0;
        v(1 * 2 + 1, 1) = 1.0;
      } else {
        v(0 * 2 + 1, 0) = 1.0;
        v(1 * 2 + 0, 1) = 1.0;
      }
      q.set_block(bit(k1), k2, k3, v);
    }
  for (int k3 = 1; k3 <= 3; ++k3) {
    AgentMask K = q.all() & ~bit(k3);
    // columns (A^O_{k3}, alpha_3), rows (F, alpha_F^(1), alpha_F^(2))
    Mat v = Mat::Zero(12, 4);
    for (int c = 0; c < 4; ++c) v(c * 3 + (k3 - 1), c) = 1.0;
    q.set_block(K, k3, 0, v);
  }
  return q;
}

QcQc quantum_switch() {
  QcQc q(2, {2, 2}, {2, 2}, 2, 4, {{}, {}, {}});
  Mat id = Mat::Identity(2, 2);
  for (int k1 = 1; k1 <= 2; ++k1) {
    q.set_block(0, 0, k1, id / std::sqrt(2.0));
    q.set_block(0, k1, other_of(k1, 1), id);
  }
  for (int k2 = 1; k2 <= 2; ++k2) {
    Mat v = Mat::Zero(4, 2);
    for (int t = 0; t < 2; ++t) v(t * 2 + (k2 - 1), t) = 1.0;
    q.set_block(bit(other_of(k2, 1)), k2, 0, v);
  }
  return q;
}

QcQc double_quantum_switch(const Vec& psi_in, bool phase_flip) {
  Vec psi = default_psi(psi_in);
  QcQc q(4, {2, 2, 2, 2}, {2, 2, 2, 2}, 1, 2, {{}, {}, {}, {}, {2}});
  Mat id = Mat::Identity(2, 2);
  const double h = 1.0 / std::sqrt(2.0);
  for (int k1 = 1; k1 <= 2; ++k1) {
    q.set_block(0, 0, k1, psi * h);
    int k2 = other_of(k1, 1);
    q.set_block(0, k1, k2, id);
    for (int k3 = 3; k3 <= 4; ++k3) {
      double s = (phase_flip && k2 == 2 && k3 == 3) ? -h : h;
      q.set_block(bit(k1), k2, k3, s * id);
      int k4 = other_of(k3, 3);
      q.set_block(bit(1) | bit(2), k3, k4, id);
    }
  }
  for (int k4 = 3; k4 <= 4; ++k4) {
    Mat v = Mat::Zero(4, 2);
    for (int t = 0; t < 2; ++t) v(t * 2 + (k4 % 2), t) = 1.0;
    q.set_block(q.all() & ~bit(k4), k4, 0, v);
  }
  return q;
}

QcQc dynamical_parallel(const Vec& psi_in) {
  Vec psi = default_psi(psi_in);
  // agents A = 1, B = 2, C = 3
  QcQc q(3, {2, 2, 2}, {2, 2, 2}, 1, 6, {{}, {2}, {3}, {}});
  q.set_block(0, 0, 1, psi);
  // rows (B^I, alpha_2), columns A^O
  Mat vb = Mat::Zero(4, 2);
  vb(0 * 2 + 0, 0) = 1.0;
  vb(1 * 2 + 1, 1) = 1.0;
  q.set_block(0, 1, 2, vb);
  // rows (C^I, alpha_3), columns (B^O, alpha_2)
  Mat vc = Mat::Zero(6, 4);
  for (int b = 0; b < 2; ++b) {
    vc(0 * 3 + b, b * 2 + 0) = 1.0;
    vc(b * 3 + 2, b * 2 + 1) = 1.0;
  }
  q.set_block(bit(1), 2, 3, vc);
  // rows F, columns (C^O, alpha_3)
  Mat vf = Mat::Zero(6, 6);
  for (int c = 0; c < 2; ++c) {
    for (int a = 0; a < 2; ++a) vf(a * 2 + c, c * 3 + a) = 1.0;
    vf(4 + c, c * 3 + 2) = 1.0;
  }
  q.set_block(bit(1) | bit(2), 3, 0, vf);
  return q;
}

std::vector<std::pair<std::string, QcQc>> all() {
  return {{"dynamical_switch", dynamical_switch()},
          {"quantum_switch", quantum_switch()},
          {"double_quantum_switch", double_quantum_switch()},
          {"dynamical_parallel", dynamical_parallel()}};
}

}  // namespace fixtures

}  // namespace icausal

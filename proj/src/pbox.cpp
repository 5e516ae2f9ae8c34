#include "icausal/pbox.hpp"

#include <algorithm>
#include <future>

namespace icausal {

const char* to_string(Extension e) {
  switch (e) {
    case Extension::symmetrization: return "symmetrization";
    case Extension::abort: return "abort";
    case Extension::custom: return "custom";
  }
  return "?";
}

int ProcessBox::agent_index(const std::string& name) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].name == name) return static_cast<int>(i);
  return -1;
}

ProcessBox relabel_positions(const ProcessBox& box, const std::map<int, int>& r) {
  ProcessBox out = box;
  out.rep = relabel_positions(box.rep, r);
  for (auto& a : out.agents) {
    std::map<int, int> o;
    for (auto& t : a.t_in) {
      int nt = r.at(t);
      o[nt] = r.at(a.O.at(t));
      t = nt;
    }
    a.O = std::move(o);
  }
  out.past = relabel_name(box.past, r);
  out.future = relabel_name(box.future, r);
  return out;
}

namespace {

double weight(const LabeledVector& v) {
  double s = 0.0;
  for (const auto& [i, a] : v.amps) s += std::norm(a);
  return s;
}

std::string agent_name(int k) { return "A" + std::to_string(k); }

Mat lift1(const Mat& a) {
  Mat r = Mat::Zero(a.rows() + 1, a.cols() + 1);
  r(0, 0) = 1.0;
  r.block(1, 1, a.rows(), a.cols()) = a;
  return r;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

std::size_t single(const FockSlice& s, int payload) { return s.index({{s.t, payload}}); }

std::size_t occupied(const FockSlice& s, std::vector<int> payloads) {
  Occupation o;
  for (int p : payloads) o.push_back({s.t, p});
  std::sort(o.begin(), o.end());
  return s.index(o);
}

Step plain_step(const Signature& in, const Signature& out, Mat m) {
  Step s;
  s.op = LabeledOperator(in, out, std::move(m));
  return s;
}

Step restricted_step(const Signature& in, const Signature& out, Mat m, const std::vector<std::uint64_t>& cols,
                     const std::string& generator) {
  Step s = plain_step(in, out, std::move(m));
  s.domain = Mat::Zero(static_cast<Eigen::Index>(in.dim()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) s.domain(static_cast<Eigen::Index>(cols[i]), static_cast<Eigen::Index>(i)) = 1.0;
  s.generator = generator;
  return s;
}

std::vector<AgentTiming> standard_timing(const QcQc& q) {
  std::vector<AgentTiming> r;
  for (int k = 1; k <= q.n_agents; ++k) {
    AgentTiming a{agent_name(k), q.d_in[static_cast<std::size_t>(k - 1)], q.d_out[static_cast<std::size_t>(k - 1)], {}, {}};
    for (int n = 1; n <= q.n_agents; ++n) {
      a.t_in.push_back(2 * n);
      a.O[2 * n] = 2 * n + 1;
    }
    r.push_back(std::move(a));
  }
  return r;
}

int anc_dim(const QcQc& q, int n) { return static_cast<int>(q.ancilla_sig(n).dim()); }

}  // namespace

LiftedLocalOp lift_local_op(const std::string& name, const Mat& a, const std::vector<int>& t_in,
                            const std::map<int, int>& o) {
  LiftedLocalOp r;
  r.timing = {name, static_cast<int>(a.cols()), static_cast<int>(a.rows()), t_in, o};
  r.timing.validate();
  const int din = static_cast<int>(a.cols()), dout = static_cast<int>(a.rows());
  r.base = LabeledOperator(Signature({{name + ".I", din, WireKind::system}}),
                           Signature({{name + ".O", dout, WireKind::system}}), a);
  std::vector<Wire> in, out;
  std::vector<int> ts = t_in;
  std::sort(ts.begin(), ts.end());
  for (int t : ts) {
    in.push_back({name + ".I@" + std::to_string(t), din + 1, WireKind::system});
    out.push_back({name + ".O@" + std::to_string(o.at(t)), dout + 1, WireKind::system});
  }
  Mat prod = Mat::Ones(1, 1);
  for (std::size_t i = 0; i < ts.size(); ++i) prod = kron(prod, lift1(a));
  r.lifted = LabeledOperator(Signature(in), Signature(out), prod);

  Mat vac = Mat::Zero(dout + 1, din + 1);
  vac(0, 0) = 1.0;
  Mat act = Mat::Zero(dout + 1, din + 1);
  act.block(1, 1, dout, din) = a;
  Mat sum = Mat::Zero(prod.rows(), prod.cols());
  for (std::size_t t = 0; t < ts.size(); ++t) {
    Mat term = Mat::Ones(1, 1);
    for (std::size_t u = 0; u < ts.size(); ++u) term = kron(term, u == t ? act : vac);
    sum += term;
  }
  r.notime = LabeledOperator(Signature(in), Signature(out), sum);
  return r;
}

Mat lift_on_slice(const ProcessBox& box, const std::vector<Mat>& ops, const FockSlice& in, const FockSlice& out,
                  bool wsr) {
  Mat w = Mat::Zero(out.payload_dim(), in.payload_dim());
  for (std::size_t i = 0; i < in.parts.size(); ++i) {
    const auto& p = in.parts[i];
    int ai = box.agent_index(p.label);
    int j = out.part_index(p.label);
    if (ai < 0 || j < 0) throw Error(ErrorKind::BadSpec, "slice part " + p.label + " has no agent");
    const auto& q = out.parts[static_cast<std::size_t>(j)];
    const Mat& a = ops.at(static_cast<std::size_t>(ai));
    if (a.cols() != p.sys || a.rows() != q.sys || p.extra != q.extra)
      throw Error(ErrorKind::DimMismatch, "agent " + p.label + " does not fit its slice");
    const int e = p.extra, oi = in.offset(i), oo = out.offset(static_cast<std::size_t>(j));
    for (Eigen::Index y = 0; y < a.rows(); ++y)
      for (Eigen::Index x = 0; x < a.cols(); ++x)
        for (int ee = 0; ee < e; ++ee) w(oo + y * e + ee, oi + x * e + ee) = a(y, x);
  }
  Mat m = second_quantize(w, in, out);
  if (wsr) {
    for (std::size_t c = 0; c < in.basis.size(); ++c) {
      std::vector<int> count(in.parts.size(), 0);
      bool bad = false;
      for (const auto& msg : in.basis[c])
        if (++count[in.locate(msg.payload).first] > 1) bad = true;
      if (bad) m.col(static_cast<Eigen::Index>(c)).setZero();
    }
  }
  return m;
}

std::vector<AgentMask> symm_controls(const QcQc& q, int n, int k) {
  std::vector<AgentMask> r;
  for (const auto& [K, kk] : q.reachable(n))
    if (kk == k) r.push_back(K);
  return r;
}

int symm_payload(const QcQc& q, int n, int k, AgentMask K, int x, int a) {
  auto cs = symm_controls(q, n, k);
  auto it = std::find(cs.begin(), cs.end(), K);
  if (it == cs.end()) throw Error(ErrorKind::BadSpec, "control not reachable");
  const int nc = static_cast<int>(cs.size());
  return (x * anc_dim(q, n) + a) * nc + static_cast<int>(it - cs.begin());
}

ProcessBox extend_symmetrization(const QcQc& q, int cap) {
  const int N = q.n_agents;
  ProcessBox box;
  box.kind = Extension::symmetrization;
  box.cap = cap;
  box.agents = standard_timing(q);

  auto parts = [&](int n, bool input) {
    std::vector<SlicePart> r;
    for (int k = 1; k <= N; ++k) {
      int nc = static_cast<int>(symm_controls(q, n, k).size());
      if (nc == 0) continue;
      int d = input ? q.d_in[static_cast<std::size_t>(k - 1)] : q.d_out[static_cast<std::size_t>(k - 1)];
      r.push_back({agent_name(k), d, anc_dim(q, n) * nc});
    }
    return r;
  };
  FockSlice past = FockSlice::make("P", 1, cap, {{"P", q.d_past, 1}});
  FockSlice fut = FockSlice::make("F", 2 * N + 2, cap, {{"F", q.d_future * anc_dim(q, N + 1), 1}});
  std::vector<FockSlice> I(static_cast<std::size_t>(N + 1)), O(static_cast<std::size_t>(N + 1));
  box.rep.add_slice(past);
  box.rep.add_slice(fut);
  for (int n = 1; n <= N; ++n) {
    I[static_cast<std::size_t>(n)] = FockSlice::make("I", 2 * n, cap, parts(n, true));
    O[static_cast<std::size_t>(n)] = FockSlice::make("O", 2 * n + 1, cap, parts(n, false));
    box.rep.add_slice(I[static_cast<std::size_t>(n)]);
    box.rep.add_slice(O[static_cast<std::size_t>(n)]);
  }
  box.past = past.name();
  box.future = fut.name();

  for (int n = 1; n <= N + 1; ++n) {
    const FockSlice& sin = n == 1 ? past : O[static_cast<std::size_t>(n - 1)];
    const FockSlice& sout = n == N + 1 ? fut : I[static_cast<std::size_t>(n)];
    Mat w = Mat::Zero(sout.payload_dim(), sin.payload_dim());
    std::vector<std::pair<AgentMask, int>> srcs;
    if (n == 1) srcs.push_back({0, 0});
    else srcs = q.reachable(n - 1);
    for (const auto& [K, k] : srcs) {
      const int dsys = k == 0 ? q.d_past : q.d_out[static_cast<std::size_t>(k - 1)];
      const int dain = k == 0 ? 1 : anc_dim(q, n - 1);
      const AgentMask Kn = k == 0 ? K : (K | bit(k));
      for (int to : q.successors(K, k)) {
        LabeledOperator b = q.block(K, k, to);
        const int daout = to == 0 ? anc_dim(q, N + 1) : anc_dim(q, n);
        for (int x = 0; x < dsys; ++x)
          for (int a = 0; a < dain; ++a) {
            int col = k == 0 ? x
                             : sin.offset(static_cast<std::size_t>(sin.part_index(agent_name(k)))) +
                                   symm_payload(q, n - 1, k, K, x, a);
            for (Eigen::Index row = 0; row < b.m.rows(); ++row) {
              cplx v = b.m(row, x * dain + a);
              if (v == cplx(0.0)) continue;
              int outp = static_cast<int>(row);
              if (to != 0) {
                int y = static_cast<int>(row) / daout, bb = static_cast<int>(row) % daout;
                outp = sout.offset(static_cast<std::size_t>(sout.part_index(agent_name(to)))) +
                       symm_payload(q, n, to, Kn, y, bb);
              }
              w(outp, col) += v;
            }
          }
      }
    }
    box.rep.steps.push_back(plain_step({sin.wire()}, {sout.wire()}, second_quantize(w, sin, sout)));
  }
  return box;
}

ProcessBox extend_abort(const QcQc& q, int cap) {
  const int N = q.n_agents;
  ProcessBox box;
  box.kind = Extension::abort;
  box.cap = cap;
  box.agents = standard_timing(q);

  auto parts = [&](bool input) {
    std::vector<SlicePart> r;
    for (int k = 1; k <= N; ++k)
      r.push_back({agent_name(k), input ? q.d_in[static_cast<std::size_t>(k - 1)] : q.d_out[static_cast<std::size_t>(k - 1)], 1});
    return r;
  };
  FockSlice past = FockSlice::make("P", 1, cap, {{"P", q.d_past, 1}});
  FockSlice fut = FockSlice::make("F", 2 * N + 2, cap, {{"F", q.d_future, 1}});
  std::vector<FockSlice> I(static_cast<std::size_t>(N + 1)), O(static_cast<std::size_t>(N + 1));
  std::vector<std::vector<std::pair<AgentMask, int>>> R(static_cast<std::size_t>(N + 1));
  box.rep.add_slice(past);
  box.rep.add_slice(fut);
  for (int n = 1; n <= N; ++n) {
    I[static_cast<std::size_t>(n)] = FockSlice::make("I", 2 * n, cap, parts(true));
    O[static_cast<std::size_t>(n)] = FockSlice::make("O", 2 * n + 1, cap, parts(false));
    box.rep.add_slice(I[static_cast<std::size_t>(n)]);
    box.rep.add_slice(O[static_cast<std::size_t>(n)]);
    R[static_cast<std::size_t>(n)] = q.reachable(n);
  }
  box.past = past.name();
  box.future = fut.name();
  box.future_extra = "alpha~F";

  auto alpha = [&](int n) {
    std::string name = n == N + 1 ? std::string("alpha~F") : "alpha~" + std::to_string(n);
    return Wire{name, 1 + anc_dim(q, n), WireKind::ancilla};
  };
  auto control = [&](int n) {
    return Wire{"C~" + std::to_string(n), 1 + static_cast<int>(R[static_cast<std::size_t>(n)].size()), WireKind::control};
  };

  for (int n = 1; n <= N + 1; ++n) {
    Signature in_sig = n == 1 ? Signature({past.wire()})
                              : Signature({O[static_cast<std::size_t>(n - 1)].wire(), alpha(n - 1), control(n - 1)});
    Signature out_sig = n <= N ? Signature({I[static_cast<std::size_t>(n)].wire(), alpha(n), control(n)})
                               : Signature({fut.wire(), alpha(N + 1)});
    Mat m = Mat::Zero(static_cast<Eigen::Index>(out_sig.dim()), static_cast<Eigen::Index>(in_sig.dim()));
    std::vector<std::uint64_t> accept{0};
    m(0, 0) = 1.0;  // all vacuum stays all vacuum
    std::vector<std::pair<AgentMask, int>> srcs;
    if (n == 1) srcs.push_back({0, 0});
    else srcs = R[static_cast<std::size_t>(n - 1)];
    for (std::size_t ci = 0; ci < srcs.size(); ++ci) {
      const auto [K, k] = srcs[ci];
      const int dsys = k == 0 ? q.d_past : q.d_out[static_cast<std::size_t>(k - 1)];
      const int dain = k == 0 ? 1 : anc_dim(q, n - 1);
      const AgentMask Kn = k == 0 ? K : (K | bit(k));
      for (int x = 0; x < dsys; ++x)
        for (int a = 0; a < dain; ++a) {
          std::uint64_t col;
          if (n == 1) {
            col = in_sig.ravel({static_cast<int>(single(past, x))});
          } else {
            const auto& so = O[static_cast<std::size_t>(n - 1)];
            int payload = so.offset(static_cast<std::size_t>(so.part_index(agent_name(k)))) + x;
            col = in_sig.ravel({static_cast<int>(single(so, payload)), 1 + a, 1 + static_cast<int>(ci)});
          }
          accept.push_back(col);
          for (int to : q.successors(K, k)) {
            LabeledOperator b = q.block(K, k, to);
            const int daout = to == 0 ? anc_dim(q, N + 1) : anc_dim(q, n);
            for (Eigen::Index row = 0; row < b.m.rows(); ++row) {
              cplx v = b.m(row, x * dain + a);
              if (v == cplx(0.0)) continue;
              int y = static_cast<int>(row) / daout, bb = static_cast<int>(row) % daout;
              std::uint64_t r;
              if (to == 0) {
                r = out_sig.ravel({static_cast<int>(single(fut, y)), 1 + bb});
              } else {
                const auto& si = I[static_cast<std::size_t>(n)];
                const auto& rn = R[static_cast<std::size_t>(n)];
                auto it = std::find(rn.begin(), rn.end(), std::make_pair(Kn, to));
                int payload = si.offset(static_cast<std::size_t>(si.part_index(agent_name(to)))) + y;
                r = out_sig.ravel({static_cast<int>(single(si, payload)), 1 + bb, 1 + static_cast<int>(it - rn.begin())});
              }
              m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) += v;
            }
          }
        }
    }
    box.rep.steps.push_back(restricted_step(in_sig, out_sig, std::move(m), accept, "accept_subspace"));
  }
  return box;
}

ProcessBox dynamical_parallel_box(const Vec& psi_in, int cap) {
  if (cap < 2) throw Error(ErrorKind::CapExceeded, "two agents receive at t = 4; cap must be at least 2");
  Vec psi = psi_in.size() ? psi_in : Vec::Unit(2, 0);
  if (psi.size() != 2) throw Error(ErrorKind::DimMismatch, "psi must be a qubit");
  ProcessBox box;
  box.kind = Extension::custom;
  box.cap = cap;
  std::vector<SlicePart> parts;
  for (int k = 1; k <= 3; ++k) {
    parts.push_back({agent_name(k), 2, 1});
    AgentTiming a{agent_name(k), 2, 2, {2, 4, 6}, {{2, 3}, {4, 5}, {6, 7}}};
    box.agents.push_back(a);
  }
  auto past = FockSlice::make("P", 1, cap, {{"P", 1, 1}});
  auto fut = FockSlice::make("F", 8, cap, {{"F", 6, 1}});
  std::vector<FockSlice> I, O;
  for (int n = 1; n <= 3; ++n) {
    I.push_back(FockSlice::make("I", 2 * n, cap, parts));
    O.push_back(FockSlice::make("O", 2 * n + 1, cap, parts));
    box.rep.add_slice(I.back());
    box.rep.add_slice(O.back());
  }
  box.rep.add_slice(past);
  box.rep.add_slice(fut);
  box.past = past.name();
  box.future = fut.name();
  // payload offsets of A, B, C in the agent slices
  const int A = 0, B = 2, C = 4;
  Wire alpha{"alpha", 2, WireKind::ancilla}, alpha_c{"alpha'", 2, WireKind::ancilla}, alpha3{"alpha3", 5, WireKind::ancilla};

  {
    Signature in({past.wire()}), out({I[0].wire()});
    Mat m = Mat::Zero(static_cast<Eigen::Index>(out.dim()), static_cast<Eigen::Index>(in.dim()));
    auto col = single(past, 0);
    for (int x = 0; x < 2; ++x) m(static_cast<Eigen::Index>(single(I[0], A + x)), static_cast<Eigen::Index>(col)) = psi(x);
    box.rep.steps.push_back(restricted_step(in, out, std::move(m), {col}, "explicit"));
  }
  {
    Signature in({O[0].wire()}), out({I[1].wire(), alpha});
    Mat m = Mat::Zero(static_cast<Eigen::Index>(out.dim()), static_cast<Eigen::Index>(in.dim()));
    auto c0 = single(O[0], A + 0), c1 = single(O[0], A + 1);
    m(static_cast<Eigen::Index>(out.ravel({static_cast<int>(occupied(I[1], {B + 0, C + 0})), 0})), static_cast<Eigen::Index>(c0)) = 1.0;
    m(static_cast<Eigen::Index>(out.ravel({static_cast<int>(single(I[1], B + 1)), 1})), static_cast<Eigen::Index>(c1)) = 1.0;
    box.rep.steps.push_back(restricted_step(in, out, std::move(m), {c0, c1}, "explicit"));
  }
  {
    Signature in({O[1].wire(), alpha}), out({I[2].wire(), alpha3, alpha_c});
    Mat m = Mat::Zero(static_cast<Eigen::Index>(out.dim()), static_cast<Eigen::Index>(in.dim()));
    std::vector<std::uint64_t> cols;
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        auto col = in.ravel({static_cast<int>(occupied(O[1], {B + b, C + c})), 0});
        cols.push_back(col);
        m(static_cast<Eigen::Index>(out.ravel({0, 1 + b * 2 + c, 0})), static_cast<Eigen::Index>(col)) = 1.0;
      }
      auto col = in.ravel({static_cast<int>(single(O[1], B + b)), 1});
      cols.push_back(col);
      m(static_cast<Eigen::Index>(out.ravel({static_cast<int>(single(I[2], C + b)), 0, 1})), static_cast<Eigen::Index>(col)) = 1.0;
    }
    box.rep.steps.push_back(restricted_step(in, out, std::move(m), cols, "explicit"));
  }
  {
    Signature in({O[2].wire(), alpha3, alpha_c}), out({fut.wire()});
    Mat m = Mat::Zero(static_cast<Eigen::Index>(out.dim()), static_cast<Eigen::Index>(in.dim()));
    std::vector<std::uint64_t> cols;
    for (int j = 0; j < 4; ++j) {
      auto col = in.ravel({0, 1 + j, 0});
      cols.push_back(col);
      m(static_cast<Eigen::Index>(single(fut, j)), static_cast<Eigen::Index>(col)) = 1.0;
    }
    for (int c = 0; c < 2; ++c) {
      auto col = in.ravel({static_cast<int>(single(O[2], C + c)), 0, 1});
      cols.push_back(col);
      m(static_cast<Eigen::Index>(single(fut, 4 + c)), static_cast<Eigen::Index>(col)) = 1.0;
    }
    box.rep.steps.push_back(restricted_step(in, out, std::move(m), cols, "explicit"));
  }
  return box;
}

namespace {

Mat domain_projector(const Mat& d) {
  Eigen::ColPivHouseholderQR<Mat> qr(d);
  const auto rank = qr.rank();
  Mat q = qr.householderQ() * Mat::Identity(d.rows(), rank);
  return q * q.adjoint();
}

std::string flag_wire(const std::string& agent) { return "flag:" + agent; }

}  // namespace

SimResult simulate(const ProcessBox& box, const std::vector<Mat>& ops, const LabeledVector& input, const SimOptions& opt) {
  if (ops.size() != box.agents.size()) throw Error(ErrorKind::SignatureMismatch, "one operation per agent");
  SimResult res;
  LabeledVector state = input;
  if (opt.track_agents)
    for (const auto& a : box.agents)
      state = tensor_product(state, LabeledVector::basis(Signature({{flag_wire(a.name), 2, WireKind::control}}), {0}));

  for (std::size_t n = 0; n < box.rep.steps.size(); ++n) {
    const Step& step = box.rep.steps[n];
    for (const auto& w : step.op.in_sig.wires())
      if (!state.sig.has(w.name))
        throw Error(ErrorKind::UnknownWire, "step " + std::to_string(n + 1) + " reads missing wire " + w.name);
    if (step.restricted()) {
      double before = weight(state);
      state = apply(LabeledOperator::square(step.op.in_sig, domain_projector(step.domain)), state);
      res.rejected += std::max(0.0, before - weight(state));
    }
    state = apply(step.op, state);

    for (const auto& w : step.op.out_sig.wires()) {
      std::string base;
      int t = 0;
      if (!box.rep.is_slice(w.name) || !parse_slice_name(w.name, base, t) || base != box.in_base) continue;
      const FockSlice& sin = box.rep.slices.at(w.name);
      if (sin.parts.empty()) continue;
      int ai = box.agent_index(sin.parts.front().label);
      if (ai < 0) throw Error(ErrorKind::BadSpec, "slice " + w.name + " has no agent");
      const auto& timing = box.agents[static_cast<std::size_t>(ai)];
      auto ot = timing.O.find(t);
      if (ot == timing.O.end()) throw Error(ErrorKind::BadTimeMap, "agent " + timing.name + " cannot answer at " + w.name);
      for (const auto& p : sin.parts) {
        int bi = box.agent_index(p.label);
        if (bi < 0 || box.agents[static_cast<std::size_t>(bi)].O.count(t) == 0 ||
            box.agents[static_cast<std::size_t>(bi)].O.at(t) != ot->second)
          throw Error(ErrorKind::BadTimeMap, "agents of " + w.name + " disagree on the answer time");
      }
      const std::string oname = box.out_base + "@" + std::to_string(ot->second);
      auto so_it = box.rep.slices.find(oname);
      if (so_it == box.rep.slices.end()) throw Error(ErrorKind::BadSpec, "missing slice " + oname);
      const FockSlice& sout = so_it->second;

      std::vector<int> fpos;
      if (opt.track_agents) {
        for (const auto& a : box.agents) fpos.push_back(state.sig.find(flag_wire(a.name)));
        const int spos = state.sig.find(w.name);
        for (auto it = state.amps.begin(); it != state.amps.end();) {
          auto digits = state.sig.unravel(it->first);
          std::vector<int> count(box.agents.size(), 0);
          for (const auto& msg : sin.basis[static_cast<std::size_t>(digits[static_cast<std::size_t>(spos)])])
            ++count[static_cast<std::size_t>(box.agent_index(sin.parts[sin.locate(msg.payload).first].label))];
          bool bad = false;
          for (std::size_t i = 0; i < count.size(); ++i)
            if (count[i] > 1 || (count[i] == 1 && digits[static_cast<std::size_t>(fpos[i])] == 1)) bad = true;
          if (bad) {
            res.wsr_violation += std::norm(it->second);
            it = state.amps.erase(it);
          } else {
            ++it;
          }
        }
      }
      Mat lift = lift_on_slice(box, ops, sin, sout, opt.wsr_agents);
      state = apply(LabeledOperator({sin.wire()}, {sout.wire()}, std::move(lift)), state);
      if (opt.track_agents) {
        for (std::size_t i = 0; i < fpos.size(); ++i) fpos[i] = state.sig.find(flag_wire(box.agents[i].name));
        const int spos = state.sig.find(sout.name());
        LabeledVector next(state.sig);
        for (const auto& [idx, a] : state.amps) {
          auto digits = state.sig.unravel(idx);
          for (const auto& msg : sout.basis[static_cast<std::size_t>(digits[static_cast<std::size_t>(spos)])]) {
            int bi = box.agent_index(sout.parts[sout.locate(msg.payload).first].label);
            digits[static_cast<std::size_t>(fpos[static_cast<std::size_t>(bi)])] = 1;
          }
          next.amps[state.sig.ravel(digits)] += a;
        }
        state = std::move(next);
      }
    }
  }

  if (opt.track_agents) {
    const double total = weight(state);
    for (const auto& a : box.agents) {
      const int pos = state.sig.find(flag_wire(a.name));
      double on = 0.0;
      for (const auto& [idx, amp] : state.amps)
        if (state.sig.unravel(idx)[static_cast<std::size_t>(pos)] == 1) on += std::norm(amp);
      res.activity.push_back(total > 0.0 ? on / total : 0.0);
    }
  }
  res.out = std::move(state);
  return res;
}

LabeledVector past_message(const ProcessBox& box, const Vec& psi) {
  const FockSlice& s = box.rep.slices.at(box.past);
  if (psi.size() != s.payload_dim()) throw Error(ErrorKind::DimMismatch, "past payload");
  LabeledVector v(Signature({s.wire()}));
  for (Eigen::Index p = 0; p < psi.size(); ++p)
    if (psi(p) != cplx(0.0)) v.amps[single(s, static_cast<int>(p))] = psi(p);
  return v;
}

Vec future_to_qc(const ProcessBox& box, const LabeledVector& out, int d_total, double& leak) {
  const FockSlice& fs = box.rep.slices.at(box.future);
  const int fpos = out.sig.find(box.future);
  if (fpos < 0) throw Error(ErrorKind::UnknownWire, box.future);
  const int epos = box.future_extra.empty() ? -1 : out.sig.find(box.future_extra);
  if (!box.future_extra.empty() && epos < 0) throw Error(ErrorKind::UnknownWire, box.future_extra);
  const int de = epos < 0 ? 1 : out.sig.wires()[static_cast<std::size_t>(epos)].dim - 1;
  Vec r = Vec::Zero(d_total);
  double l2 = 0.0;
  for (const auto& [idx, a] : out.amps) {
    auto digits = out.sig.unravel(idx);
    bool ok = true;
    for (std::size_t i = 0; i < digits.size(); ++i)
      if (static_cast<int>(i) != fpos && static_cast<int>(i) != epos && digits[i] != 0) ok = false;
    const auto& occ = fs.basis[static_cast<std::size_t>(digits[static_cast<std::size_t>(fpos)])];
    if (occ.size() != 1) ok = false;
    int e = 0;
    if (epos >= 0) {
      if (digits[static_cast<std::size_t>(epos)] == 0) ok = false;
      e = digits[static_cast<std::size_t>(epos)] - 1;
    }
    const long idx_qc = ok ? static_cast<long>(occ[0].payload) * de + e : -1;
    if (ok && idx_qc < d_total) r(idx_qc) += a;
    else l2 += std::norm(a);
  }
  leak = std::sqrt(l2);
  return r;
}

double accept_probability(const ProcessBox& box, const std::vector<Mat>& ops, const LabeledVector& input) {
  const double w = weight(input);
  auto sim = simulate(box, ops, input);
  return 1.0 - sim.rejected / w;
}

namespace {

void check_compatible(const QcQc& q, const ProcessBox& pb) {
  if (static_cast<int>(pb.agents.size()) != q.n_agents) throw Error(ErrorKind::SignatureMismatch, "agent count");
  for (int k = 0; k < q.n_agents; ++k) {
    const auto& a = pb.agents[static_cast<std::size_t>(k)];
    if (a.d_in != q.d_in[static_cast<std::size_t>(k)] || a.d_out != q.d_out[static_cast<std::size_t>(k)])
      throw Error(ErrorKind::SignatureMismatch, "agent " + a.name + " dimensions");
  }
  if (pb.rep.slices.at(pb.past).payload_dim() != q.d_past) throw Error(ErrorKind::SignatureMismatch, "past dimension");
}

Signature future_sig(const QcQc& q) { return Signature({{"F", q.d_future, WireKind::system}}).concat(q.ancilla_sig(q.n_agents + 1)); }

}  // namespace

EquivalenceReport check_operational_equivalence(const QcQc& q, const ProcessBox& pb, int trials, double tol,
                                                std::uint64_t seed) {
  check_compatible(q, pb);
  const Signature fsig = future_sig(q);
  const int d_total = static_cast<int>(fsig.dim());
  const LabeledVector w = process_vector(q);
  const Signature psig({{"P", q.d_past, WireKind::system}});

  auto trial = [&](int t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    std::vector<Mat> ops;
    std::vector<LabeledOperator> qops;
    for (int k = 1; k <= q.n_agents; ++k) {
      const int din = q.d_in[static_cast<std::size_t>(k - 1)], dout = q.d_out[static_cast<std::size_t>(k - 1)];
      ops.push_back(random_agent_kraus(rng, din, dout));
      qops.emplace_back(Signature({{in_wire(k), din, WireKind::system}}), Signature({{out_wire(k), dout, WireKind::system}}),
                        ops.back());
    }
    LabeledVector wa = contract_agents(w, qops);
    double dev2 = 0.0;
    for (int p = 0; p < q.d_past; ++p) {
      Vec vq = permute_wires(link_vectors(LabeledVector::basis(psig, {p}), wa), fsig.names()).to_dense();
      auto sim = simulate(pb, ops, past_message(pb, Vec::Unit(q.d_past, p)));
      double leak = 0.0;
      Vec vb = future_to_qc(pb, sim.out, d_total, leak);
      dev2 += (vq - vb).squaredNorm() + leak * leak;
    }
    return std::sqrt(dev2);
  };

  std::vector<std::future<double>> jobs;
  for (int t = 0; t < trials; ++t) jobs.push_back(std::async(std::launch::async, trial, t));
  EquivalenceReport r;
  r.trials = trials;
  for (auto& j : jobs) {
    r.deviations.push_back(j.get());
    r.max_deviation = std::max(r.max_deviation, r.deviations.back());
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

ConstraintReport check_pb_constraints(const ProcessBox& pb, const std::vector<LiftedLocalOp>& agents, double tol,
                                      std::uint64_t seed) {
  if (agents.size() != pb.agents.size()) throw Error(ErrorKind::SignatureMismatch, "one lifted operation per agent");
  ConstraintReport r;
  auto note = [&](const std::string& w) {
    if (r.witness.empty()) r.witness = w;
  };
  std::vector<Mat> base;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& ag = agents[i];
    const auto& L = ag.lifted;
    const auto& tm = ag.timing;
    const int din = tm.d_in, dout = tm.d_out;
    std::vector<int> ts = tm.t_in;
    std::sort(ts.begin(), ts.end());

    Vec col0 = L.m.col(0);
    Vec e0 = Vec::Unit(L.m.rows(), 0);
    double lo = (col0 - e0).norm();
    if (lo > tol) note(tm.name + ": all-vacuum input does not give all-vacuum output");
    r.lo_dev = std::max(r.lo_dev, lo);

    std::vector<Mat> per_t;
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      Mat at = Mat::Zero(dout, din);
      double outside = 0.0;
      for (int x = 0; x < din; ++x) {
        std::vector<int> digits(ts.size(), 0);
        digits[ti] = 1 + x;
        Vec c = L.m.col(static_cast<Eigen::Index>(L.in_sig.ravel(digits)));
        for (Eigen::Index row = 0; row < c.size(); ++row) {
          if (c(row) == cplx(0.0)) continue;
          auto od = L.out_sig.unravel(static_cast<std::uint64_t>(row));
          bool only = true;
          for (std::size_t u = 0; u < od.size(); ++u)
            if (u != ti && od[u] != 0) only = false;
          if (only && od[ti] > 0) at(od[ti] - 1, x) = c(row);
          else outside += std::norm(c(row));
        }
      }
      if (std::sqrt(outside) > tol) note(tm.name + ": message at t = " + std::to_string(ts[ti]) + " leaves outside O(t)");
      r.osr_dev = std::max(r.osr_dev, std::sqrt(outside));
      per_t.push_back(at);
    }
    for (std::size_t ti = 1; ti < per_t.size(); ++ti) {
      double d = max_abs(per_t[ti] - per_t[0]);
      if (d > tol) note(tm.name + ": action at t = " + std::to_string(ts[ti]) + " differs from t = " + std::to_string(ts[0]));
      r.time_dev = std::max(r.time_dev, d);
    }
    if (!per_t.empty()) {
      auto ref = lift_local_op(tm.name, per_t[0], tm.t_in, tm.O);
      double d = max_abs(L.m - ref.lifted.m);
      if (d > tol) note(tm.name + ": not a product over positions");
      r.factor_dev = std::max(r.factor_dev, d);
    }
    base.push_back(ag.base.m);
  }

  const int dp = pb.rep.slices.at(pb.past).payload_dim();
  for (int p = 0; p < dp; ++p) {
    auto sim = simulate(pb, base, past_message(pb, Vec::Unit(dp, p)), {true, true});
    if (sim.wsr_violation > tol) note("past message " + std::to_string(p) + ": an agent receives twice");
    r.wsr_violation = std::max(r.wsr_violation, sim.wsr_violation);
    for (std::size_t i = 0; i < sim.activity.size(); ++i) {
      if (sim.activity[i] < 1.0 - tol) note(pb.agents[i].name + " is not always active");
      r.min_activity = std::min(r.min_activity, sim.activity[i]);
    }
  }

  // an agent is passive when swapping its operation leaves the output state unchanged
  Rng rng(seed);
  for (std::size_t i = 0; i < pb.agents.size(); ++i) {
    std::vector<Mat> other = base;
    other[i] = haar_isometry(rng, pb.agents[i].d_out, pb.agents[i].d_in);
    double gap = 0.0;
    for (int p = 0; p < dp; ++p) {
      auto in = past_message(pb, Vec::Unit(dp, p));
      Vec a = simulate(pb, base, in).out.to_dense(), b = simulate(pb, other, in).out.to_dense();
      gap = std::max(gap, max_abs(a * a.adjoint() - b * b.adjoint()));
    }
    if (gap <= tol) note(pb.agents[i].name + " is passive");
    r.passive_gap.push_back(gap);
  }

  r.pass = r.lo_dev <= tol && r.osr_dev <= tol && r.time_dev <= tol && r.factor_dev <= tol && r.wsr_violation <= tol &&
           r.min_activity >= 1.0 - tol &&
           std::all_of(r.passive_gap.begin(), r.passive_gap.end(), [&](double g) { return g > tol; });
  return r;
}

}  // namespace icausal

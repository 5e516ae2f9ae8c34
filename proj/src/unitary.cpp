#include <algorithm>

#include "icausal/pbox.hpp"

namespace icausal {

namespace {

Mat complete_columns(const Mat& m, const std::vector<Eigen::Index>& kept, const std::vector<Eigen::Index>& free_cols) {
  const Eigen::Index d = m.rows();
  Mat c(d, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) c.col(static_cast<Eigen::Index>(i)) = m.col(kept[i]);
  Mat out = m;
  if (free_cols.empty()) return out;
  Mat q;
  if (c.cols() == 0) {
    q = Mat::Identity(d, d);
  } else {
    Eigen::HouseholderQR<Mat> qr(c);
    q = qr.householderQ() * Mat::Identity(d, d);
  }
  for (std::size_t i = 0; i < free_cols.size(); ++i) out.col(free_cols[i]) = q.col(c.cols() + static_cast<Eigen::Index>(i));
  return out;
}

double unitary_deviation(const Mat& u) {
  const auto i = Mat::Identity(u.rows(), u.cols());
  return std::max(max_abs(u.adjoint() * u - i), max_abs(u * u.adjoint() - i));
}

}  // namespace

int UnitaryExtension::p_total() const {
  int r = 1;
  for (int d : p_dims) r *= d;
  return r;
}

UnitaryExtension unitary_extension(const ProcessBox& pb, double tol) {
  UnitaryExtension u;
  u.box = pb;
  for (std::size_t n = 0; n < pb.rep.steps.size(); ++n) {
    const Step& s = pb.rep.steps[n];
    if (s.restricted()) throw Error(ErrorKind::NotPure, "step " + std::to_string(n + 1) + " has a restricted domain");
    const Mat& v = s.op.m;
    if (isometry_deviation(v) > tol) throw Error(ErrorKind::NotIsometry, "step " + std::to_string(n + 1));
    const Eigen::Index big = v.rows(), small = v.cols();
    const Eigen::Index dp = (big + small - 1) / small;
    const Eigen::Index junk = small * dp - big;

    Mat start = Mat::Zero(small * dp, small * dp);
    std::vector<Eigen::Index> kept, free_cols;
    for (Eigen::Index x = 0; x < small; ++x)
      for (Eigen::Index p = 0; p < dp; ++p) {
        if (p == 0) {
          start.block(0, x * dp, big, 1) = v.col(x);
          kept.push_back(x * dp);
        } else {
          free_cols.push_back(x * dp + p);
        }
      }
    Mat un = complete_columns(start, kept, free_cols);
    u.unitarity_dev = std::max(u.unitarity_dev, unitary_deviation(un));
    double red = 0.0;
    for (Eigen::Index x = 0; x < small; ++x) {
      red = std::max(red, max_abs(un.block(0, x * dp, big, 1) - v.col(x)));
      if (junk > 0) red = std::max(red, max_abs(un.block(big, x * dp, junk, 1)));
    }
    u.reduction_dev = std::max(u.reduction_dev, red);

    const std::string tag = std::to_string(n + 1);
    Signature in = s.op.in_sig.concat(Signature({{"P'" + tag, static_cast<int>(dp), WireKind::ancilla}}));
    Signature out = s.op.out_sig.concat(Signature({{"F'" + tag, static_cast<int>(junk + 1), WireKind::ancilla}}));
    Mat m = Mat::Zero(static_cast<Eigen::Index>(out.dim()), static_cast<Eigen::Index>(in.dim()));
    for (Eigen::Index r = 0; r < big; ++r) m.row(r * (junk + 1)) = un.row(r);
    for (Eigen::Index j = 0; j < junk; ++j) m.row(1 + j) = un.row(big + j);
    Step ns;
    ns.op = LabeledOperator(std::move(in), std::move(out), std::move(m));
    u.box.rep.steps[n] = std::move(ns);
    u.unitaries.push_back(std::move(un));
    u.p_dims.push_back(static_cast<int>(dp));
    u.junk_dims.push_back(static_cast<int>(junk));
  }
  return u;
}

LabeledVector extension_input(const UnitaryExtension& u, const LabeledVector& base, const Vec& p_state) {
  std::vector<Wire> w;
  for (std::size_t n = 0; n < u.p_dims.size(); ++n)
    w.push_back({"P'" + std::to_string(n + 1), u.p_dims[n], WireKind::ancilla});
  Signature ps(w);
  if (static_cast<std::uint64_t>(p_state.size()) != ps.dim()) throw Error(ErrorKind::DimMismatch, "P' state");
  return tensor_product(base, LabeledVector::from_dense(ps, p_state));
}

namespace {

struct AncillaPlan {
  std::vector<int> a;  // a'_1 .. a'_N
  int p_prime = 1;
  int alpha_f = 1;
};

AncillaPlan plan_ancillas(const QcQc& q, int d) {
  const int N = q.n_agents;
  std::vector<int> orig;
  for (int n = 1; n <= N + 1; ++n) orig.push_back(static_cast<int>(q.ancilla_sig(n).dim()));
  for (int a1 = 1; a1 <= 1 << 16; ++a1) {
    std::vector<int> a{a1};
    bool ok = a1 >= orig[0];
    for (int n = 1; n < N && ok; ++n) {
      long num = static_cast<long>(n) * a.back();
      if (num % (N - n) != 0) ok = false;
      else a.push_back(static_cast<int>(num / (N - n)));
      if (ok && a.back() < orig[static_cast<std::size_t>(n)]) ok = false;
    }
    if (!ok) continue;
    const long in0 = static_cast<long>(N) * d * a1;
    if (in0 % q.d_past != 0) continue;
    const long last = static_cast<long>(N) * d * a.back();
    if (last % q.d_future != 0 || last / q.d_future < orig.back()) continue;
    return {a, static_cast<int>(in0 / q.d_past), static_cast<int>(last / q.d_future)};
  }
  throw Error(ErrorKind::BadSpec, "no ancilla sizes allow a unitary extension");
}

// row or column offset of agent k in the ordered direct sum over `agents`
Eigen::Index sum_offset(const std::vector<int>& agents, int k, Eigen::Index chunk) {
  auto it = std::find(agents.begin(), agents.end(), k);
  return static_cast<Eigen::Index>(it - agents.begin()) * chunk;
}

}  // namespace

QcqcUnitaryExtension unitary_extension(const QcQc& q) {
  const int N = q.n_agents;
  if (N < 1) throw Error(ErrorKind::BadSpec, "no agents");
  const int d = q.d_in[0];
  for (int k = 0; k < N; ++k)
    if (q.d_in[static_cast<std::size_t>(k)] != d || q.d_out[static_cast<std::size_t>(k)] != d)
      throw Error(ErrorKind::DimMismatch, "unitary extension needs equal agent dimensions");
  const AncillaPlan plan = plan_ancillas(q, d);

  std::vector<std::vector<int>> anc;
  for (int a : plan.a) anc.push_back({a});
  anc.push_back({plan.alpha_f});
  QcqcUnitaryExtension ext;
  ext.q = QcQc(N, q.d_in, q.d_out, q.d_past * plan.p_prime, q.d_future, anc);
  ext.p_prime = plan.p_prime;
  ext.ancillas = plan.a;
  ext.ancillas.push_back(plan.alpha_f);

  auto orig_anc = [&](int n) { return static_cast<Eigen::Index>(q.ancilla_sig(n).dim()); };
  auto new_anc = [&](int n) { return static_cast<Eigen::Index>(n == N + 1 ? plan.alpha_f : plan.a[static_cast<std::size_t>(n - 1)]); };

  for (int n = 0; n <= N; ++n) {
    for (AgentMask S = 0; S <= q.all(); ++S) {
      if (popcount(S) != n) continue;
      std::vector<int> in_agents, out_agents;
      for (int k = 1; k <= N; ++k) (contains(S, k) ? in_agents : out_agents).push_back(k);
      const bool last = n == N;
      const Eigen::Index cin = n == 0 ? 0 : d * new_anc(n);
      const Eigen::Index cout = last ? 0 : d * new_anc(n + 1);
      const Eigen::Index rows = last ? q.d_future * new_anc(N + 1) : static_cast<Eigen::Index>(out_agents.size()) * cout;
      const Eigen::Index cols = n == 0 ? static_cast<Eigen::Index>(q.d_past) * plan.p_prime
                                       : static_cast<Eigen::Index>(in_agents.size()) * cin;
      if (rows != cols) throw Error(ErrorKind::BadSpec, "ancilla plan does not square level " + std::to_string(n));
      Mat m = Mat::Zero(rows, cols);
      std::vector<char> original(static_cast<std::size_t>(cols), 0);

      std::vector<int> sources = n == 0 ? std::vector<int>{0} : in_agents;
      for (int k : sources) {
        const AgentMask K = k == 0 ? 0 : S & ~bit(k);
        const Eigen::Index ain = k == 0 ? 1 : orig_anc(n), ain_new = k == 0 ? 1 : new_anc(n);
        const Eigen::Index dsys = k == 0 ? q.d_past : d;
        for (int to : last ? std::vector<int>{0} : out_agents) {
          if (!q.has_block(K, k, to)) continue;
          const LabeledOperator blk = q.block(K, k, to);
          const Mat& b = blk.m;
          const Eigen::Index aout = to == 0 ? orig_anc(N + 1) : orig_anc(n + 1);
          const Eigen::Index aout_new = to == 0 ? new_anc(N + 1) : new_anc(n + 1);
          const Eigen::Index roff = to == 0 ? 0 : sum_offset(out_agents, to, cout);
          for (Eigen::Index x = 0; x < dsys; ++x)
            for (Eigen::Index a = 0; a < ain; ++a) {
              const Eigen::Index col = k == 0 ? x * plan.p_prime : sum_offset(in_agents, k, cin) + x * ain_new + a;
              for (Eigen::Index r = 0; r < b.rows(); ++r) {
                const cplx v = b(r, x * ain + a);
                if (v == cplx(0.0)) continue;
                m(roff + (r / aout) * aout_new + r % aout, col) += v;
                original[static_cast<std::size_t>(col)] = 1;
              }
            }
        }
      }
      std::vector<Eigen::Index> kept, free_cols;
      for (Eigen::Index c = 0; c < cols; ++c) (original[static_cast<std::size_t>(c)] ? kept : free_cols).push_back(c);
      Mat kc(rows, static_cast<Eigen::Index>(kept.size()));
      for (std::size_t i = 0; i < kept.size(); ++i) kc.col(static_cast<Eigen::Index>(i)) = m.col(kept[i]);
      if (max_abs(kc.adjoint() * kc - Mat::Identity(kc.cols(), kc.cols())) > 1e-8)
        throw Error(ErrorKind::NotIsometry, "level " + std::to_string(n) + " columns are not orthonormal");
      Mat u = complete_columns(m, kept, free_cols);
      ext.unitarity_dev = std::max(ext.unitarity_dev, unitary_deviation(u));

      for (int k : sources) {
        const AgentMask K = k == 0 ? 0 : S & ~bit(k);
        const Eigen::Index coff = k == 0 ? 0 : sum_offset(in_agents, k, cin);
        const Eigen::Index ccount = k == 0 ? cols : cin;
        for (int to : last ? std::vector<int>{0} : out_agents) {
          const Eigen::Index roff = to == 0 ? 0 : sum_offset(out_agents, to, cout);
          const Eigen::Index rcount = to == 0 ? rows : cout;
          Mat sub = u.block(roff, coff, rcount, ccount);
          if (max_abs(sub) > 1e-14) ext.q.set_block(K, k, to, sub);
        }
      }
    }
  }
  return ext;
}

double extension_reduction_deviation(const QcQc& q, const QcqcUnitaryExtension& ext) {
  const LabeledVector w = process_vector(q);
  const LabeledVector wn = process_vector(ext.q);
  const Signature& so = w.sig;
  const Signature& sn = wn.sig;
  const int N = q.n_agents;
  LabeledVector emb(sn);
  for (const auto& [idx, a] : w.amps) {
    auto dg = so.unravel(idx);
    std::vector<int> nd;
    nd.push_back(dg[0] * ext.p_prime);
    for (int i = 1; i <= 2 * N + 1; ++i) nd.push_back(dg[static_cast<std::size_t>(i)]);
    std::uint64_t af = 0;
    for (std::size_t i = static_cast<std::size_t>(2 * N + 2); i < dg.size(); ++i)
      af = af * static_cast<std::uint64_t>(so.wires()[i].dim) + static_cast<std::uint64_t>(dg[i]);
    nd.push_back(static_cast<int>(af));
    emb.amps[sn.ravel(nd)] += a;
  }
  double dev = 0.0;
  for (const auto& [idx, a] : wn.amps) {
    if (sn.unravel(idx)[0] % ext.p_prime != 0) continue;
    auto it = emb.amps.find(idx);
    dev = std::max(dev, std::abs(a - (it == emb.amps.end() ? cplx(0.0) : it->second)));
  }
  for (const auto& [idx, a] : emb.amps) {
    auto it = wn.amps.find(idx);
    dev = std::max(dev, std::abs(a - (it == wn.amps.end() ? cplx(0.0) : it->second)));
  }
  return dev;
}

UnitaryEquivalenceReport check_unitary_equivalence(const QcQc& q, int trials, double tol, std::uint64_t seed, int cap) {
  UnitaryEquivalenceReport r;
  const auto ext = unitary_extension(q);
  r.unitarity_dev = ext.unitarity_dev;
  r.reduction_dev = extension_reduction_deviation(q, ext);
  const ProcessBox pb_new = extend_symmetrization(ext.q, cap);
  r.equivalence_dev = check_operational_equivalence(ext.q, pb_new, trials, tol, seed).max_deviation;

  const ProcessBox pb = extend_symmetrization(q, cap);
  const int af = static_cast<int>(q.ancilla_sig(q.n_agents + 1).dim());
  const int af_new = ext.ancillas.back();
  const int d_old = q.d_future * af, d_new = q.d_future * af_new;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    std::vector<Mat> ops;
    for (int k = 0; k < q.n_agents; ++k)
      ops.push_back(random_agent_kraus(rng, q.d_in[static_cast<std::size_t>(k)], q.d_out[static_cast<std::size_t>(k)]));
    for (int p = 0; p < q.d_past; ++p) {
      double leak_old = 0.0, leak_new = 0.0;
      Vec vo = future_to_qc(pb, simulate(pb, ops, past_message(pb, Vec::Unit(q.d_past, p))).out, d_old, leak_old);
      Vec vn = future_to_qc(pb_new,
                            simulate(pb_new, ops, past_message(pb_new, Vec::Unit(q.d_past * ext.p_prime, p * ext.p_prime))).out,
                            d_new, leak_new);
      Vec mapped = Vec::Zero(d_new);
      for (int f = 0; f < q.d_future; ++f)
        for (int b = 0; b < af; ++b) mapped(f * af_new + b) = vo(f * af + b);
      double dev = std::sqrt((mapped - vn).squaredNorm() + leak_old * leak_old + leak_new * leak_new);
      r.restriction_dev = std::max(r.restriction_dev, dev);
    }
  }
  r.pass = r.unitarity_dev <= tol && r.reduction_dev <= tol && r.equivalence_dev <= tol && r.restriction_dev <= tol;
  return r;
}

}  // namespace icausal

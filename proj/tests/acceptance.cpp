// Acceptance run: one line per criterion, exit code 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "icausal/cbox.hpp"
#include "icausal/pbox.hpp"
#include "icausal/procmat.hpp"
#include "icausal/qcqc.hpp"
#include "icausal/random.hpp"

using namespace icausal;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

Wire sys(const std::string& n, int d) { return {n, d, WireKind::system}; }

ChoiMatrix channel(const std::vector<Mat>& kraus, const Signature& in, const Signature& out) {
  std::vector<LabeledOperator> ks;
  for (const auto& k : kraus) ks.emplace_back(in, out, k);
  return choi_matrix_of(ks);
}

Vec ket(int d, int i) { return Vec::Unit(d, i); }

Verdict link_equivalence() {
  Rng rng(2024);
  std::uniform_int_distribution<int> dim(1, 4), rank(1, 3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int da = dim(rng), dc = dim(rng), dd = dim(rng);
    Signature a({sys("A", da)}), c({sys("C", dc)}), b({sys("B", dc)}), d({sys("D", dd)});
    auto ma = channel(random_kraus(rng, da, dc, std::max(rank(rng), (da + dc - 1) / dc)), a, c);
    auto mb = channel(random_kraus(rng, dc, dd, std::max(rank(rng), (dc + dd - 1) / dd)), b, d);
    ChoiMatrix par{tensor_product(ma.mat, mb.mat), ma.in_sig.concat(mb.in_sig), ma.out_sig.concat(mb.out_sig)};
    auto looped = loop_compose(par, "C", "B");
    worst = std::max(worst, max_diff(looped.mat, link_matrices(renamed(ma.mat, {{"C", "B"}}), mb.mat)));
  }
  return {worst <= 1e-12, fmt("max deviation %.3g over 100 pairs", worst)};
}

Verdict fock_norm() {
  FockWire w{"A", 2, 3};
  const double h = 1.0 / std::sqrt(2.0);
  auto vac = FockState::vacuum({w});
  auto two = symmetric_product(w, {{ket(2, 0), 4}, {ket(2, 1), 4}});
  auto psi = add(vac.scaled(h), two.scaled(h));
  double n = std::abs(fock_inner(psi, psi) - 1.0);
  double p0 = std::abs(std::norm(fock_inner(vac, psi)) - 0.5);
  double p2 = std::abs(std::norm(fock_inner(two, psi)) - 0.5);
  double worst = std::max({n, p0, p2});
  return {worst <= 1e-12, fmt("|<psi|psi> - 1| and |p - 1/2| at most %.3g", worst)};
}

Verdict switch_validation() {
  auto q = fixtures::dynamical_switch();
  auto pm = process_matrix(q);
  auto v = validate_process_matrix(pm);
  auto c = check_qcqc_conditions(q, pm.w, witnesses(q));
  auto k = check_krausiso(q);
  bool pass = v.pass && std::abs(v.trace - 8.0) <= 1e-9 && c.pass && k.pass;
  double dev = std::max({c.past_dev, c.recursion_dev, c.future_dev, k.diagonal_dev, k.cross_dev});
  return {pass, "Tr W = " + fmt("%.12g", v.trace) + ", condition deviation " + fmt("%.3g", dev)};
}

Verdict switch_isometries() {
  auto pb = extend_symmetrization(fixtures::dynamical_switch(), 3);
  auto r = verify_sequence_isometries(pb.rep, 3);
  bool all = !r.steps.empty();
  for (const auto& s : r.steps) all = all && s.columns > 0;
  return {r.pass && all && r.max_deviation <= 1e-9,
          std::to_string(r.steps.size()) + " steps at cap 3, Gram deviation " + fmt("%.3g", r.max_deviation)};
}

Verdict equivalence() {
  auto dyn = fixtures::dynamical_switch();
  auto symm = check_operational_equivalence(dyn, extend_symmetrization(dyn, 1), 20, 1e-9, 42);
  auto ab = check_operational_equivalence(dyn, extend_abort(dyn), 20, 1e-9, 42);
  auto par = check_operational_equivalence(fixtures::dynamical_parallel(), dynamical_parallel_box(), 20, 1e-9, 42);
  double worst = std::max({symm.max_deviation, ab.max_deviation, par.max_deviation});
  return {symm.pass && ab.pass && par.pass,
          fmt("symm, abort and dynamical-parallel pairs, 20 trials each, max deviation %.3g", worst)};
}

Verdict acceptance_probability() {
  auto pb = extend_abort(fixtures::dynamical_switch());
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    Rng rng(100 + static_cast<std::uint64_t>(t));
    std::vector<Mat> ops;
    for (const auto& a : pb.agents) ops.push_back(random_agent_kraus(rng, a.d_in, a.d_out));
    worst = std::max(worst, std::abs(1.0 - accept_probability(pb, ops, past_message(pb, Vec::Unit(1, 0)))));
  }
  return {worst <= 1e-10, fmt("max |1 - p_accept| = %.3g over 20 agent sets", worst)};
}

Verdict counterexample() {
  auto pm = loop_process_matrices();
  auto cb = loop_causal_boxes(8);
  bool pass = std::abs(pm.born) <= 1e-12 && std::abs(cb.total_probability - 1.0) <= 1e-10 && cb.loop_activity == 0.0;
  return {pass, fmt("process matrices give %.3g", pm.born) + fmt(", causal boxes give %.12g", cb.total_probability) +
                    fmt(" with loop amplitude %.3g", cb.loop_activity)};
}

Verdict double_switch() {
  Vec psi(2);
  psi << cplx(0.6, 0.0), cplx(0.0, 0.8);
  auto q = fixtures::double_quantum_switch(psi);
  std::vector<LabeledOperator> ids;
  for (int k = 1; k <= q.n_agents; ++k)
    ids.emplace_back(Signature({sys(in_wire(k), 2)}), Signature({sys(out_wire(k), 2)}), Mat::Identity(2, 2));
  const std::vector<std::string> order{"P", "F", "alphaF"};
  auto all = permute_wires(contract_agents(process_vector(q), ids), order);
  LabeledVector fin(all.sig);
  for (int t = 0; t < 2; ++t) fin.amps[all.sig.ravel({0, t, 1})] = psi(t);
  double worst = max_diff(all, fin);
  double p0 = 0.0;
  for (const auto& [idx, a] : all.amps)
    if (all.sig.unravel(idx)[2] == 0) p0 += std::norm(a);
  const std::vector<std::pair<std::vector<int>, double>> orders{
      {{1, 2, 3, 4}, -0.5}, {{2, 1, 3, 4}, 0.5}, {{1, 2, 4, 3}, 0.5}, {{2, 1, 4, 3}, 0.5}};
  for (const auto& [o, amp] : orders) {
    auto v = permute_wires(contract_agents(order_vector(q, o), ids), order);
    LabeledVector expect(v.sig);
    const int flag = o[2] == 3 ? 0 : 1;
    for (int t = 0; t < 2; ++t) expect.amps[v.sig.ravel({0, t, flag})] = amp * psi(t);
    worst = std::max(worst, max_diff(v, expect));
  }
  return {worst <= 1e-12 && p0 <= 1e-12, fmt("state and order amplitudes within %.3g", worst) + fmt(", p(alpha_F = 0) = %.3g", p0)};
}

Verdict unitary() {
  auto q = fixtures::dynamical_switch();
  auto pb = extend_symmetrization(q, 3);
  auto u = unitary_extension(pb);
  Rng rng(77);
  std::vector<Mat> ops;
  for (const auto& a : pb.agents) ops.push_back(random_agent_kraus(rng, a.d_in, a.d_out));
  auto base = past_message(pb, Vec::Unit(1, 0));
  auto plain = simulate(pb, ops, base).out;
  auto ext = simulate(u.box, ops, extension_input(u, base, Vec::Unit(u.p_total(), 0))).out;
  LabeledVector reduced(plain.sig);
  double junk = 0.0;
  for (const auto& [idx, a] : ext.amps) {
    auto dg = ext.sig.unravel(idx);
    bool clean = true;
    for (std::size_t n = 1; n <= u.p_dims.size(); ++n)
      clean = clean && dg[static_cast<std::size_t>(ext.sig.find("F'" + std::to_string(n)))] == 0;
    if (!clean) {
      junk += std::norm(a);
      continue;
    }
    std::vector<int> keep;
    for (const auto& w : plain.sig.wires()) keep.push_back(dg[static_cast<std::size_t>(ext.sig.find(w.name))]);
    reduced.amps[plain.sig.ravel(keep)] += a;
  }
  double red = std::max(max_diff(reduced, plain), std::sqrt(junk));
  auto coro = check_unitary_equivalence(q, 20, 1e-9, 42);
  bool pass = u.unitarity_dev <= 1e-10 && red <= 1e-9 && u.reduction_dev <= 1e-9 && coro.pass;
  return {pass, fmt("unitarity %.3g", u.unitarity_dev) + fmt(", reduction %.3g", red) +
                    fmt(", QC-QC extension equivalence %.3g", std::max(coro.equivalence_dev, coro.restriction_dev))};
}

Verdict relabeling() {
  double worst = 0.0;
  Rng rng(55);
  for (const auto& q : {fixtures::dynamical_switch(), fixtures::quantum_switch()}) {
    auto pb = extend_symmetrization(q, 1);
    std::map<int, int> twice, shift;
    for (int t = 1; t <= 2 * q.n_agents + 2; ++t) {
      twice[t] = 2 * t;
      shift[t] = t + 7;
    }
    std::vector<Mat> ops;
    for (const auto& a : pb.agents) ops.push_back(random_agent_kraus(rng, a.d_in, a.d_out));
    auto probs = [&](const ProcessBox& b, int p) {
      const int dp = b.rep.slices.at(b.past).payload_dim();
      auto sim = simulate(b, ops, past_message(b, Vec::Unit(dp, p)));
      int de = 1;
      if (!b.future_extra.empty()) de = sim.out.sig.at(b.future_extra).dim - 1;
      double leak = 0.0;
      Vec v = future_to_qc(b, sim.out, b.rep.slices.at(b.future).payload_dim() * de, leak);
      return Vec(v.cwiseAbs2().cast<cplx>());
    };
    for (const auto& r : {twice, shift}) {
      auto moved = relabel_positions(pb, r);
      for (int p = 0; p < q.d_past; ++p) worst = std::max(worst, max_abs(probs(pb, p) - probs(moved, p)));
    }
  }
  return {worst <= 1e-12, fmt("t -> 2t and t -> t + 7 on two fixtures, max change %.3g", worst)};
}

Verdict born_normalization() {
  double worst = 0.0;
  std::vector<std::future<double>> jobs;
  for (const auto& [name, q] : fixtures::all()) {
    auto pm = std::make_shared<ProcessMatrix>(process_matrix(q));
    for (int t = 0; t < 50; ++t) {
      jobs.push_back(std::async(std::launch::async, [pm, t, dp = q.d_past]() {
        Rng rng(900 + static_cast<std::uint64_t>(t));
        std::optional<LabeledOperator> rho;
        if (dp > 1) rho = LabeledOperator::square(Signature({sys(pm->layout.past, dp)}), random_density(rng, dp));
        std::vector<std::vector<ChoiMatrix>> inst;
        for (const auto& a : pm->layout.agents) {
          const int din = pm->wire_dim(a.in), dout = pm->wire_dim(a.out);
          std::vector<ChoiMatrix> outs;
          for (const auto& k : random_instrument(rng, din, dout, 2, 2))
            outs.push_back(channel(k, Signature({sys(a.in, din)}), Signature({sys(a.out, dout)})));
          inst.push_back(std::move(outs));
        }
        double total = 0.0;
        std::vector<std::size_t> pick(inst.size(), 0);
        while (true) {
          std::vector<ChoiMatrix> ops;
          for (std::size_t i = 0; i < inst.size(); ++i) ops.push_back(inst[i][pick[i]]);
          total += born_probability(*pm, ops, rho).probability;
          std::size_t i = 0;
          while (i < pick.size() && ++pick[i] == inst[i].size()) pick[i++] = 0;
          if (i == pick.size()) break;
        }
        return std::abs(total - 1.0);
      }));
    }
  }
  for (auto& j : jobs) worst = std::max(worst, j.get());
  return {worst <= 1e-9, fmt("4 fixtures x 50 instrument sets, max |sum - 1| = %.3g", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
    double budget;  // seconds, 0 when unbounded
  };
  const std::vector<Criterion> list{
      {1, "link/composition equivalence", link_equivalence, 5.0},
      {2, "Fock norm example", fock_norm, 0.0},
      {3, "dynamical switch validation", switch_validation, 10.0},
      {4, "symmetrization steps are isometries", switch_isometries, 60.0},
      {5, "operational equivalence", equivalence, 0.0},
      {6, "abort acceptance probability", acceptance_probability, 0.0},
      {7, "composability counterexample", counterexample, 0.0},
      {8, "double quantum switch", double_switch, 0.0},
      {9, "unitary extension", unitary, 0.0},
      {10, "relabeling invariance", relabeling, 0.0},
      {11, "Born normalization", born_normalization, 0.0},
  };
  int failed = 0;
  for (const auto& c : list) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0.0 && secs > c.budget) {
      v.pass = false;
      v.detail += fmt(", over the %.0f s budget", c.budget);
    }
    std::printf("[%s] %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(list.size()) - failed, list.size());
  return failed == 0 ? 0 : 1;
}

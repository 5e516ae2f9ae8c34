#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "icausal/procmat.hpp"
#include "icausal/qcqc.hpp"
#include "icausal/random.hpp"

using namespace icausal;

namespace {

Wire sys(const std::string& n, int d) { return {n, d, WireKind::system}; }

LabeledOperator id_on(const std::vector<Wire>& w) {
  Signature s(w);
  return LabeledOperator::identity(s, s);
}

// W^{1 before 2}: rho into A1.I, A1.O wired to A2.I, A2.O discarded
ProcessMatrix wire_process(const Mat& rho, int first, int second) {
  LabeledOperator r = LabeledOperator::square(Signature({sys(in_wire(first), 2)}), rho);
  LabeledOperator link = outer(choi_vector_of(LabeledOperator::identity(Signature({sys(out_wire(first), 2)}),
                                                                        Signature({sys(in_wire(second), 2)})))
                                   .vec);
  LabeledOperator w = tensor_product(tensor_product(r, link), id_on({sys(out_wire(second), 2)}));
  return {w, Layout::standard(2)};
}

Mat ket0() {
  Mat r = Mat::Zero(2, 2);
  r(0, 0) = 1.0;
  return r;
}

ChoiMatrix agent_choi(int k, const std::vector<Mat>& kraus) {
  std::vector<LabeledOperator> ks;
  for (const auto& m : kraus) ks.emplace_back(Signature({sys(in_wire(k), 2)}), Signature({sys(out_wire(k), 2)}), m);
  return choi_matrix_of(ks);
}

std::vector<std::vector<int>> prefixes(int n) {
  std::vector<std::vector<int>> r;
  std::vector<int> cur;
  std::function<void()> rec = [&] {
    r.push_back(cur);
    if (static_cast<int>(cur.size()) == n) return;
    for (int k = 1; k <= n; ++k) {
      if (std::find(cur.begin(), cur.end(), k) != cur.end()) continue;
      cur.push_back(k);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return r;
}

InstrumentTree random_tree(Rng& rng, int n, int anc, int dF) {
  InstrumentTree t;
  t.n_agents = n;
  t.d_in.assign(static_cast<std::size_t>(n), 2);
  t.d_out.assign(static_cast<std::size_t>(n), 2);
  t.d_future = dF;
  t.ancilla_dims.assign(static_cast<std::size_t>(n), anc);
  for (const auto& pre : prefixes(n)) {
    std::vector<int> nexts;
    if (static_cast<int>(pre.size()) == n) {
      nexts.push_back(0);
    } else {
      for (int k = 1; k <= n; ++k)
        if (std::find(pre.begin(), pre.end(), k) == pre.end()) nexts.push_back(k);
    }
    Signature in = t.branch_in(pre);
    Signature out = t.branch_out(pre, nexts.front());
    auto ins = random_instrument(rng, static_cast<Eigen::Index>(in.dim()), static_cast<Eigen::Index>(out.dim()),
                                 static_cast<int>(nexts.size()), static_cast<Eigen::Index>(in.dim()));
    for (std::size_t i = 0; i < nexts.size(); ++i) {
      Signature o = t.branch_out(pre, nexts[i]);
      for (const auto& m : ins[i]) t.branches[pre][nexts[i]].emplace_back(in, o, m);
    }
  }
  return t;
}

}  // namespace

TEST_CASE("wire process is valid and fixed order") {
  auto pm = wire_process(ket0(), 1, 2);
  CHECK(max_diff(lv_project(pm.w, pm.layout), pm.w) <= 1e-12);
  auto rep = validate_process_matrix(pm);
  CHECK(rep.pass);
  CHECK(std::abs(rep.trace - 4.0) <= 1e-12);
  CHECK(is_fixed_order(pm, {0, 1}));
  CHECK_FALSE(is_fixed_order(pm, {1, 0}));

  ProcessMatrix scaled = pm;
  scaled.w.m *= 1.1;
  auto bad = validate_process_matrix(scaled);
  CHECK_FALSE(bad.pass);
  CHECK(bad.trace_dev > 0.3);
}

TEST_CASE("maximally mixed process is fixed by the projector") {
  Layout l = Layout::standard(2);
  auto w = id_on({sys(in_wire(1), 2), sys(out_wire(1), 3), sys(in_wire(2), 3), sys(out_wire(2), 2)});
  w.m /= 6.0;
  ProcessMatrix pm{w, l};
  CHECK(max_diff(lv_project(w, l), w) <= 1e-12);
  CHECK(validate_process_matrix(pm).pass);
}

TEST_CASE("projector is idempotent and trace preserving") {
  Rng rng(31);
  Layout l = Layout::standard(2);
  Signature s({sys("P", 2), sys(in_wire(1), 2), sys(out_wire(1), 2), sys(in_wire(2), 2), sys(out_wire(2), 2),
               sys("F", 2)});
  for (int t = 0; t < 5; ++t) {
    auto h = LabeledOperator::square(s, random_hermitian(rng, 64));
    auto p1 = lv_project(h, l);
    CHECK(max_diff(lv_project(p1, l), p1) <= 1e-12);
    CHECK(std::abs(trace(p1) - trace(h)) <= 1e-10);
  }
  CHECK_THROWS_AS(lv_project(id_on({sys("X", 2)}), l), Error);
}

TEST_CASE("born rule on the wire process") {
  Rng rng(8);
  auto pm = wire_process(random_density(rng, 2), 1, 2);
  for (int t = 0; t < 10; ++t) {
    auto a = random_instrument(rng, 2, 2, 3, 2);
    auto b = random_instrument(rng, 2, 2, 2, 1);
    double total = 0.0;
    for (const auto& x : a)
      for (const auto& y : b) {
        double p = born_probability(pm, {agent_choi(1, x), agent_choi(2, y)}).probability;
        CHECK(p >= -1e-12);
        total += p;
      }
    CHECK(std::abs(total - 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(born_probability(pm, {agent_choi(1, {Mat::Identity(2, 2)})}), Error);
  CHECK_THROWS_AS(born_probability(pm, {agent_choi(2, {Mat::Identity(2, 2)}), agent_choi(2, {Mat::Identity(2, 2)})}),
                  Error);
}

TEST_CASE("born rule: loop through two opposite wire processes gives zero") {
  // W: rho -> A.I, A.O -> B.I ; W': rho -> B'.I, B'.O -> A'.I
  Mat rho = ket0();
  auto ident = [](const std::string& a, const std::string& b) {
    return outer(choi_vector_of(LabeledOperator::identity(Signature({sys(a, 2)}), Signature({sys(b, 2)}))).vec);
  };
  auto w = tensor_product(tensor_product(LabeledOperator::square(Signature({sys("A.I", 2)}), rho),
                                         ident("A.O", "B.I")),
                          id_on({sys("B.O", 2)}));
  auto wp = tensor_product(tensor_product(LabeledOperator::square(Signature({sys("Bp.I", 2)}), rho),
                                          ident("Bp.O", "Ap.I")),
                           id_on({sys("Ap.O", 2)}));
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  auto alice = tensor_product(
      outer(choi_vector_of(LabeledOperator(Signature({sys("Ap.I", 2)}), Signature({sys("A.O", 2)}), x)).vec),
      ident("A.I", "Ap.O"));
  auto bob = tensor_product(ident("B.I", "Bp.O"), ident("Bp.I", "B.O"));
  auto total = link_matrices(link_matrices(link_matrices(w, wp), alice), bob);
  CHECK(total.in_sig.dim() == 1);
  CHECK(std::abs(total.m(0, 0)) <= 1e-12);
  CHECK(validate_process_matrix({w, {"P", "F", {{"A", "A.I", "A.O"}, {"B", "B.I", "B.O"}}}}).pass);
}

TEST_CASE("quantum switch is not fixed order") {
  auto pm = process_matrix(fixtures::quantum_switch());
  CHECK(validate_process_matrix(pm).pass);
  CHECK_FALSE(is_fixed_order(pm, {0, 1}));
  CHECK_FALSE(is_fixed_order(pm, {1, 0}));
}

TEST_CASE("dynamical switch validates with trace 8") {
  auto pm = process_matrix(fixtures::dynamical_switch());
  auto rep = validate_process_matrix(pm);
  CHECK(rep.pass);
  CHECK(std::abs(rep.trace - 8.0) <= 1e-9);
  std::vector<ChoiMatrix> ids;
  for (int k = 1; k <= 3; ++k) ids.push_back(agent_choi(k, {Mat::Identity(2, 2)}));
  CHECK(std::abs(born_probability(pm, ids).probability - 1.0) <= 1e-10);
}

TEST_CASE("build_qccc: a single order gives a fixed-order process") {
  InstrumentTree t;
  t.n_agents = 2;
  t.d_in = {2, 2};
  t.d_out = {2, 2};
  t.ancilla_dims = {1, 1};
  Signature p({sys("P", 1)});
  auto op = [](const Signature& in, const Signature& out, const Mat& m) { return LabeledOperator(in, out, m); };
  Mat zero_state = Mat::Zero(2, 1);
  zero_state(0, 0) = 1.0;
  t.branches[{}][1] = {op(t.branch_in({}), t.branch_out({}, 1), zero_state)};
  t.branches[{1}][2] = {op(t.branch_in({1}), t.branch_out({1}, 2), Mat::Identity(2, 2))};
  Mat e0 = Mat::Zero(1, 2), e1 = Mat::Zero(1, 2);
  e0(0, 0) = 1.0;
  e1(0, 1) = 1.0;
  t.branches[{1, 2}][0] = {op(t.branch_in({1, 2}), t.branch_out({1, 2}, 0), e0),
                           op(t.branch_in({1, 2}), t.branch_out({1, 2}, 0), e1)};
  auto pm = build_qccc(t);
  CHECK(validate_process_matrix(pm).pass);
  CHECK(is_fixed_order(pm, {0, 1}));
  CHECK_FALSE(is_fixed_order(pm, {1, 0}));
  auto ref = wire_process(ket0(), 1, 2);
  CHECK(max_diff(partial_trace(pm.w, {"P", "F"}), ref.w) <= 1e-12);

  t.branches[{1}][2] = {op(t.branch_in({1}), t.branch_out({1}, 2), Mat::Identity(2, 2) * 0.5)};
  CHECK_THROWS_AS(build_qccc(t), Error);
}

TEST_CASE("build_qccc: classical mixture of the two orders") {
  InstrumentTree t;
  t.n_agents = 2;
  t.d_in = {2, 2};
  t.d_out = {2, 2};
  t.ancilla_dims = {1, 1};
  Mat zero_state = Mat::Zero(2, 1);
  zero_state(0, 0) = 1.0;
  const double h = 1.0 / std::sqrt(2.0);
  auto make = [](const Signature& in, const Signature& out, const Mat& m) { return LabeledOperator(in, out, m); };
  for (int k = 1; k <= 2; ++k) {
    int o = 3 - k;
    t.branches[{}][k] = {make(t.branch_in({}), t.branch_out({}, k), zero_state * h)};
    t.branches[{k}][o] = {make(t.branch_in({k}), t.branch_out({k}, o), Mat::Identity(2, 2))};
    Mat e0 = Mat::Zero(1, 2), e1 = Mat::Zero(1, 2);
    e0(0, 0) = 1.0;
    e1(0, 1) = 1.0;
    t.branches[{k, o}][0] = {make(t.branch_in({k, o}), t.branch_out({k, o}, 0), e0),
                             make(t.branch_in({k, o}), t.branch_out({k, o}, 0), e1)};
  }
  auto pm = build_qccc(t);
  CHECK(validate_process_matrix(pm).pass);
  auto a = wire_process(ket0(), 1, 2), b = wire_process(ket0(), 2, 1);
  LabeledOperator mix = add(a.w, b.w);
  mix.m *= 0.5;
  CHECK(max_diff(partial_trace(pm.w, {"P", "F"}), mix) <= 1e-12);
}

TEST_CASE("build_qccc: single agent") {
  InstrumentTree t;
  t.n_agents = 1;
  t.d_in = {2};
  t.d_out = {3};
  t.ancilla_dims = {1};
  Mat s = Mat::Zero(2, 1);
  s(1, 0) = 1.0;
  t.branches[{}][1] = {LabeledOperator(t.branch_in({}), t.branch_out({}, 1), s)};
  t.branches[{1}][0] = {LabeledOperator(t.branch_in({1}), t.branch_out({1}, 0), Mat::Ones(1, 3) / std::sqrt(3.0))};
  // complete the final instrument with two more rank-one elements orthogonal to the first
  Mat rest = Mat::Zero(2, 3);
  rest(0, 0) = 1.0 / std::sqrt(2.0);
  rest(0, 1) = -1.0 / std::sqrt(2.0);
  rest(1, 0) = 1.0 / std::sqrt(6.0);
  rest(1, 1) = 1.0 / std::sqrt(6.0);
  rest(1, 2) = -2.0 / std::sqrt(6.0);
  for (int i = 0; i < 2; ++i)
    t.branches[{1}][0].emplace_back(t.branch_in({1}), t.branch_out({1}, 0), Mat(rest.row(i)));
  auto pm = build_qccc(t);
  auto rep = validate_process_matrix(pm);
  CHECK(rep.pass);
  CHECK(std::abs(rep.trace - 3.0) <= 1e-12);
}

TEST_CASE("build_qccc: random instrument trees are valid processes") {
  Rng rng(2024);
  int checked = 0;
  for (int n : {2, 3}) {
    const int count = 50;
    for (int i = 0; i < count; ++i) {
      auto t = random_tree(rng, n, (i % 2) + 1, (i % 3) + 1);
      auto pm = build_qccc(t);
      auto rep = validate_process_matrix(pm);
      CHECK(rep.pass);
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("born probabilities sum to one for random instruments") {
  Rng rng(55);
  auto t = random_tree(rng, 2, 2, 2);
  auto pm = build_qccc(t);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_instrument(rng, 2, 2, 2, 2);
    auto b = random_instrument(rng, 2, 2, 3, 1);
    double total = 0.0;
    for (const auto& x : a)
      for (const auto& y : b) {
        double p = born_probability(pm, {agent_choi(1, x), agent_choi(2, y)}).probability;
        CHECK(p >= -1e-9);
        CHECK(p <= 1.0 + 1e-9);
        total += p;
      }
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

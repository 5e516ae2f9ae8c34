#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "icausal/fock.hpp"
#include "icausal/random.hpp"

using namespace icausal;

namespace {

Vec ket(int d, int j) {
  Vec v = Vec::Zero(d);
  v(j) = 1.0;
  return v;
}

// Plain tensor-product expansion of one symmetric product on a single wire, over
// modes (position index, payload) with positions listed in `ts`.
Vec expand(const std::vector<MessageState>& msgs, int d, const std::vector<int>& ts) {
  const auto n = msgs.size();
  const Eigen::Index m = d * static_cast<Eigen::Index>(ts.size());
  Eigen::Index total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;
  Vec out = Vec::Zero(total);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double fact = 1.0;
  for (std::size_t i = 2; i <= n; ++i) fact *= static_cast<double>(i);
  do {
    Vec acc = Vec::Ones(1);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& msg = msgs[perm[k]];
      Vec f = Vec::Zero(m);
      auto tpos = std::find(ts.begin(), ts.end(), msg.t) - ts.begin();
      f.segment(tpos * d, d) = msg.payload;
      Vec next(acc.size() * m);
      for (Eigen::Index a = 0; a < acc.size(); ++a) next.segment(a * m, m) = acc(a) * f;
      acc = next;
    }
    out += acc / std::sqrt(fact);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

cplx permanent(const Mat& a) {
  std::vector<int> perm(static_cast<std::size_t>(a.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  cplx s = 0.0;
  do {
    cplx p = 1.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) p *= a(i, perm[static_cast<std::size_t>(i)]);
    s += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s;
}

std::vector<MessageState> random_msgs(Rng& rng, int n, int d, const std::vector<int>& ts) {
  std::vector<MessageState> r;
  std::uniform_int_distribution<std::size_t> pick(0, ts.size() - 1);
  for (int k = 0; k < n; ++k) r.push_back({random_state(rng, d), ts[pick(rng)]});
  return r;
}

}  // namespace

TEST_CASE("symmetric product conventions") {
  FockWire w{"A", 2, 3};
  auto s01 = symmetric_product(w, {{ket(2, 0), 5}, {ket(2, 1), 5}});
  CHECK(std::abs(fock_inner(s01, s01) - 1.0) <= 1e-12);
  auto s00 = symmetric_product(w, {{ket(2, 0), 5}, {ket(2, 0), 5}});
  CHECK(std::abs(fock_inner(s00, s00) - 2.0) <= 1e-12);

  Vec psi(2);
  psi << cplx(0.6, 0.0), cplx(0.0, 0.8);
  auto one = symmetric_product(w, {{psi, 3}});
  REQUIRE(one.amps.size() == 2);
  CHECK(one.amps.at({{{3, 0}}}) == psi(0));
  CHECK(one.amps.at({{{3, 1}}}) == psi(1));
  CHECK(std::abs(one.norm() - 1.0) <= 1e-15);

  CHECK_THROWS_AS(symmetric_product({"A", 2, 1}, {{ket(2, 0), 1}, {ket(2, 1), 1}}), Error);
  CHECK_THROWS_AS(symmetric_product(w, {{ket(3, 0), 1}}), Error);
}

TEST_CASE("norm of a vacuum plus two-message superposition") {
  FockWire w{"A", 2, 3};
  const double h = 1.0 / std::sqrt(2.0);
  auto vac = FockState::vacuum({w});
  auto two = symmetric_product(w, {{ket(2, 0), 4}, {ket(2, 1), 4}});
  auto psi = add(vac.scaled(h), two.scaled(h));
  CHECK(std::abs(fock_inner(psi, psi) - 1.0) <= 1e-12);
  CHECK(std::abs(std::norm(fock_inner(vac, psi)) - 0.5) <= 1e-12);
  CHECK(std::abs(std::norm(fock_inner(two, psi)) - 0.5) <= 1e-12);
}

TEST_CASE("multi-wire inner product matches wires by name") {
  FockWire a{"A", 2, 3}, b{"B", 2, 3};
  const int t = 2, tp = 5;
  auto x = tensor_product(symmetric_product(a, {{ket(2, 0), t}, {ket(2, 1), t}}),
                          symmetric_product(b, {{ket(2, 0), t}, {ket(2, 0), tp}}));
  auto y = tensor_product(symmetric_product(b, {{ket(2, 0), t}, {ket(2, 1), t}}),
                          symmetric_product(a, {{ket(2, 0), t}, {ket(2, 0), tp}}));
  CHECK(std::abs(fock_inner(x, y)) == 0.0);
  auto x2 = tensor_product(symmetric_product(b, {{ket(2, 0), t}, {ket(2, 0), tp}}),
                           symmetric_product(a, {{ket(2, 0), t}, {ket(2, 1), t}}));
  CHECK(std::abs(fock_inner(x, x2) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(fock_inner(x, FockState::vacuum({a})), Error);
}

TEST_CASE("inner product agrees with the tensor expansion and the permanent") {
  Rng rng(31);
  const int d = 2;
  const std::vector<int> ts{1, 2};
  FockWire w{"A", d, 3};
  for (int trial = 0; trial < 30; ++trial) {
    cplx va(std::normal_distribution<>()(rng), 0.3), vb(0.2, std::normal_distribution<>()(rng));
    FockState a = FockState::vacuum({w}, va), b = FockState::vacuum({w}, vb);
    cplx oracle = std::conj(va) * vb;
    for (int n = 1; n <= 3; ++n) {
      auto ma = random_msgs(rng, n, d, ts), mb = random_msgs(rng, n, d, ts);
      a = add(a, symmetric_product(w, ma));
      b = add(b, symmetric_product(w, mb));
      oracle += expand(ma, d, ts).dot(expand(mb, d, ts));

      Mat g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          g(i, j) = ma[static_cast<std::size_t>(i)].t == mb[static_cast<std::size_t>(j)].t
                        ? ma[static_cast<std::size_t>(i)].payload.dot(mb[static_cast<std::size_t>(j)].payload)
                        : cplx(0.0);
      auto sa = symmetric_product(w, ma), sb = symmetric_product(w, mb);
      CHECK(std::abs(fock_inner(sa, sb) - permanent(g)) <= 1e-12);
    }
    CHECK(std::abs(fock_inner(a, b) - oracle) <= 1e-12);
    CHECK(fock_inner(a, a).real() >= 0.0);
    CHECK(std::abs(fock_inner(a, a).imag()) <= 1e-12);
  }
}

TEST_CASE("sectors with different message counts are orthogonal") {
  Rng rng(5);
  FockWire w{"A", 3, 3};
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m) {
      if (n == m) continue;
      auto a = symmetric_product(w, random_msgs(rng, n, 3, {1, 2}));
      auto b = symmetric_product(w, random_msgs(rng, m, 3, {1, 2}));
      CHECK(fock_inner(a, b) == cplx(0.0));
    }
}

TEST_CASE("symm groups by wire and ignores factor order") {
  std::vector<FockWire> wires{{"A", 2, 3}, {"B", 2, 3}, {"C", 2, 3}};
  auto s = symm(wires, {{"A", ket(2, 0), 1}, {"A", ket(2, 1), 1}, {"B", ket(2, 0), 1}, {"C", ket(2, 1), 1},
                        {"C", ket(2, 1), 1}});
  auto expect = tensor_product(
      tensor_product(symmetric_product(wires[0], {{ket(2, 0), 1}, {ket(2, 1), 1}}),
                     symmetric_product(wires[1], {{ket(2, 0), 1}})),
      symmetric_product(wires[2], {{ket(2, 1), 1}, {ket(2, 1), 1}}));
  CHECK(s.amps == expect.amps);
  auto r = symm(wires, {{"C", ket(2, 1), 1}, {"A", ket(2, 1), 1}, {"B", ket(2, 0), 1}, {"C", ket(2, 1), 1},
                        {"A", ket(2, 0), 1}});
  CHECK(r.amps == s.amps);

  Rng rng(8);
  std::vector<RawMessage> raw;
  for (int k = 0; k < 3; ++k) raw.push_back({"A", random_state(rng, 2), 1 + k % 2});
  raw.push_back({"B", random_state(rng, 2), 1});
  auto base = symm(wires, raw);
  std::vector<RawMessage> shuffled = raw;
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(symm(wires, shuffled).amps == base.amps);
  }

  FockWire single{"A", 2, 3};
  Vec psi = random_state(rng, 2);
  CHECK(symm({single}, {{"A", psi, 4}}).amps == symmetric_product(single, {{psi, 4}}).amps);
  CHECK_THROWS_AS(symm(wires, {{"Z", psi, 1}}), Error);
  CHECK_THROWS_AS(symm({{"A", 2, 1}}, {{"A", psi, 1}, {"A", psi, 1}}), Error);
}

TEST_CASE("Fock basis coordinates are orthonormal") {
  Rng rng(2);
  FockWire w{"A", 2, 3};
  auto basis = FockBasis::build({w}, {{1, 2}});
  CHECK(basis.dim() == 35);  // multisets of size <= 3 over 4 modes
  auto s = add(symmetric_product(w, random_msgs(rng, 2, 2, {1, 2})), symmetric_product(w, random_msgs(rng, 3, 2, {1, 2})));
  Vec v = basis.coordinates(s);
  CHECK(std::abs(v.squaredNorm() - fock_inner(s, s).real()) <= 1e-12);
  auto back = basis.state(v);
  CHECK(std::abs(fock_inner(add(back, s, -1.0), add(back, s, -1.0))) <= 1e-24);
}

TEST_CASE("second quantisation matches the symmetric product of images") {
  Rng rng(3);
  auto in = FockSlice::make("X", 1, 3, {{"a", 2, 1}, {"b", 1, 1}});
  auto out = FockSlice::make("Y", 2, 3, {{"c", 2, 2}});
  Mat w = ginibre(rng, 4, 3);
  Mat m = second_quantize(w, in, out);
  FockWire wi{"W", 3, 3}, wo{"W", 4, 3};
  auto bi = FockBasis::build({wi}, {{1}}), bo = FockBasis::build({wo}, {{2}});
  for (std::size_t c = 0; c < in.basis.size(); ++c) {
    std::vector<MessageState> images;
    for (const auto& msg : in.basis[c]) images.push_back({w.col(msg.payload), 2});
    auto img = symmetric_product(wo, images).scaled(1.0 / std::sqrt(occupation_weight(in.basis[c])));
    Vec expect = bo.coordinates(img);
    CHECK((m.col(static_cast<Eigen::Index>(c)) - expect).norm() <= 1e-12);
  }
  (void)bi;

  auto same = FockSlice::make("Z", 4, 3, {{"c", 2, 2}});
  Mat u = haar_unitary(rng, 4);
  Mat mu = second_quantize(u, out, same);
  CHECK(isometry_deviation(mu) <= 1e-12);
  CHECK(max_abs(second_quantize(Mat::Identity(4, 4), out, same) - Mat::Identity(35, 35)) <= 1e-15);
  CHECK_THROWS_AS(second_quantize(u, in, same), Error);
}

TEST_CASE("effective projector") {
  AgentTiming a{"A", 2, 2, {2}, {{2, 3}}};
  AgentTiming b{"B", 2, 2, {2, 4}, {{2, 3}, {4, 5}}};
  EffectiveSubspace sub{{a}, 1};
  auto p = effective_projector(sub);
  auto basis = effective_basis(sub);
  // input vacuum, output message
  auto bad = basis.index({{}, {{3, 1}}});
  CHECK(p.m(static_cast<Eigen::Index>(bad), static_cast<Eigen::Index>(bad)) == cplx(0.0));
  auto good = basis.index({{{2, 1}}, {{3, 0}}});
  CHECK(p.m(static_cast<Eigen::Index>(good), static_cast<Eigen::Index>(good)) == cplx(1.0));
  auto absorbed = basis.index({{{2, 1}}, {}});
  CHECK(p.m(static_cast<Eigen::Index>(absorbed), static_cast<Eigen::Index>(absorbed)) == cplx(1.0));

  EffectiveSubspace two{{b}, 2};
  auto p2 = effective_projector(two);
  auto b2 = effective_basis(two);
  CHECK(max_abs(p2.m * p2.m - p2.m) <= 1e-12);
  CHECK(max_abs(p2.m - p2.m.adjoint()) == 0.0);
  // input at 2 with output at 5 breaks O
  auto wrong = b2.index({{{2, 0}}, {{5, 0}}});
  CHECK(p2.m(static_cast<Eigen::Index>(wrong), static_cast<Eigen::Index>(wrong)) == cplx(0.0));
  auto twice = b2.index({{{2, 0}, {4, 0}}, {}});
  CHECK(p2.m(static_cast<Eigen::Index>(twice), static_cast<Eigen::Index>(twice)) == cplx(0.0));
  // rank: vacuum + 2 times x 2 inputs x (1 + 2 outputs)
  CHECK(std::abs(p2.m.trace() - 13.0) <= 1e-12);

  Rng rng(4);
  Vec v = random_state(rng, static_cast<Eigen::Index>(p2.in_sig.dim()));
  Vec pv = p2.m * v;
  CHECK((p2.m * pv - pv).norm() <= 1e-12);

  EffectiveSubspace ab{{a, b}, 1}, ba{{b, a}, 1};
  auto pab = effective_projector(ab), pba = effective_projector(ba);
  CHECK(max_abs(pba.permuted_square(pab.in_sig.names()).m - pab.m) == 0.0);

  AgentTiming broken{"C", 2, 2, {2}, {{2, 2}}};
  CHECK_THROWS_AS(effective_projector({{broken}, 1}), Error);
}

TEST_CASE("wire splitting is a unitary isomorphism") {
  Rng rng(6);
  FockWire w{"A", 3, 3};
  auto random_state_on = [&](const FockWire& wire, const std::vector<int>& ts) {
    FockState s = FockState::vacuum({wire}, 0.4);
    for (int n = 1; n <= 3; ++n) s = add(s, symmetric_product(wire, random_msgs(rng, n, wire.dim, ts)));
    return s;
  };

  WireSplit bypos{WireSplit::Kind::positions, "A", "A1", "A2", 0, {2}};
  auto s = random_state_on(w, {1, 2});
  auto split = split_wire(s, bypos);
  CHECK(split.wires.size() == 2);
  CHECK(merge_wire(split, bypos).amps == s.amps);

  WireSplit bypay{WireSplit::Kind::payload, "A", "B", "C", 1, {}};
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_state_on(w, {1, 2}), y = random_state_on(w, {1, 2});
    auto sx = split_wire(x, bypay), sy = split_wire(y, bypay);
    CHECK(std::abs(fock_inner(sx, sy) - fock_inner(x, y)) <= 1e-12);
    CHECK(merge_wire(sx, bypay).amps == x.amps);
  }

  auto vac = split_wire(FockState::vacuum({w}), bypay);
  CHECK(vac.amps.size() == 1);
  CHECK(vac.amps.begin()->first == std::vector<Occupation>{{}, {}});

  CHECK_THROWS_AS(split_wire(s, {WireSplit::Kind::payload, "A", "B", "C", 3, {}}), Error);
  CHECK_THROWS_AS(split_wire(s, {WireSplit::Kind::payload, "Q", "B", "C", 1, {}}), Error);
  CHECK_THROWS_AS(split_wire(s, {WireSplit::Kind::positions, "A", "B", "C", 0, {}}), Error);
}

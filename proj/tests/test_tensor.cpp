#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icausal/random.hpp"
#include "icausal/tensor.hpp"

using namespace icausal;

namespace {

Signature sig1(const std::string& n, int d) { return Signature({{n, d, WireKind::system}}); }

LabeledVector random_vec(Rng& rng, const Signature& s) {
  return LabeledVector::from_dense(s, random_state(rng, static_cast<Eigen::Index>(s.dim())));
}

}  // namespace

TEST_CASE("signature indexing is row major") {
  Signature s({{"X", 2, WireKind::system}, {"Y", 3, WireKind::system}});
  CHECK(s.dim() == 6);
  CHECK(s.ravel({1, 2}) == 5);
  CHECK(s.unravel(4) == std::vector<int>{1, 1});
  CHECK(Signature().dim() == 1);
  CHECK_THROWS_AS(Signature({{"X", 2, WireKind::system}, {"X", 2, WireKind::system}}), Error);
}

TEST_CASE("tensor product of basis states") {
  auto a = LabeledVector::basis(sig1("X", 2), {0});
  auto b = LabeledVector::basis(sig1("Y", 2), {1});
  auto c = tensor_product(a, b);
  CHECK(c.amps.size() == 1);
  CHECK(c.amps.at(c.sig.ravel({0, 1})) == cplx(1.0));
  CHECK_THROWS_AS(tensor_product(a, a), Error);
}

TEST_CASE("identity tensor identity") {
  auto i2 = LabeledOperator::identity(sig1("X", 2), sig1("X", 2));
  auto i3 = LabeledOperator::identity(sig1("Y", 3), sig1("Y", 3));
  auto k = tensor_product(i2, i3);
  CHECK(max_abs(k.m - Mat::Identity(6, 6)) == 0.0);
}

TEST_CASE("trivial wire is neutral") {
  LabeledVector v(sig1("X", 2));
  v.amps[0] = cplx(0.6, 0.0);
  v.amps[1] = cplx(0.0, 0.8);
  auto t = tensor_product(v, LabeledVector::basis(sig1("T", 1), {0}));
  CHECK(t.sig.dim() == 2);
  CHECK(t.amps.at(0) == v.amps.at(0));
  CHECK(t.amps.at(1) == v.amps.at(1));
}

TEST_CASE("permute wires") {
  auto a = tensor_product(LabeledVector::basis(sig1("X", 2), {0}), LabeledVector::basis(sig1("Y", 2), {1}));
  auto p = permute_wires(a, {"Y", "X"});
  CHECK(p.sig.names() == std::vector<std::string>{"Y", "X"});
  CHECK(p.amps.at(p.sig.ravel({1, 0})) == cplx(1.0));
  auto same = permute_wires(a, {"X", "Y"});
  CHECK(same.amps == a.amps);

  Rng rng(7);
  Signature s({{"A", 2, WireKind::system}, {"B", 3, WireKind::system}, {"C", 4, WireKind::system}});
  auto v = random_vec(rng, s);
  auto back = permute_wires(permute_wires(v, {"C", "A", "B"}), {"A", "B", "C"});
  CHECK(back.amps == v.amps);
  CHECK_THROWS_AS(permute_wires(v, {"A", "B", "Z"}), Error);
}

TEST_CASE("inner product") {
  auto z = LabeledVector::basis(sig1("X", 2), {0});
  auto o = LabeledVector::basis(sig1("X", 2), {1});
  CHECK(inner(z, z) == cplx(1.0));
  CHECK(inner(z, o) == cplx(0.0));
  Rng rng(11);
  Signature s({{"A", 3, WireKind::system}, {"B", 2, WireKind::system}});
  auto v = random_vec(rng, s);
  cplx oracle = 0.0;
  for (const auto& [i, a] : v.amps) oracle += std::conj(a) * a;
  CHECK(std::abs(inner(v, v) - oracle) <= 1e-12);
  CHECK(std::abs(inner(v, v) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(inner(v, z), Error);
}

TEST_CASE("inner product is conjugate symmetric and permutation invariant") {
  Rng rng(3);
  Signature s({{"A", 2, WireKind::system}, {"B", 3, WireKind::system}, {"C", 2, WireKind::system}});
  for (int t = 0; t < 20; ++t) {
    auto a = random_vec(rng, s), b = random_vec(rng, s);
    CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) <= 1e-14);
    auto pa = permute_wires(a, {"B", "C", "A"});
    auto pb = permute_wires(b, {"C", "A", "B"});
    CHECK(std::abs(inner(pa, pb) - inner(a, b)) <= 1e-14);
  }
}

TEST_CASE("partial trace") {
  Rng rng(5);
  Mat rho = random_density(rng, 2), sigma = random_density(rng, 3) * 0.7;
  LabeledOperator r = LabeledOperator::square(sig1("X", 2), rho);
  LabeledOperator s = LabeledOperator::square(sig1("Y", 3), sigma);
  auto pt = partial_trace(tensor_product(r, s), {"Y"});
  CHECK(max_abs(pt.m - sigma.trace() * rho) <= 1e-12);

  Signature xy({{"X", 2, WireKind::system}, {"Y", 2, WireKind::system}});
  auto id4 = LabeledOperator::identity(xy, xy);
  CHECK(max_abs(partial_trace(id4, {"X"}).m - 2.0 * Mat::Identity(2, 2)) == 0.0);

  Mat big = random_density(rng, 4);
  auto op = LabeledOperator::square(xy, big);
  auto tb = partial_trace(op, {"Y"});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cplx acc = big(i * 2 + 0, j * 2 + 0) + big(i * 2 + 1, j * 2 + 1);
      CHECK(std::abs(tb.m(i, j) - acc) <= 1e-12);
    }
  auto ta = partial_trace(op, {"X"});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cplx acc = big(0 * 2 + i, 0 * 2 + j) + big(1 * 2 + i, 1 * 2 + j);
      CHECK(std::abs(ta.m(i, j) - acc) <= 1e-12);
    }
  CHECK(std::abs(trace(tb) - trace(op)) <= 1e-12);
  CHECK_THROWS_AS(partial_trace(op, {"Z"}), Error);
  LabeledOperator rect(sig1("X", 2), sig1("Y", 2), Mat::Identity(2, 2));
  CHECK_THROWS_AS(partial_trace(rect, {"X"}), Error);
}

TEST_CASE("is_isometry examples") {
  CHECK(is_isometry(LabeledOperator::identity(sig1("X", 3), sig1("X", 3))));
  Mat col = Mat::Constant(3, 1, 1.0 / std::sqrt(3.0));
  CHECK(is_isometry(LabeledOperator(sig1("X", 1), sig1("Y", 3), col)));
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 0.5;
  CHECK_FALSE(is_isometry(LabeledOperator(sig1("X", 2), sig1("Y", 2), d)));
}

TEST_CASE("isometries preserve inner products") {
  Rng rng(21);
  const double tol = 1e-9;
  LabeledOperator v(sig1("X", 3), sig1("Y", 5), haar_isometry(rng, 5, 3));
  REQUIRE(is_isometry(v, tol));
  for (int t = 0; t < 50; ++t) {
    auto a = random_vec(rng, v.in_sig), b = random_vec(rng, v.in_sig);
    CHECK(std::abs(inner(apply(v, a), apply(v, b)) - inner(a, b)) <= 10 * tol);
  }
}

TEST_CASE("apply keeps spectators and compose matches matrix product") {
  Rng rng(2);
  Signature xy({{"X", 2, WireKind::system}, {"Y", 3, WireKind::system}});
  auto v = random_vec(rng, xy);
  LabeledOperator u(sig1("Y", 3), sig1("Z", 2), ginibre(rng, 2, 3));
  auto w = apply(u, v);
  CHECK(w.sig.names() == std::vector<std::string>{"X", "Z"});
  Vec dv = v.to_dense(), dw = w.to_dense();
  for (int x = 0; x < 2; ++x) {
    Vec part = u.m * dv.segment(x * 3, 3);
    CHECK((dw.segment(x * 2, 2) - part).norm() <= 1e-12);
  }
  LabeledOperator a(sig1("X", 2), sig1("Y", 3), ginibre(rng, 3, 2));
  auto c = compose(u, a);
  CHECK(max_abs(c.m - u.m * a.m) <= 1e-12);
}

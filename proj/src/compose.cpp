#include "icausal/pbox.hpp"
#include "icausal/procmat.hpp"

namespace icausal {

LabeledVector compose_boxes(const std::vector<LabeledVector>& parts) {
  if (parts.empty()) throw Error(ErrorKind::BadSpec, "nothing to compose");
  LabeledVector v = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) v = link_vectors(v, parts[i]);
  return v;
}

namespace {

Wire qubit(const std::string& n) { return {n, 2, WireKind::system}; }
Wire slot(const std::string& n, int t) { return {n + "@" + std::to_string(t), 3, WireKind::system}; }

Mat pauli_x() {
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

LabeledOperator identity_choi(const std::string& a, const std::string& b) {
  return outer(choi_vector_of(LabeledOperator::identity(Signature({qubit(a)}), Signature({qubit(b)}))).vec);
}

LabeledOperator id_on(const Wire& w) {
  return LabeledOperator::square(Signature({w}), Mat::Identity(w.dim, w.dim));
}

Mat ket0_density() {
  Mat r = Mat::Zero(2, 2);
  r(0, 0) = 1.0;
  return r;
}

// vacuum plus one qubit message
Mat lift1(const Mat& a) {
  Mat r = Mat::Zero(a.rows() + 1, a.cols() + 1);
  r(0, 0) = 1.0;
  r.block(1, 1, a.rows(), a.cols()) = a;
  return r;
}

// two single-message ports: first -> out1 via a, second -> out2 via b, plus a
// record wire that is 1 when any port carried a message
LabeledVector two_port(const Wire& in1, const Wire& in2, const Wire& out1, const Wire& out2, const std::string& rec,
                       const Mat& a, const Mat& b) {
  Signature in({in1, in2});
  Signature out({out1, out2, {rec, 2, WireKind::control}});
  Mat la = lift1(a), lb = lift1(b);
  Mat m = Mat::Zero(static_cast<Eigen::Index>(out.dim()), static_cast<Eigen::Index>(in.dim()));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int i2 = 0; i2 < 3; ++i2)
        for (int j2 = 0; j2 < 3; ++j2) {
          cplx v = la(i2, i) * lb(j2, j);
          if (v == cplx(0.0)) continue;
          m(static_cast<Eigen::Index>(out.ravel({i2, j2, (i > 0 || j > 0) ? 1 : 0})), static_cast<Eigen::Index>(in.ravel({i, j}))) = v;
        }
  return choi_vector_of(LabeledOperator(in, out, m)).vec;
}

// forwarder of one wire process at time s: loop -> next input, other -> junk
LabeledVector forwarder(const Wire& loop_in, const Wire& loop_out, const Wire& other_in, const Wire& junk,
                        bool vacuum_only) {
  Mat fw = Mat::Identity(3, 3);
  if (vacuum_only) fw(1, 1) = fw(2, 2) = 0.0;
  auto a = LabeledOperator(Signature({loop_in}), Signature({loop_out}), fw);
  auto b = LabeledOperator(Signature({other_in}), Signature({junk}), Mat::Identity(3, 3));
  return choi_vector_of(tensor_product(a, b)).vec;
}

LabeledVector slot_state(const Wire& w, int digit) { return LabeledVector::basis(Signature({w}), {digit}); }

double non_vacuum_weight(const LabeledVector& v, const std::vector<std::string>& wires) {
  std::vector<int> pos;
  for (const auto& w : wires)
    if (v.sig.has(w)) pos.push_back(v.sig.find(w));
  double s = 0.0;
  for (const auto& [idx, a] : v.amps) {
    auto dg = v.sig.unravel(idx);
    for (int p : pos)
      if (dg[static_cast<std::size_t>(p)] != 0) {
        s += std::norm(a);
        break;
      }
  }
  return s;
}

}  // namespace

CompositionReport loop_process_matrices() {
  const Mat rho = ket0_density();
  auto w = tensor_product(tensor_product(LabeledOperator::square(Signature({qubit("A.I")}), rho), identity_choi("A.O", "B.I")),
                          id_on(qubit("B.O")));
  auto wp = tensor_product(
      tensor_product(LabeledOperator::square(Signature({qubit("Bp.I")}), rho), identity_choi("Bp.O", "Ap.I")),
      id_on(qubit("Ap.O")));
  auto alice = tensor_product(
      outer(choi_vector_of(LabeledOperator(Signature({qubit("Ap.I")}), Signature({qubit("A.O")}), pauli_x())).vec),
      identity_choi("A.I", "Ap.O"));
  auto bob = tensor_product(identity_choi("B.I", "Bp.O"), identity_choi("Bp.I", "B.O"));
  auto total = link_matrices(link_matrices(link_matrices(w, wp), alice), bob);
  CompositionReport r;
  r.mode = "process-matrix";
  r.born = total.m(0, 0).real();
  r.total_probability = r.born;
  return r;
}

CompositionReport loop_causal_boxes(int horizon) {
  if (horizon < 3) throw Error(ErrorKind::BadSpec, "horizon must reach the first agent outputs");
  CompositionReport r;
  r.mode = "causal-box";
  const Mat id = Mat::Identity(2, 2), x = pauli_x();

  // W prepares |0> for Alice at t = 2, W' prepares |0> for Bob; the loop ports start empty
  LabeledVector v = compose_boxes({slot_state(slot("A.I", 2), 1), slot_state(slot("Bp.I", 2), 1),
                                   slot_state(slot("Ap.I", 2), 0), slot_state(slot("B.I", 2), 0)});
  LabeledVector restricted = v;
  std::vector<std::string> recs_a, recs_b, in_flight;
  for (int t = 2; t + 1 <= horizon; t += 2) {
    const std::string ra = "rec:Alice@" + std::to_string(t), rb = "rec:Bob@" + std::to_string(t);
    if (t > 2) {
      // W and W' only feed A and B' once
      auto idle = compose_boxes({slot_state(slot("A.I", t), 0), slot_state(slot("Bp.I", t), 0)});
      v = tensor_product(v, idle);
      restricted = tensor_product(restricted, idle);
    }
    auto alice = two_port(slot("A.I", t), slot("Ap.I", t), slot("Ap.O", t + 1), slot("A.O", t + 1), ra, id, x);
    auto bob = two_port(slot("B.I", t), slot("Bp.I", t), slot("Bp.O", t + 1), slot("B.O", t + 1), rb, id, id);
    v = link_vectors(link_vectors(v, alice), bob);
    restricted = link_vectors(link_vectors(restricted, alice), bob);
    recs_a.push_back(ra);
    recs_b.push_back(rb);

    const int s = t + 1;
    const std::vector<std::string> loop_wires{slot("A.O", s).name, slot("Bp.O", s).name};
    r.loop_activity = std::max(r.loop_activity, std::sqrt(non_vacuum_weight(v, loop_wires)));
    auto w = forwarder(slot("A.O", s), slot("B.I", s + 1), slot("B.O", s), slot("W.J", s), false);
    auto wp = forwarder(slot("Bp.O", s), slot("Ap.I", s + 1), slot("Ap.O", s), slot("Wp.J", s), false);
    auto w0 = forwarder(slot("A.O", s), slot("B.I", s + 1), slot("B.O", s), slot("W.J", s), true);
    auto wp0 = forwarder(slot("Bp.O", s), slot("Ap.I", s + 1), slot("Ap.O", s), slot("Wp.J", s), true);
    v = link_vectors(link_vectors(v, w), wp);
    restricted = link_vectors(link_vectors(restricted, w0), wp0);
    const std::vector<std::string> fed{slot("B.I", s + 1).name, slot("Ap.I", s + 1).name};
    r.loop_activity = std::max(r.loop_activity, std::sqrt(non_vacuum_weight(v, fed)));
    if (s + 1 + 1 > horizon) in_flight = fed;
  }
  r.loop_activity = std::max(r.loop_activity, max_diff(v, restricted));
  r.total_probability = v.norm() * v.norm();
  r.in_flight = non_vacuum_weight(v, in_flight);

  for (const auto* recs : {&recs_a, &recs_b}) {
    std::vector<int> pos;
    for (const auto& w : *recs) pos.push_back(v.sig.find(w));
    double once = 0.0;
    for (const auto& [idx, a] : v.amps) {
      auto dg = v.sig.unravel(idx);
      int count = 0;
      for (int p : pos) count += dg[static_cast<std::size_t>(p)];
      if (count == 1) once += std::norm(a);
      if (count > 1 && std::norm(a) > 0.0) r.wsr = false;
    }
    r.single_delivery.push_back(once);
  }
  return r;
}

}  // namespace icausal

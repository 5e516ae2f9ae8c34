#include "icausal/choi.hpp"

#include <unordered_map>

namespace icausal {

double ChoiMatrix::min_eigenvalue() const {
  Mat h = (mat.m + mat.m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ChoiVector choi_vector_of(const LabeledOperator& op) {
  for (const auto& w : op.out_sig.wires())
    if (op.in_sig.has(w.name)) throw Error(ErrorKind::DuplicateWire, w.name);
  Signature s = op.in_sig.concat(op.out_sig);
  LabeledVector v(s);
  const std::uint64_t dout = op.out_sig.dim();
  for (Eigen::Index i = 0; i < op.m.cols(); ++i)
    for (Eigen::Index j = 0; j < op.m.rows(); ++j) {
      cplx a = op.m(j, i);
      if (a != cplx(0.0)) v.amps[static_cast<std::uint64_t>(i) * dout + static_cast<std::uint64_t>(j)] = a;
    }
  return {std::move(v), op.in_sig, op.out_sig};
}

LabeledOperator operator_of(const ChoiVector& c) {
  LabeledVector v = permute_wires(c.vec, c.in_sig.concat(c.out_sig).names());
  const std::uint64_t dout = c.out_sig.dim();
  Mat m = Mat::Zero(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(c.in_sig.dim()));
  for (const auto& [idx, a] : v.amps)
    m(static_cast<Eigen::Index>(idx % dout), static_cast<Eigen::Index>(idx / dout)) = a;
  return {c.in_sig, c.out_sig, std::move(m)};
}

LabeledOperator outer(const LabeledVector& v) {
  Vec d = v.to_dense();
  return {v.sig, v.sig, d * d.adjoint()};
}

ChoiMatrix choi_matrix_of(const std::vector<LabeledOperator>& kraus) {
  if (kraus.empty()) throw Error(ErrorKind::SignatureMismatch, "empty Kraus list");
  const auto& k0 = kraus.front();
  Signature s = k0.in_sig.concat(k0.out_sig);
  auto d = static_cast<Eigen::Index>(s.dim());
  Mat acc = Mat::Zero(d, d);
  for (const auto& k : kraus) {
    if (!(k.in_sig == k0.in_sig) || !(k.out_sig == k0.out_sig))
      throw Error(ErrorKind::SignatureMismatch, "Kraus operators differ in signature");
    Vec v = choi_vector_of(k).vec.to_dense();
    acc += v * v.adjoint();
  }
  return {{s, s, std::move(acc)}, k0.in_sig, k0.out_sig};
}

namespace {

struct Split {
  Signature free_a, shared, free_b;
};

Split split_wires(const Signature& a, const Signature& b) {
  std::vector<Wire> fa, sh, fb;
  for (const auto& w : a.wires()) {
    int j = b.find(w.name);
    if (j < 0) {
      fa.push_back(w);
    } else {
      if (b.wires()[static_cast<std::size_t>(j)].dim != w.dim)
        throw Error(ErrorKind::DimMismatch, "shared wire '" + w.name + "'");
      sh.push_back(w);
    }
  }
  for (const auto& w : b.wires())
    if (!a.has(w.name)) fb.push_back(w);
  return {Signature(fa), Signature(sh), Signature(fb)};
}

}  // namespace

LabeledVector link_vectors(const LabeledVector& a, const LabeledVector& b) {
  Split sp = split_wires(a.sig, b.sig);
  LabeledVector aa = permute_wires(a, sp.free_a.concat(sp.shared).names());
  LabeledVector bb = permute_wires(b, sp.shared.concat(sp.free_b).names());
  const std::uint64_t ds = sp.shared.dim(), dfb = sp.free_b.dim();
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, cplx>>> by_shared;
  for (const auto& [idx, x] : bb.amps) by_shared[idx / dfb].emplace_back(idx % dfb, x);
  LabeledVector r(sp.free_a.concat(sp.free_b));
  for (const auto& [idx, x] : aa.amps) {
    auto it = by_shared.find(idx % ds);
    if (it == by_shared.end()) continue;
    const std::uint64_t base = (idx / ds) * dfb;
    for (const auto& [y, v] : it->second) r.amps[base + y] += x * v;
  }
  return r;
}

LabeledOperator link_matrices(const LabeledOperator& a, const LabeledOperator& b) {
  if (!a.in_sig.same_set(a.out_sig) || !b.in_sig.same_set(b.out_sig))
    throw Error(ErrorKind::NonSquare, "link product needs square operators");
  Split sp = split_wires(a.in_sig, b.in_sig);
  auto oa = sp.free_a.concat(sp.shared).names();
  auto ob = sp.shared.concat(sp.free_b).names();
  LabeledOperator A = a.permuted_square(oa);
  LabeledOperator B = b.permuted_square(ob);
  const auto dx = static_cast<Eigen::Index>(sp.free_a.dim());
  const auto ds = static_cast<Eigen::Index>(sp.shared.dim());
  const auto dz = static_cast<Eigen::Index>(sp.free_b.dim());
  // R[(x,z),(x',z')] = sum_{s,s'} A[(x,s),(x',s')] B[(s,z),(s',z')]
  Mat ar(dx * dx, ds * ds), br(ds * ds, dz * dz);
  for (Eigen::Index x = 0; x < dx; ++x)
    for (Eigen::Index xp = 0; xp < dx; ++xp)
      for (Eigen::Index s = 0; s < ds; ++s)
        for (Eigen::Index sp2 = 0; sp2 < ds; ++sp2)
          ar(x * dx + xp, s * ds + sp2) = A.m(x * ds + s, xp * ds + sp2);
  for (Eigen::Index s = 0; s < ds; ++s)
    for (Eigen::Index sp2 = 0; sp2 < ds; ++sp2)
      for (Eigen::Index z = 0; z < dz; ++z)
        for (Eigen::Index zp = 0; zp < dz; ++zp)
          br(s * ds + sp2, z * dz + zp) = B.m(s * dz + z, sp2 * dz + zp);
  Mat pr = ar * br;
  Mat r(dx * dz, dx * dz);
  for (Eigen::Index x = 0; x < dx; ++x)
    for (Eigen::Index xp = 0; xp < dx; ++xp)
      for (Eigen::Index z = 0; z < dz; ++z)
        for (Eigen::Index zp = 0; zp < dz; ++zp) r(x * dz + z, xp * dz + zp) = pr(x * dx + xp, z * dz + zp);
  Signature out = sp.free_a.concat(sp.free_b);
  return {out, out, std::move(r)};
}

LabeledOperator apply_choi(const ChoiMatrix& c, const LabeledOperator& rho) {
  if (!rho.in_sig.same_set(c.in_sig) || !rho.out_sig.same_set(c.in_sig))
    throw Error(ErrorKind::SignatureMismatch, "state does not live on the channel input");
  return link_matrices(rho, c.mat);
}

}  // namespace icausal

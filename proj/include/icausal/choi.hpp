#pragma once

#include <vector>

#include "icausal/tensor.hpp"

namespace icausal {

// |V>> with input wires first, so the amplitude at (i, j) is <j|V|i>.
struct ChoiVector {
  LabeledVector vec;
  Signature in_sig;
  Signature out_sig;
};

// Square operator over in_sig + out_sig.
struct ChoiMatrix {
  LabeledOperator mat;
  Signature in_sig;
  Signature out_sig;

  double min_eigenvalue() const;
};

ChoiVector choi_vector_of(const LabeledOperator& op);
LabeledOperator operator_of(const ChoiVector& c);
ChoiMatrix choi_matrix_of(const std::vector<LabeledOperator>& kraus);

// outer product |v><v| as a square operator on v.sig
LabeledOperator outer(const LabeledVector& v);

// Sum over the shared wires of a[x,s] b[y,s]; result wires are a's free
// wires followed by b's free wires.
LabeledVector link_vectors(const LabeledVector& a, const LabeledVector& b);
inline LabeledVector link_vectors(const ChoiVector& a, const ChoiVector& b) {
  return link_vectors(a.vec, b.vec);
}

// Tr_Y((A^{T_Y} (x) 1)(1 (x) B)) for square operators sharing wires Y.
LabeledOperator link_matrices(const LabeledOperator& a, const LabeledOperator& b);
inline LabeledOperator link_matrices(const ChoiMatrix& a, const ChoiMatrix& b) {
  return link_matrices(a.mat, b.mat);
}

LabeledOperator apply_choi(const ChoiMatrix& c, const LabeledOperator& rho);

}  // namespace icausal

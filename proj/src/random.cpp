#include "icausal/random.hpp"

namespace icausal {

Mat ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = n(rng);
      double im = n(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

Vec random_state(Rng& rng, Eigen::Index d) {
  Vec v = ginibre(rng, d, 1).col(0);
  return v / v.norm();
}

Mat haar_unitary(Rng& rng, Eigen::Index d) {
  Mat g = ginibre(rng, d, d);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    cplx x = r(i, i);
    double a = std::abs(x);
    if (a > 0) q.col(i) *= x / a;
  }
  return q;
}

Mat haar_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  if (cols > rows) throw Error(ErrorKind::DimMismatch, "isometry needs rows >= cols");
  return haar_unitary(rng, rows).leftCols(cols);
}

Mat random_density(Rng& rng, Eigen::Index d) {
  Mat g = ginibre(rng, d, d);
  Mat r = g * g.adjoint();
  return r / r.trace();
}

Mat random_hermitian(Rng& rng, Eigen::Index d) {
  Mat g = ginibre(rng, d, d);
  return (g + g.adjoint()) / 2.0;
}

std::vector<Mat> random_kraus(Rng& rng, Eigen::Index d_in, Eigen::Index d_out, Eigen::Index rank) {
  Mat v = haar_isometry(rng, d_out * rank, d_in);
  std::vector<Mat> ks;
  for (Eigen::Index r = 0; r < rank; ++r) {
    Mat k(d_out, d_in);
    for (Eigen::Index i = 0; i < d_out; ++i) k.row(i) = v.row(i * rank + r);
    ks.push_back(k);
  }
  return ks;
}

std::vector<std::vector<Mat>> random_instrument(Rng& rng, Eigen::Index d_in, Eigen::Index d_out,
                                                int outcomes, Eigen::Index rank) {
  auto ks = random_kraus(rng, d_in, d_out, rank * outcomes);
  std::vector<std::vector<Mat>> r(static_cast<std::size_t>(outcomes));
  for (std::size_t i = 0; i < ks.size(); ++i) r[i % r.size()].push_back(ks[i]);
  return r;
}

Mat random_agent_kraus(Rng& rng, Eigen::Index d_in, Eigen::Index d_out, Eigen::Index env) {
  Mat v = haar_isometry(rng, d_out * env, d_in);
  Mat k(d_out, d_in);
  for (Eigen::Index i = 0; i < d_out; ++i) k.row(i) = v.row(i * env);
  return k;
}

}  // namespace icausal

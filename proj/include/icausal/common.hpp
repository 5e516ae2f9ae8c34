#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace icausal {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

enum class ErrorKind {
  DuplicateWire,
  UnknownWire,
  SignatureMismatch,
  NonSquare,
  DimMismatch,
  CapExceeded,
  BadSpec,
  NonMonotone,
  BadTimeMap,
  MissingBlock,
  AncillaMismatch,
  IncompleteInstrument,
  NotPure,
  NotIsometry,
  ParseError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// max-norm of a dense matrix, used for every "within tol" comparison
inline double max_abs(const Mat& m) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) r = std::max(r, std::abs(m(i, j)));
  return r;
}

}  // namespace icausal

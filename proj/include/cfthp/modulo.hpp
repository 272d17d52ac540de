// Modulo lattice operation and the THP successive feedback encoder.
#ifndef CFTHP_MODULO_HPP
#define CFTHP_MODULO_HPP

#include "cfthp/types.hpp"

#include <cmath>
#include <complex>

namespace cfthp {

/// Folds each of Re and Im into [-lambda/2, lambda/2).
template <typename T>
std::complex<T> modulo(const std::complex<T>& v, T lambda) {
  const T re = v.real() - std::floor(v.real() / lambda + T(0.5)) * lambda;
  const T im = v.imag() - std::floor(v.imag() / lambda + T(0.5)) * lambda;
  return {re, im};
}

/// Modulo base for a unit-variance constellation.
Real lambda_for(Modulation modulation);

template <typename T>
struct FeedbackOutput {
  Vector<std::complex<T>> s_brev;  // transmitted (pre-filter) symbols
  Vector<std::complex<T>> d;       // perturbation on the lambda lattice
};

/// s_brev[k] = M(s[k] - sum_{i<k} b(k, i) s_brev[i]).
///
/// `b` must be lower triangular with unit diagonal; only its strictly lower
/// part is read. On return B s_brev = s + d with d on lambda (Z + jZ).
template <typename DerivedS, typename DerivedB>
FeedbackOutput<typename DerivedS::RealScalar> feedback_encode(
    const Eigen::MatrixBase<DerivedS>& s, const Eigen::MatrixBase<DerivedB>& b,
    typename DerivedS::RealScalar lambda) {
  using T = typename DerivedS::RealScalar;
  using C = std::complex<T>;
  const Eigen::Index k = s.size();
  if (b.rows() != k || b.cols() != k) {
    throw std::invalid_argument("feedback_encode: B must be K x K");
  }
  FeedbackOutput<T> out;
  out.s_brev.resize(k);
  out.d.resize(k);
  for (Eigen::Index row = 0; row < k; ++row) {
    C acc = C(s(row));
    for (Eigen::Index i = 0; i < row; ++i) {
      acc -= C(b(row, i)) * out.s_brev(i);
    }
    out.s_brev(row) = modulo(acc, lambda);
    // s_brev = acc + d exactly up to rounding; d is the lattice shift
    const T shift_re = std::floor(acc.real() / lambda + T(0.5)) * lambda;
    const T shift_im = std::floor(acc.imag() / lambda + T(0.5)) * lambda;
    out.d(row) = C(-shift_re, -shift_im);
  }
  return out;
}

}  // namespace cfthp

#endif  // CFTHP_MODULO_HPP

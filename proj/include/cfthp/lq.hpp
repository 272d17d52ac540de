// LQ factorisation M = L Q of a wide matrix (rows <= cols) by Householder
// reflections applied from the right.
//
// L is lower triangular with a real nonnegative diagonal and Q has
// orthonormal rows. Columns of M that are identically zero stay identically
// zero in Q, which keeps precoders built from a sparse channel exactly sparse.
#ifndef CFTHP_LQ_HPP
#define CFTHP_LQ_HPP

#include "cfthp/types.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace cfthp {

template <typename Scalar>
struct LqFactors {
  Matrix<Scalar> l_mat;  // K x K
  Matrix<Scalar> q_mat;  // K x N
};

namespace detail {

template <typename T>
T unit_phase(const T& x) {
  return x < T(0) ? T(-1) : T(1);
}

template <typename T>
std::complex<T> unit_phase(const std::complex<T>& x) {
  const T mag = std::abs(x);
  return mag == T(0) ? std::complex<T>(1) : x / mag;
}

}  // namespace detail

template <typename Derived>
LqFactors<typename Derived::Scalar> lq_decompose(const Eigen::MatrixBase<Derived>& m,
                                                 typename Derived::RealScalar rel_tol = 1e-12) {
  using Scalar = typename Derived::Scalar;
  using RealScalar = typename Derived::RealScalar;
  using Mat = Matrix<Scalar>;
  using Vec = Vector<Scalar>;

  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (rows == 0 || rows > cols) {
    throw std::invalid_argument("lq_decompose: need 0 < rows <= cols, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }

  std::vector<Eigen::Index> active;
  active.reserve(static_cast<std::size_t>(cols));
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (!m.col(c).isZero(0)) active.push_back(c);
  }
  const RealScalar scale = m.norm();
  const auto n_active = static_cast<Eigen::Index>(active.size());
  if (n_active < rows) {
    throw SingularFactorization("lq_decompose: rank deficient at row " +
                                    std::to_string(n_active) + " (only " +
                                    std::to_string(n_active) + " nonzero columns)",
                                n_active);
  }

  Mat work(rows, n_active);
  for (Eigen::Index c = 0; c < n_active; ++c) {
    work.col(c) = m.col(active[static_cast<std::size_t>(c)]);
  }

  std::vector<Vec> reflectors;
  std::vector<RealScalar> taus;
  reflectors.reserve(static_cast<std::size_t>(rows));
  taus.reserve(static_cast<std::size_t>(rows));

  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index len = n_active - i;
    // y = (row i)^H restricted to the trailing block
    Vec v = work.row(i).tail(len).adjoint();
    const RealScalar norm_y = v.norm();
    RealScalar tau = 0;
    if (norm_y > RealScalar(0)) {
      const Scalar mu = -detail::unit_phase(v(0)) * norm_y;
      v(0) -= mu;
      const RealScalar vv = v.squaredNorm();
      tau = vv > RealScalar(0) ? RealScalar(2) / vv : RealScalar(0);
      if (tau != RealScalar(0)) {
        auto block = work.bottomRightCorner(rows - i, len);
        const Vec w = block * v;
        block.noalias() -= tau * w * v.adjoint();
      }
      // clean the annihilated part of the row exactly
      work.row(i).tail(len - 1).setZero();
    }
    reflectors.push_back(std::move(v));
    taus.push_back(tau);
  }

  Mat q_compact = Mat::Zero(rows, n_active);
  q_compact.leftCols(rows).setIdentity();
  for (Eigen::Index i = rows - 1; i >= 0; --i) {
    const RealScalar tau = taus[static_cast<std::size_t>(i)];
    if (tau == RealScalar(0)) continue;
    const Vec& v = reflectors[static_cast<std::size_t>(i)];
    auto block = q_compact.rightCols(n_active - i);
    const Vec w = block * v;
    block.noalias() -= tau * w * v.adjoint();
  }

  LqFactors<Scalar> out;
  out.l_mat = work.leftCols(rows).template triangularView<Eigen::Lower>();
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Scalar phase = detail::unit_phase(out.l_mat(i, i));
    out.l_mat.col(i) *= Eigen::numext::conj(phase);
    out.l_mat(i, i) = Scalar(std::abs(out.l_mat(i, i)));
    q_compact.row(i) *= phase;
    if (!(std::abs(out.l_mat(i, i)) > rel_tol * scale)) {
      throw SingularFactorization("lq_decompose: rank deficient at row " + std::to_string(i), i);
    }
  }

  out.q_mat = Mat::Zero(rows, cols);
  for (Eigen::Index c = 0; c < n_active; ++c) {
    out.q_mat.col(active[static_cast<std::size_t>(c)]) = q_compact.col(c);
  }
  return out;
}

}  // namespace cfthp

#endif  // CFTHP_LQ_HPP

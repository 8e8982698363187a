// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra used throughout the capacity computations.
// Everything here is templated on the real scalar type and accepts any Eigen
// expression; the rest of the library instantiates it with double.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "rfcap/errors.hpp"

namespace rfcap {

template <typename Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMat<double>;
using ComplexVector = CVec<double>;
using RealVector = RVec<double>;

/// Singular values at or below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-10;
/// Absolute (relative to max(1, max|m_ij|)) tolerance of the Hermitian check.
inline constexpr double kHermitianTolerance = 1e-9;

/// Thin SVD truncated to the numerical rank: m = U diag(sigma) V^H with
/// U: rows x rank, V: cols x rank, sigma descending and strictly positive.
template <typename Real>
struct SvdResult {
  CMat<Real> u;
  RVec<Real> singular_values;
  CMat<Real> v;
  Eigen::Index rank = 0;

  CMat<Real> reconstruct() const {
    return u * singular_values.template cast<std::complex<Real>>().asDiagonal() * v.adjoint();
  }
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.derived().array().isFinite().all();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::RealScalar tol = kHermitianTolerance) {
  using Real = typename Derived::RealScalar;
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const Real scale = std::max(Real(1), m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

template <typename Derived>
SvdResult<typename Derived::RealScalar> svd(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  using Matrix = CMat<Real>;
  if (m.rows() < 1 || m.cols() < 1) throw InvalidInput("svd: empty matrix");
  if (!all_finite(m)) throw InvalidInput("svd: non-finite entries");

  const Matrix a = m.template cast<std::complex<Real>>();
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = solver.singularValues();

  Eigen::Index rank = 0;
  const Real cutoff = Real(kRankTolerance) * (sigma.size() > 0 ? sigma(0) : Real(0));
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;

  SvdResult<Real> out;
  out.rank = rank;
  out.singular_values = sigma.head(rank);
  out.u = solver.matrixU().leftCols(rank);
  out.v = solver.matrixV().leftCols(rank);
  return out;
}

/// log2 det(m) for Hermitian positive definite m, via Cholesky.
template <typename Derived>
typename Derived::RealScalar logdet_hpd(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  using Matrix = CMat<Real>;
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidInput("logdet_hpd: matrix must be square and nonempty");
  if (!all_finite(m)) throw InvalidInput("logdet_hpd: non-finite entries");
  if (!is_hermitian(m)) throw DomainError("logdet_hpd: matrix is not Hermitian");

  const Matrix a = m.template cast<std::complex<Real>>();
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw DomainError("logdet_hpd: matrix is not positive definite");
  Real acc = 0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log2(std::real(l(i, i)));
  return Real(2) * acc;
}

/// Fills a dim x count matrix with i.i.d. CN(0, 1) entries: real and imaginary
/// parts each N(0, 1/2). Draw order is column-major, real before imaginary.
template <typename Real, typename Rng>
CMat<Real> standard_complex_normal(Eigen::Index dim, Eigen::Index count, Rng& rng) {
  std::normal_distribution<Real> normal(Real(0), std::sqrt(Real(0.5)));
  CMat<Real> z(dim, count);
  for (Eigen::Index c = 0; c < count; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      z(r, c) = {re, im};
    }
  return z;
}

/// Square-root factor A with A A^H = cov for a Hermitian PSD matrix.
template <typename Derived>
CMat<typename Derived::RealScalar> psd_sqrt(const Eigen::MatrixBase<Derived>& cov) {
  using Real = typename Derived::RealScalar;
  using Matrix = CMat<Real>;
  if (!all_finite(cov)) throw InvalidInput("psd_sqrt: non-finite entries");
  if (!is_hermitian(cov)) throw DomainError("psd_sqrt: covariance is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov.template cast<std::complex<Real>>());
  const auto& lambda = eig.eigenvalues();
  const Real scale = std::max(Real(1), lambda.cwiseAbs().maxCoeff());
  if (lambda.minCoeff() < -Real(kHermitianTolerance) * scale)
    throw DomainError("psd_sqrt: covariance is indefinite");
  const RVec<Real> root = lambda.cwiseMax(Real(0)).cwiseSqrt();
  return eig.eigenvectors() * root.template cast<std::complex<Real>>().asDiagonal();
}

/// Draws `count` circularly-symmetric complex Gaussian vectors CN(mean, cov),
/// one per column. Same seed, same output.
template <typename DerivedMean, typename DerivedCov>
CMat<typename DerivedCov::RealScalar> sample_complex_gaussian(
    const Eigen::MatrixBase<DerivedMean>& mean, const Eigen::MatrixBase<DerivedCov>& cov,
    Eigen::Index count, std::uint64_t seed) {
  using Real = typename DerivedCov::RealScalar;
  if (cov.rows() != cov.cols())
    throw InvalidInput("sample_complex_gaussian: covariance must be square");
  if (mean.cols() != 1 || mean.rows() != cov.rows()) {
    std::ostringstream msg;
    msg << "sample_complex_gaussian: mean has " << mean.rows() << "x" << mean.cols()
        << " entries, covariance is " << cov.rows() << "x" << cov.cols();
    throw InvalidInput(msg.str());
  }
  if (count < 0) throw InvalidInput("sample_complex_gaussian: negative count");

  const CMat<Real> factor = psd_sqrt(cov);
  std::mt19937_64 rng(seed);
  CMat<Real> out = factor * standard_complex_normal<Real>(cov.rows(), count, rng);
  out.colwise() += mean.template cast<std::complex<Real>>();
  return out;
}

}  // namespace rfcap

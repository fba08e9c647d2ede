#pragma once

#include <cmath>

#include "gkpca/types.hpp"

namespace gkpca {

/// Second-pass trigger for classical Gram-Schmidt: re-project when the first
/// pass removed more than 1/sqrt(2) of the vector's mass.
inline constexpr double kCgs2Eta = 0.70710678118654752440;

/// Orthogonalizes v in place against the columns of `basis` by classical
/// Gram-Schmidt, repeating the projection once more when cancellation is
/// detected (norm drop below kCgs2Eta). Accumulated coefficients basis^T v
/// are added into `coeffs` (sized basis.cols()). Returns ||v|| after
/// orthogonalization; v is NOT normalized. A near-zero return flags that v
/// was numerically inside span(basis).
template <typename BasisDerived, typename VecDerived, typename CoefDerived>
double cgs2(const Eigen::MatrixBase<BasisDerived>& basis,
            Eigen::MatrixBase<VecDerived>& v,
            Eigen::MatrixBase<CoefDerived>& coeffs) {
  const double norm_before = v.norm();
  if (basis.cols() == 0) return norm_before;
  coeffs.noalias() = basis.adjoint() * v;
  v.noalias() -= basis * coeffs;
  double norm_after = v.norm();
  if (norm_after < kCgs2Eta * norm_before) {
    Vec<typename CoefDerived::Scalar> second(basis.cols());
    second.noalias() = basis.adjoint() * v;
    v.noalias() -= basis * second;
    coeffs += second;
    norm_after = v.norm();
  }
  return norm_after;
}

/// cgs2 without coefficient capture.
template <typename BasisDerived, typename VecDerived>
double cgs2(const Eigen::MatrixBase<BasisDerived>& basis,
            Eigen::MatrixBase<VecDerived>& v) {
  Vec<typename VecDerived::Scalar> coeffs(basis.cols());
  return cgs2(basis, v, coeffs);
}

/// Thin QR with nonnegative R diagonal, so the factorization is unique for
/// full-rank input and iterates that differ only by column sign renormalize
/// identically.
struct ThinQr {
  Matrix Q;  // m x min(m,n), orthonormal columns
  Matrix R;  // min(m,n) x n, upper triangular, R(i,i) >= 0
};

ThinQr qr_thin(const Eigen::Ref<const Matrix>& M);

/// ||Q^T Q - I||_max, the worst entrywise orthonormality defect.
double orthonormality_error(const Eigen::Ref<const Matrix>& Q);

}  // namespace gkpca

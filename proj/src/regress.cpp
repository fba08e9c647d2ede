#include "gkpca/regress.hpp"

#include <cmath>
#include <limits>

#include "gkpca/orth.hpp"

namespace gkpca {

RegressionResult ols_fit(const Eigen::Ref<const Matrix>& X,
                         const Eigen::Ref<const Vector>& y, bool unbiased) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (y.size() != n)
    throw std::invalid_argument("ols_fit: y length does not match rows of X");
  if (p == 0 || n < p)
    throw std::invalid_argument("ols_fit: need 0 < cols <= rows");

  const ThinQr qr = qr_thin(X);
  // |R_ii| ~ 0 relative to the largest pivot flags column i as dependent.
  const double pivot_max = qr.R.diagonal().cwiseAbs().maxCoeff();
  const double tol =
      pivot_max * static_cast<double>(std::max(n, p)) *
      std::numeric_limits<double>::epsilon();
  for (Index i = 0; i < p; ++i) {
    if (std::abs(qr.R(i, i)) <= tol)
      throw RankDeficiencyError(
          i, "ols_fit: design column " + std::to_string(i) +
                 " is linearly dependent on earlier columns");
  }

  RegressionResult out;
  const Vector qty = qr.Q.transpose() * y;
  out.beta_hat = qr.R.triangularView<Eigen::Upper>().solve(qty);
  out.residuals = y - X * out.beta_hat;
  const double denom =
      unbiased ? static_cast<double>(n - p) : static_cast<double>(n);
  out.sigma2_hat = out.residuals.squaredNorm() / denom;
  // (X^T X)^{-1} = R^{-1} R^{-T} via two triangular solves.
  Matrix rinv = qr.R.triangularView<Eigen::Upper>().solve(
      Matrix::Identity(p, p));
  out.cov_beta = out.sigma2_hat * (rinv * rinv.transpose());
  return out;
}

PcAdjustedResult pc_adjusted_fit(const Eigen::Ref<const Matrix>& X,
                                 const Eigen::Ref<const Matrix>& Z,
                                 const Eigen::Ref<const Vector>& y,
                                 bool unbiased) {
  const Index n = X.rows();
  const Index p = X.cols();
  const Index k = Z.cols();
  if (Z.rows() != n)
    throw std::invalid_argument("pc_adjusted_fit: Z rows do not match X");
  Matrix design(n, p + k);
  design.leftCols(p) = X;
  design.rightCols(k) = Z;

  PcAdjustedResult out;
  out.joint = ols_fit(design, y, unbiased);
  out.beta_hat = out.joint.beta_hat.head(p);
  out.gamma_hat = out.joint.beta_hat.tail(k);
  out.cov_beta = out.joint.cov_beta.topLeftCorner(p, p);
  return out;
}

}  // namespace gkpca

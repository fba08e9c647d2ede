#pragma once

#include <stdexcept>
#include <string>

#include "gkpca/types.hpp"

namespace gkpca {

/// Raised when a design matrix column is (numerically) a linear combination
/// of earlier columns; `column` names the first offending index.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(Index column, const std::string& what)
      : std::runtime_error(what), column(column) {}

  Index column;
};

/// Ordinary least squares fit. sigma2_hat uses the 1/n convention by
/// default; `unbiased` switches to 1/(n - p).
struct RegressionResult {
  Vector beta_hat;
  double sigma2_hat = 0.0;
  Matrix cov_beta;   // sigma2_hat * (X^T X)^{-1}
  Vector residuals;  // y - X beta_hat
};

RegressionResult ols_fit(const Eigen::Ref<const Matrix>& X,
                         const Eigen::Ref<const Vector>& y,
                         bool unbiased = false);

/// Joint fit of y on [X Z], where Z holds sample-side principal components.
/// Coefficients come back split into the X block (beta) and the Z block
/// (gamma); cov_beta is the X-block of the joint covariance.
struct PcAdjustedResult {
  RegressionResult joint;  // coefficients ordered [beta; gamma]
  Vector beta_hat;
  Vector gamma_hat;
  Matrix cov_beta;
};

PcAdjustedResult pc_adjusted_fit(const Eigen::Ref<const Matrix>& X,
                                 const Eigen::Ref<const Matrix>& Z,
                                 const Eigen::Ref<const Vector>& y,
                                 bool unbiased = false);

}  // namespace gkpca

#include "gkpca/subspace.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gkpca/orth.hpp"
#include "gkpca/rng.hpp"
#include "gkpca/small_svd.hpp"

namespace gkpca {

double delta_criterion(const Eigen::Ref<const Matrix>& prev,
                       const Eigen::Ref<const Matrix>& curr, bool scaled) {
  if (prev.rows() != curr.rows() || prev.cols() != curr.cols())
    throw std::invalid_argument("delta_criterion: shape mismatch");
  const double raw = (curr - prev).norm();
  if (!scaled) return raw;
  return raw / std::sqrt(static_cast<double>(prev.rows()) *
                         static_cast<double>(prev.cols()));
}

BasisCondition basis_condition(const Eigen::Ref<const Matrix>& Y) {
  const SmallSvd svd = svd_small(Y);
  const double s_max = svd.singvals[0];
  const double s_min = svd.singvals[svd.singvals.size() - 1];
  BasisCondition out;
  out.inv_kappa = s_max > 0.0 ? s_min / s_max : 0.0;
  out.kappa = s_min > 0.0 ? s_max / s_min
                          : std::numeric_limits<double>::infinity();
  return out;
}

namespace {

void renormalize(Matrix& Y, SubspaceVariant variant) {
  if (variant == SubspaceVariant::kQr) {
    Y = qr_thin(Y).Q;
    return;
  }
  for (Index j = 0; j < Y.cols(); ++j) {
    const double nrm = Y.col(j).norm();
    if (nrm > 0.0) Y.col(j) /= nrm;
  }
}

}  // namespace

SubspaceResult subspace_iterate(const LinearOperator& op, Index k,
                                SubspaceVariant variant, double tol,
                                Index max_iter, std::uint64_t seed,
                                bool scaled_delta) {
  const Index m = op.rows();
  const Index n = op.cols();
  if (k <= 0 || k > std::min(m, n))
    throw std::invalid_argument("subspace_iterate: k out of range");
  if (max_iter < 0)
    throw std::invalid_argument("subspace_iterate: max_iter must be >= 0");

  MvpCounter counter;
  const CountingOperator X(op, counter);

  Rng rng(seed);
  Matrix Y(m, k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < m; ++i) Y(i, j) = rng.normal();
  Y = qr_thin(Y).Q;

  Vector tmp_n(n), tmp_m(m);
  auto gram_apply = [&](Matrix& Z) {
    // Z <- X X^T Z, column by column (2k products).
    for (Index j = 0; j < Z.cols(); ++j) {
      X.apply_adjoint(Z.col(j), tmp_n);
      X.apply(tmp_n, tmp_m);
      Z.col(j) = tmp_m;
    }
  };

  SubspaceResult out;
  // Iteration 0: initial range computation.
  gram_apply(Y);
  renormalize(Y, variant);
  out.state.invcond_history.push_back(basis_condition(Y).inv_kappa);

  for (Index it = 1; it <= max_iter; ++it) {
    const Matrix Y_prev = Y;
    gram_apply(Y);
    renormalize(Y, variant);
    out.state.iterations = it;
    out.state.invcond_history.push_back(basis_condition(Y).inv_kappa);
    const double delta = delta_criterion(Y_prev, Y, scaled_delta);
    out.state.delta_history.push_back(delta);
    if (delta <= tol) {
      out.converged = true;
      break;
    }
  }

  out.rank_deficient = out.state.invcond_history.back() < 1e-12;

  // Rayleigh-Ritz on span(Y): eigenvalues of Q^T X X^T Q are the squared
  // singular values of X^T Q.
  Matrix Q = variant == SubspaceVariant::kQr ? Y : qr_thin(Y).Q;
  Matrix Z(n, k);
  for (Index j = 0; j < k; ++j) {
    X.apply_adjoint(Q.col(j), tmp_n);
    Z.col(j) = tmp_n;
  }
  const SmallSvd svd = svd_small(Z);
  out.singvals = svd.singvals;
  out.eigvals = svd.singvals.array().square();
  out.basis = std::move(Y);
  out.mvps = counter.count;
  return out;
}

}  // namespace gkpca

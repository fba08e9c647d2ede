#pragma once

#include <cstdint>
#include <vector>

#include "gkpca/linop.hpp"
#include "gkpca/types.hpp"

namespace gkpca {

/// How the block iterate Y <- X X^T Y is renormalized each pass.
enum class SubspaceVariant {
  kNormalize,  // scale each column to unit norm (no orthogonalization)
  kQr,         // thin QR, sign-fixed so reruns are deterministic
};

/// Per-iteration trace of the block iteration. Entry 0 of
/// invcond_history describes the initial range computation; delta_history
/// starts at iteration 1 (it compares consecutive iterates).
struct SubspaceState {
  Index iterations = 0;
  std::vector<double> delta_history;
  std::vector<double> invcond_history;
};

struct SubspaceResult {
  Matrix basis;      // m x k final iterate (not Ritz-rotated)
  Vector eigvals;    // top-k Rayleigh-Ritz eigenvalues of X X^T, descending
  Vector singvals;   // their square roots
  SubspaceState state;
  bool converged = false;
  bool rank_deficient = false;  // basis inverse condition fell below 1e-12
  long mvps = 0;
};

/// ||curr - prev||_F, divided by sqrt(rows * cols) when `scaled` (the
/// default) so the criterion is a mean-square entry change.
double delta_criterion(const Eigen::Ref<const Matrix>& prev,
                       const Eigen::Ref<const Matrix>& curr,
                       bool scaled = true);

/// Condition diagnostics of a basis via its singular values.
struct BasisCondition {
  double kappa = 0.0;      // s_max / s_min (inf if s_min = 0)
  double inv_kappa = 0.0;  // s_min / s_max
};

BasisCondition basis_condition(const Eigen::Ref<const Matrix>& Y);

/// Block power iteration on X X^T from a seeded Gaussian start (orthonormal
/// after one QR). Iteration 0 is the initial range computation; each later
/// iteration applies X X^T, renormalizes per `variant`, and records the
/// delta criterion and basis inverse condition. Stops when delta <= tol or
/// at max_iter. Rayleigh-Ritz estimates are extracted from the final basis
/// (QR-orthonormalized first if the variant does not maintain that).
SubspaceResult subspace_iterate(const LinearOperator& op, Index k,
                                SubspaceVariant variant, double tol,
                                Index max_iter, std::uint64_t seed,
                                bool scaled_delta = true);

}  // namespace gkpca

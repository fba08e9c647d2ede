#pragma once

#include <cstdint>
#include <vector>

#include "gkpca/linop.hpp"
#include "gkpca/rng.hpp"
#include "gkpca/types.hpp"

namespace gkpca {

enum class ReorthMode { kFull, kPartial };
enum class RestartMode { kNone, kThick };
enum class Side { kLeft, kRight };

/// Configuration for the bidiagonalization-based truncated SVD.
struct GklOptions {
  Index k = 10;            // triplets requested
  double tol = 1e-8;       // converged when err_i <= tol * theta_max
  long max_mvps = 1000000;  // operator application budget (forward + adjoint)
  ReorthMode reorth = ReorthMode::kPartial;
  double omega = 1e-8;     // semiorthogonality threshold for partial reorth
  bool one_sided = false;  // reorthogonalize only the shorter side; escalates
                           // to two-sided when the norm estimate passes
                           // 1/sqrt(eps)
  RestartMode restart = RestartMode::kNone;
  Index max_subspace = 40;  // thick restart: cycle length
  Index keep = 20;          // thick restart: Ritz pairs retained
  std::uint64_t seed = 0;   // start vector / deflation randomness
  bool record_history = false;

  void validate(Index m, Index n) const;  // throws std::invalid_argument
};

/// Ritz data extracted from the projected matrix. Values are descending;
/// err_estimates are residual-based accuracy bounds on each value (refined
/// by the gap when the spectrum is locally well separated), err_crude the
/// plain residual coupling |coupling . W_left column|.
struct RitzSet {
  Vector values;
  Matrix left_coeffs;   // W_L: combine with the left basis for Ritz vectors
  Matrix right_coeffs;  // W_R: combine with the right basis
  Vector err_estimates;
  Vector err_crude;
  std::vector<char> converged;
};

/// Partial Golub-Kahan-Lanczos bidiagonalization X V = U B,
/// X^T U = V B^T + v_pending * coupling^T.
///
/// After j steps: U has j orthonormal columns of length m, V has j committed
/// columns of length n plus one pending start vector, B is j x j upper
/// triangular (bidiagonal away from thick-restart events, whose retained
/// couplings add one dense column), and `coupling` holds U^T X v_pending
/// (beta_j * e_j for an ordinary step, the restart couplings right after a
/// restart). Both factorization identities hold to machine precision
/// regardless of basis orthogonality; loss of orthogonality is tracked
/// separately by the omega recurrences.
class LanczosFactorization {
 public:
  /// capacity bounds the number of steps; the start vector is normalized.
  LanczosFactorization(Index m, Index n, Index capacity,
                       const Eigen::Ref<const Vector>& start);

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index steps() const { return j_; }
  Index capacity() const { return cap_; }

  /// Left basis U (m x steps).
  Eigen::Ref<const Matrix> left_basis() const { return U_.leftCols(j_); }
  /// Right basis including the pending vector (n x (steps + 1)).
  Eigen::Ref<const Matrix> right_basis() const { return V_.leftCols(j_ + 1); }
  /// Projected matrix B (steps x steps, upper triangular).
  Eigen::Ref<const Matrix> projected() const {
    return B_.topLeftCorner(j_, j_);
  }
  /// U^T X v_pending (length steps).
  Eigen::Ref<const Vector> residual_coupling() const {
    return coupling_.head(j_);
  }

  /// Diagonal of B (the alpha sequence).
  Vector alphas() const;
  /// Superdiagonal couplings beta_1..beta_{j-1} followed by the norm of the
  /// dangling coupling (= beta_j for an ordinary step).
  Vector betas() const;

  /// Orthogonality-level estimates |u_j^T u_i| and |v_pending^T v_i|
  /// maintained by the omega recurrences under partial reorthogonalization
  /// (upper-bound biased). Empty rows until the first partial step.
  Eigen::Ref<const Vector> omega_left() const { return nu_.head(j_); }
  Eigen::Ref<const Vector> omega_right() const { return mu_.head(j_ + 1); }

  /// True when the right side can no longer supply an orthogonal direction
  /// (the pending slot is a zero vector).
  bool right_exhausted() const { return right_exhausted_; }

 private:
  Index m_, n_, cap_;
  Index j_ = 0;
  Matrix U_, V_, B_;
  Vector coupling_;
  Vector mu_, nu_;            // committed omega rows
  Vector mu_next_, nu_next_;  // candidate rows awaiting commit
  bool right_exhausted_ = false;

  friend struct StepAccess;
};

enum class StepStatus {
  kOk,
  kBreakdownAlpha,  // X v_pending fell inside span(U); nothing was appended
  kBreakdownBeta,   // X^T u fell inside span(V); the step committed with a
                    // zero coupling and a fresh (or zero) pending vector
};

struct StepInfo {
  StepStatus status = StepStatus::kOk;
  bool reorthogonalized_left = false;
  bool reorthogonalized_right = false;
  /// Committed recurrence coefficients (0 when the half-step broke down).
  double alpha = 0.0;
  double beta = 0.0;
};

/// One coupled recurrence step: u_{j+1} from X v_pending, then a new pending
/// vector from X^T u_{j+1} (2 operator applications). `norm_scale` is the
/// caller's running spectral-norm estimate; it scales the breakdown
/// threshold eps^(2/3) * norm_scale and the recurrence inflation terms.
StepInfo bidiag_step(const LinearOperator& op, LanczosFactorization& f,
                     const GklOptions& opts, Rng& rng, double norm_scale);

/// Omega-recurrence update for the candidate vector on `side` (left: the
/// unnormalized new u with candidate coefficient alpha; right: the
/// unnormalized new pending v with candidate beta). Reorthogonalizes the
/// candidate against that side's full basis when its estimate crosses
/// opts.omega and the policy monitors the side. Returns true when
/// reorthogonalization fired (the caller must recompute the norm).
bool partial_reorth_update(LanczosFactorization& f, Side side,
                           Eigen::Ref<Vector> candidate,
                           double candidate_coeff, const GklOptions& opts,
                           double norm_scale);

/// Ritz values, coefficient matrices and error estimates of the current
/// factorization; converged flags test err <= tol * theta_max.
RitzSet ritz_extract(const LanczosFactorization& f, double tol);

/// Compresses the factorization to its `keep` dominant Ritz pairs. B becomes
/// diag(theta_1..theta_keep) and the coupling the rotated residual couplings;
/// the pending vector is retained, so Ritz values and residuals are invariant
/// under the restart.
void thick_restart(LanczosFactorization& f, Index keep);

/// Rotates an alpha-breakdown state (both identities exact) onto its Ritz
/// basis via the SVD of [B | coupling]: B becomes diagonal, the coupling
/// zero, and the null direction of the augmented matrix is dropped. The
/// pending slot is left empty; append a deflation vector before stepping.
void compress_exhausted(LanczosFactorization& f);

/// Replaces the pending vector with a random direction orthogonal to the
/// committed right basis (zero coupling). Marks the factorization
/// right-exhausted instead when no orthogonal direction exists.
void deflate_right(LanczosFactorization& f, Rng& rng);

/// Sum of the first k crude error estimates: the l1 accuracy metric
/// sum_i |coupling . W_L[:, i]|.
double error_metric_l1(const RitzSet& ritz, Index k);

struct SvdlStats {
  long mvps = 0;
  Index steps = 0;  // bidiagonalization steps across all restart cycles
  int restarts = 0;
  int reorth_count = 0;  // partial-mode reorthogonalization events
  int deflations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
  std::vector<Vector> ritz_history;  // per extraction, when recorded
  std::vector<Vector> err_history;
};

struct SvdlResult {
  Vector singvals;  // descending, min(k, steps) entries
  Matrix U;         // m x count Ritz left vectors
  Matrix V;         // n x count Ritz right vectors
  Vector err_estimates;
  std::vector<char> converged;
  SvdlStats stats;
};

/// Truncated SVD driver: seeded start vector, coupled recurrence steps with
/// the configured reorthogonalization, optional thick restarting, breakdown
/// deflation, and convergence when the top-k error estimates fall below
/// tol * theta_max. Without restarting the convergence test runs every step;
/// with thick restarting it runs at each cycle boundary.
SvdlResult svdl(const LinearOperator& op, const GklOptions& opts);

}  // namespace gkpca

#pragma once

#include <cstdint>
#include <stdexcept>

#include "gkpca/types.hpp"

namespace gkpca {

/// Abstract m x n linear map. Iterative drivers touch X only through
/// apply (y = X x) and apply_adjoint (y = X^T x), so matrix-free operators
/// plug in directly.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;

  /// y = X x; y must have rows() entries, x cols() entries.
  virtual void apply(const Eigen::Ref<const Vector>& x,
                     Eigen::Ref<Vector> y) const = 0;

  /// y = X^T x; y must have cols() entries, x rows() entries.
  virtual void apply_adjoint(const Eigen::Ref<const Vector>& x,
                             Eigen::Ref<Vector> y) const = 0;

  Vector apply(const Eigen::Ref<const Vector>& x) const {
    Vector y(rows());
    apply(x, y);
    return y;
  }

  Vector apply_adjoint(const Eigen::Ref<const Vector>& x) const {
    Vector y(cols());
    apply_adjoint(x, y);
    return y;
  }
};

/// Wraps a dense column-major matrix without copying; the matrix must
/// outlive the operator.
class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(const Eigen::Ref<const Matrix>& X) : X_(X) {}

  Index rows() const override { return X_.rows(); }
  Index cols() const override { return X_.cols(); }

  void apply(const Eigen::Ref<const Vector>& x,
             Eigen::Ref<Vector> y) const override {
    y.noalias() = X_ * x;
  }

  void apply_adjoint(const Eigen::Ref<const Vector>& x,
                     Eigen::Ref<Vector> y) const override {
    y.noalias() = X_.transpose() * x;
  }

  const Eigen::Ref<const Matrix>& matrix() const { return X_; }

 private:
  Eigen::Ref<const Matrix> X_;
};

/// Counts every application; forward and adjoint both cost 1.
struct MvpCounter {
  long count = 0;
};

/// Pass-through operator that charges each product to a shared counter.
class CountingOperator final : public LinearOperator {
 public:
  CountingOperator(const LinearOperator& inner, MvpCounter& counter)
      : inner_(inner), counter_(counter) {}

  Index rows() const override { return inner_.rows(); }
  Index cols() const override { return inner_.cols(); }

  void apply(const Eigen::Ref<const Vector>& x,
             Eigen::Ref<Vector> y) const override {
    ++counter_.count;
    inner_.apply(x, y);
  }

  void apply_adjoint(const Eigen::Ref<const Vector>& x,
                     Eigen::Ref<Vector> y) const override {
    ++counter_.count;
    inner_.apply_adjoint(x, y);
  }

  long count() const { return counter_.count; }

 private:
  const LinearOperator& inner_;
  MvpCounter& counter_;
};

/// y = X v, charging one product to `counter`. Throws on length mismatch.
inline Vector matvec_counted(const LinearOperator& op,
                             const Eigen::Ref<const Vector>& v,
                             MvpCounter& counter) {
  if (v.size() != op.cols())
    throw std::invalid_argument("matvec_counted: length mismatch");
  ++counter.count;
  return op.apply(v);
}

/// y = X^T v, charging one product to `counter`.
inline Vector matvec_adjoint_counted(const LinearOperator& op,
                                     const Eigen::Ref<const Vector>& v,
                                     MvpCounter& counter) {
  if (v.size() != op.rows())
    throw std::invalid_argument("matvec_adjoint_counted: length mismatch");
  ++counter.count;
  return op.apply_adjoint(v);
}

/// Spectral norm lower estimate by `iters` power iterations on X^T X from a
/// seeded start. Returns ||X z|| for a unit z, hence never exceeds the true
/// sigma_1; within ~10% for iters >= 20 when sigma_1/sigma_2 >= 1.1.
double norm_estimate(const LinearOperator& op, int iters = 20,
                     std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Relative adjoint consistency |u^T(Xv) - (X^T u)^T v| / (||u|| ||v||) on a
/// seeded random probe; useful for validating custom operators.
double adjoint_mismatch(const LinearOperator& op, std::uint64_t seed = 7);

}  // namespace gkpca

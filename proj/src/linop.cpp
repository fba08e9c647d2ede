#include "gkpca/linop.hpp"

#include <cmath>

#include "gkpca/rng.hpp"

namespace gkpca {

double norm_estimate(const LinearOperator& op, int iters, std::uint64_t seed) {
  const Index n = op.cols();
  if (n == 0 || op.rows() == 0) return 0.0;
  Rng rng(seed);
  Vector z(n);
  for (Index i = 0; i < n; ++i) z[i] = rng.uniform_symmetric();
  double zn = z.norm();
  if (zn == 0.0) z[0] = zn = 1.0;
  z /= zn;
  Vector y(op.rows()), w(n);
  for (int it = 0; it < iters; ++it) {
    op.apply(z, y);
    op.apply_adjoint(y, w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;  // z reached the null space exactly
    z = w / wn;
  }
  op.apply(z, y);
  return y.norm();
}

double adjoint_mismatch(const LinearOperator& op, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(op.cols()), u(op.rows());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  for (Index i = 0; i < u.size(); ++i) u[i] = rng.normal();
  const double left = u.dot(op.apply(v));
  const double right = op.apply_adjoint(u).dot(v);
  const double scale = u.norm() * v.norm();
  return scale == 0.0 ? 0.0 : std::abs(left - right) / scale;
}

}  // namespace gkpca

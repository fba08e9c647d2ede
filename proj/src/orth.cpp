#include "gkpca/orth.hpp"

#include <Eigen/QR>

namespace gkpca {

ThinQr qr_thin(const Eigen::Ref<const Matrix>& M) {
  const Index r = std::min(M.rows(), M.cols());
  Eigen::HouseholderQR<Matrix> qr(M);
  ThinQr out;
  out.Q = qr.householderQ() * Matrix::Identity(M.rows(), r);
  out.R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  // Flip signs so R's diagonal is nonnegative; Q R is unchanged.
  for (Index i = 0; i < r; ++i) {
    if (out.R(i, i) < 0.0) {
      out.R.row(i) = -out.R.row(i);
      out.Q.col(i) = -out.Q.col(i);
    }
  }
  return out;
}

double orthonormality_error(const Eigen::Ref<const Matrix>& Q) {
  const Index k = Q.cols();
  Matrix G(k, k);
  G.noalias() = Q.transpose() * Q;
  G -= Matrix::Identity(k, k);
  return G.cwiseAbs().maxCoeff();
}

}  // namespace gkpca

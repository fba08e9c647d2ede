#include "gkpca/small_svd.hpp"

#include <Eigen/SVD>

namespace gkpca {

namespace {
// Jacobi is accurate and fast enough up to this size; divide-and-conquer
// takes over above it (roughly 8x faster at dimension 150, same accuracy
// class).
constexpr Index kJacobiMaxDim = 64;
}  // namespace

SmallSvd svd_small(const Eigen::Ref<const Matrix>& M) {
  SmallSvd out;
  if (std::min(M.rows(), M.cols()) <= kJacobiMaxDim) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.U = svd.matrixU();
    out.singvals = svd.singularValues();
    out.V = svd.matrixV();
  } else {
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.U = svd.matrixU();
    out.singvals = svd.singularValues();
    out.V = svd.matrixV();
  }
  return out;
}

}  // namespace gkpca

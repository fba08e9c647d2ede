#pragma once

#include "gkpca/types.hpp"

namespace gkpca {

/// Full SVD of a small dense matrix: M = U diag(s) V^T with s descending,
/// U p x r, V q x r, r = min(p, q). Intended for projected problems (a few
/// hundred rows/cols at most); accuracy is ~machine precision relative to
/// ||M||.
struct SmallSvd {
  Matrix U;
  Vector singvals;
  Matrix V;
};

SmallSvd svd_small(const Eigen::Ref<const Matrix>& M);

}  // namespace gkpca

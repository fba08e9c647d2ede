#include "gkpca/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace gkpca {

void ModelParams::validate() const {
  if (m <= 0 || n <= 0)
    throw std::invalid_argument("model: m and n must be positive");
  if (r < 0) throw std::invalid_argument("model: r must be nonnegative");
  if (nsignal < 0)
    throw std::invalid_argument("model: nsignal must be nonnegative");
  if (!(rkins >= 0.0) || rkins > 1.0)
    throw std::invalid_argument("model: rkins must lie in [0, 1]");
}

IndexRange randrange(Index n, Rng& rng) {
  const auto i1 = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
  const auto i2 = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
  return i1 <= i2 ? IndexRange{i1, i2} : IndexRange{i2, i1};
}

Matrix model(const ModelParams& p) {
  p.validate();
  Rng rng(p.seed);
  Matrix A = Matrix::Zero(p.m, p.n);

  for (Index b = 0; b < p.r; ++b) {
    const auto k = static_cast<double>(rng.uniform_int(0, 2));
    const IndexRange rows = randrange(p.m, rng);
    const IndexRange cols = randrange(p.n, rng);
    A.block(rows.lo, cols.lo, rows.length(), cols.length()).setConstant(k);
  }

  for (long long s = 0; s < p.nsignal; ++s) {
    const auto i = static_cast<Index>(rng.index(static_cast<std::uint64_t>(p.m)));
    const auto j = static_cast<Index>(rng.index(static_cast<std::uint64_t>(p.n)));
    A(i, j) = static_cast<double>(rng.uniform_int(0, 2));
  }

  const auto ndup = static_cast<long long>(std::llround(p.rkins * static_cast<double>(p.m)));
  for (long long d = 0; d < ndup; ++d) {
    const auto dst = static_cast<Index>(rng.index(static_cast<std::uint64_t>(p.m)));
    const auto src = static_cast<Index>(rng.index(static_cast<std::uint64_t>(p.m)));
    A.row(dst) = A.row(src);
  }

  return A;
}

}  // namespace gkpca

#pragma once

#include <cstdint>

#include "gkpca/rng.hpp"
#include "gkpca/types.hpp"

namespace gkpca {

/// Parameters of the synthetic genotype model: an m x n dosage matrix built
/// from r admixture blocks, nsignal random single-entry writes, and
/// round(rkins * m) duplicated rows mimicking kinship.
struct ModelParams {
  Index m = 0;
  Index n = 0;
  Index r = 0;
  long long nsignal = 0;
  double rkins = 0.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

/// Contiguous index range [lo, hi], both inclusive, 0-based.
struct IndexRange {
  Index lo = 0;
  Index hi = 0;

  Index length() const { return hi - lo + 1; }
};

/// Draws two independent uniform indices on [0, n) and returns them ordered;
/// always consumes exactly two draws. P(single-point range) > P(full range)
/// by construction, giving blocks a bias toward smaller extents.
IndexRange randrange(Index n, Rng& rng);

/// Generates the dosage matrix (entries in {0, 1, 2}, no missing values).
/// Draw order per step is fixed and documented for reproducibility:
///   1. r times: block value k in {0,1,2}, row range, column range
///   2. nsignal times: row, column, value in {0,1,2}
///   3. round(rkins * m) times: destination row, then source row; the copy
///      reads the matrix as it currently stands.
Matrix model(const ModelParams& p);

}  // namespace gkpca

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkpca/types.hpp"

namespace gkpca {

/// Malformed or truncated input file.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Missing-genotype sentinel; dosages are otherwise 0, 1 or 2 copies of the
/// first allele, so every entry fits the packed 2-bit on-disk code.
inline constexpr std::uint8_t kMissingDosage = 3;

/// Dosage matrix, one row per marker and one column per sample.
struct GenotypeMatrix {
  using Codes = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  Codes dosages;
  bool marker_major = true;  // rows are markers; the only supported layout

  Index markers() const { return dosages.rows(); }
  Index samples() const { return dosages.cols(); }
};

/// Reads a marker-major PLINK .bed with its .bim/.fam companions (only the
/// line counts of the companions are used: markers and samples).
///
/// Packed byte layout, least significant pair first, one marker per record
/// of ceil(n/4) bytes:
///   code 00 -> dosage 2    code 01 -> missing
///   code 10 -> dosage 1    code 11 -> dosage 0
GenotypeMatrix read_bed(const std::filesystem::path& bed,
                        const std::filesystem::path& bim,
                        const std::filesystem::path& fam);

/// Writes .bed (marker-major, pad bits 00) plus placeholder .bim/.fam
/// metadata with one line per marker/sample.
void write_bed(const GenotypeMatrix& g, const std::filesystem::path& bed,
               const std::filesystem::path& bim,
               const std::filesystem::path& fam);

/// Dosages as doubles with each missing entry replaced by its marker's mean
/// over observed entries (0 when the whole marker is missing). When
/// `all_missing` is given it receives one flag per marker marking rows that
/// had no observed entry at all.
Matrix impute_mean(const GenotypeMatrix& g,
                   std::vector<char>* all_missing = nullptr);

enum class ScalingScheme {
  kUnitVariance,  // center, divide by population standard deviation
  kBinomial,      // center, divide by sqrt(p(1-p)), p = mean/2 clamped away
                  // from {0,1} by 1/(2n+2)
};

/// Row-standardized matrix; zero-variance markers come out as zero rows and
/// are flagged rather than dropped, so row indices stay aligned.
struct StandardizedMatrix {
  Matrix values;
  Vector row_means;
  Vector row_scales;               // divisor actually applied (0 if flagged)
  std::vector<char> zero_variance;  // one flag per marker row
  ScalingScheme scheme = ScalingScheme::kUnitVariance;
};

StandardizedMatrix standardize(const Eigen::Ref<const Matrix>& dosages,
                               ScalingScheme scheme);

/// Dense binary format: 16-byte header (magic "GMX1", u32 little-endian
/// rows, cols, flags) followed by column-major little-endian f64 payload.
Matrix read_dense(const std::filesystem::path& path);
void write_dense(const std::filesystem::path& path,
                 const Eigen::Ref<const Matrix>& M, std::uint32_t flags = 0);

/// CSV with a `c1,...,cn` header row; %.17g values so doubles round-trip.
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::Ref<const Matrix>& M);

}  // namespace gkpca

#include "gkpca/genio.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gkpca {

namespace {

std::vector<char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return bytes;
}

Index count_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  Index lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++lines;
  }
  return lines;
}

// 2-bit code <-> dosage tables. Code order 00,01,10,11.
constexpr std::uint8_t kCodeToDosage[4] = {2, kMissingDosage, 1, 0};
constexpr std::uint8_t kDosageToCode[4] = {3, 2, 0, 1};  // index by dosage

void put_u32le(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32le(const char* p) {
  const auto b = reinterpret_cast<const unsigned char*>(p);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

GenotypeMatrix read_bed(const std::filesystem::path& bed,
                        const std::filesystem::path& bim,
                        const std::filesystem::path& fam) {
  const Index m = count_lines(bim);
  const Index n = count_lines(fam);
  const std::vector<char> bytes = read_all(bed);
  if (bytes.size() < 3 || static_cast<unsigned char>(bytes[0]) != 0x6c ||
      static_cast<unsigned char>(bytes[1]) != 0x1b)
    throw FormatError(bed.string() + ": bad magic");
  if (static_cast<unsigned char>(bytes[2]) != 0x01)
    throw FormatError(bed.string() +
                      ": only marker-major mode (0x01) is supported");
  const Index stride = (n + 3) / 4;
  const auto expected = static_cast<std::size_t>(m) * stride + 3;
  if (bytes.size() != expected)
    throw FormatError(bed.string() + ": payload size mismatch (expected " +
                      std::to_string(expected) + " bytes, found " +
                      std::to_string(bytes.size()) + ")");

  GenotypeMatrix g;
  g.dosages.resize(m, n);
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data()) + 3;
  for (Index i = 0; i < m; ++i) {
    const unsigned char* rec = data + i * stride;
    for (Index s = 0; s < n; ++s) {
      const unsigned code = (rec[s >> 2] >> (2 * (s & 3))) & 3u;
      g.dosages(i, s) = kCodeToDosage[code];
    }
  }
  return g;
}

void write_bed(const GenotypeMatrix& g, const std::filesystem::path& bed,
               const std::filesystem::path& bim,
               const std::filesystem::path& fam) {
  if (!g.marker_major)
    throw std::invalid_argument("write_bed: marker-major input required");
  const Index m = g.markers();
  const Index n = g.samples();

  std::ofstream out(bed, std::ios::binary);
  if (!out) throw FormatError("cannot open " + bed.string() + " for writing");
  const char magic[3] = {0x6c, 0x1b, 0x01};
  out.write(magic, 3);
  const Index stride = (n + 3) / 4;
  std::vector<unsigned char> rec(static_cast<std::size_t>(stride));
  for (Index i = 0; i < m; ++i) {
    std::fill(rec.begin(), rec.end(), 0);  // pad bits stay 00
    for (Index s = 0; s < n; ++s) {
      const std::uint8_t d = g.dosages(i, s);
      if (d > kMissingDosage)
        throw std::invalid_argument("write_bed: dosage out of range");
      rec[s >> 2] |= static_cast<unsigned char>(kDosageToCode[d]
                                                << (2 * (s & 3)));
    }
    out.write(reinterpret_cast<const char*>(rec.data()), stride);
  }

  std::ofstream bim_out(bim);
  if (!bim_out)
    throw FormatError("cannot open " + bim.string() + " for writing");
  for (Index i = 0; i < m; ++i)
    bim_out << "1\tsnp" << i + 1 << "\t0\t" << i + 1 << "\tA\tB\n";

  std::ofstream fam_out(fam);
  if (!fam_out)
    throw FormatError("cannot open " + fam.string() + " for writing");
  for (Index s = 0; s < n; ++s)
    fam_out << "fam" << s + 1 << "\tind" << s + 1 << "\t0\t0\t0\t-9\n";
}

Matrix impute_mean(const GenotypeMatrix& g, std::vector<char>* all_missing) {
  const Index m = g.markers();
  const Index n = g.samples();
  Matrix out(m, n);
  if (all_missing) all_missing->assign(static_cast<std::size_t>(m), 0);
  for (Index i = 0; i < m; ++i) {
    double sum = 0.0;
    Index observed = 0;
    for (Index s = 0; s < n; ++s) {
      const std::uint8_t d = g.dosages(i, s);
      if (d != kMissingDosage) {
        sum += d;
        ++observed;
      }
    }
    const double mean = observed > 0 ? sum / observed : 0.0;
    if (all_missing && observed == 0)
      (*all_missing)[static_cast<std::size_t>(i)] = 1;
    for (Index s = 0; s < n; ++s) {
      const std::uint8_t d = g.dosages(i, s);
      out(i, s) = d == kMissingDosage ? mean : static_cast<double>(d);
    }
  }
  return out;
}

StandardizedMatrix standardize(const Eigen::Ref<const Matrix>& dosages,
                               ScalingScheme scheme) {
  const Index m = dosages.rows();
  const Index n = dosages.cols();
  if (n == 0) throw std::invalid_argument("standardize: no samples");
  StandardizedMatrix out;
  out.scheme = scheme;
  out.values.resize(m, n);
  out.row_means.resize(m);
  out.row_scales.resize(m);
  out.zero_variance.assign(static_cast<std::size_t>(m), 0);
  const double nd = static_cast<double>(n);
  for (Index i = 0; i < m; ++i) {
    const double mean = dosages.row(i).mean();
    const double var =
        (dosages.row(i).array() - mean).square().sum() / nd;  // population
    out.row_means[i] = mean;
    if (var == 0.0) {
      out.zero_variance[static_cast<std::size_t>(i)] = 1;
      out.row_scales[i] = 0.0;
      out.values.row(i).setZero();
      continue;
    }
    double scale;
    if (scheme == ScalingScheme::kUnitVariance) {
      scale = std::sqrt(var);
    } else {
      const double clamp = 1.0 / (2.0 * nd + 2.0);
      const double p = std::min(std::max(mean / 2.0, clamp), 1.0 - clamp);
      scale = std::sqrt(p * (1.0 - p));
    }
    out.row_scales[i] = scale;
    out.values.row(i) = (dosages.row(i).array() - mean) / scale;
  }
  return out;
}

Matrix read_dense(const std::filesystem::path& path) {
  const std::vector<char> bytes = read_all(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "GMX1", 4) != 0)
    throw FormatError(path.string() + ": bad magic");
  const std::uint32_t m = get_u32le(bytes.data() + 4);
  const std::uint32_t n = get_u32le(bytes.data() + 8);
  const std::size_t expected =
      16 + static_cast<std::size_t>(m) * n * sizeof(double);
  if (bytes.size() != expected)
    throw FormatError(path.string() + ": payload size mismatch (expected " +
                      std::to_string(expected) + " bytes, found " +
                      std::to_string(bytes.size()) + ")");
  Matrix M(static_cast<Index>(m), static_cast<Index>(n));
  std::memcpy(M.data(), bytes.data() + 16, expected - 16);
  return M;
}

void write_dense(const std::filesystem::path& path,
                 const Eigen::Ref<const Matrix>& M, std::uint32_t flags) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write("GMX1", 4);
  put_u32le(out, static_cast<std::uint32_t>(M.rows()));
  put_u32le(out, static_cast<std::uint32_t>(M.cols()));
  put_u32le(out, flags);
  if (M.size() > 0) {
    // Eigen default storage is column-major, matching the on-disk layout.
    const Matrix contiguous = M;
    out.write(reinterpret_cast<const char*>(contiguous.data()),
              static_cast<std::streamsize>(sizeof(double)) * M.size());
  }
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double value = std::strtod(cell.c_str(), &end);
      while (end && *end == ' ') ++end;
      if (end == cell.c_str() || (end && *end != '\0' && *end != '\r')) {
        numeric = false;
        break;
      }
      row.push_back(value);
    }
    if (!numeric) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw FormatError(path.string() + ": non-numeric cell outside header");
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError(path.string() + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path.string() + ": no data rows");
  Matrix M(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j)
      M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return M;
}

void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::Ref<const Matrix>& M) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  for (Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << 'c' << j + 1;
  out << '\n';
  char buf[32];
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace gkpca

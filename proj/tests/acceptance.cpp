// Acceptance gate: ten deterministic checks, one [PASS]/[FAIL] line each.
// Exits nonzero when any check fails. Shared heavy inputs (the 2000 x 4000
// synthetic dosage matrix and its dense spectrum) are built once and reused.

#include <sys/wait.h>

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gkpca/genio.hpp"
#include "gkpca/gkl.hpp"
#include "gkpca/linop.hpp"
#include "gkpca/orth.hpp"
#include "gkpca/regress.hpp"
#include "gkpca/rng.hpp"
#include "gkpca/rmt.hpp"
#include "gkpca/subspace.hpp"
#include "gkpca/synth.hpp"
#include "gkpca/types.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using gkpca::Index;
using gkpca::Matrix;
using gkpca::Vector;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared synthetic matrix: admixture blocks + dense signal + kinship rows.

struct SharedContext {
  Matrix X;            // 2000 x 4000 dosage matrix
  Vector dense_svals;  // full spectrum, descending
  gkpca::MpParams fitted;
  double build_seconds = 0.0;  // generation + dense SVD + bulk fit
};

const SharedContext& shared() {
  static const SharedContext ctx = [] {
    SharedContext c;
    const auto t0 = Clock::now();
    gkpca::ModelParams p;
    p.m = 2000;
    p.n = 4000;
    p.r = 10;
    p.nsignal = 2000LL * 4000LL;
    p.rkins = 0.017;
    p.seed = 42;
    c.X = gkpca::model(p);
    Eigen::BDCSVD<Matrix> svd(c.X);
    c.dense_svals = svd.singularValues();
    c.fitted = gkpca::fit_bulk(c.dense_svals, 2.0);
    c.build_seconds = seconds_since(t0);
    return c;
  }();
  return ctx;
}

// ---------------------------------------------------------------------------
// Criteria 1 + 2: solver accuracy vs a dense oracle, and error-bound
// validity, over 20 seeded Gaussian matrices up to 300 x 400.

struct C12 {
  bool accuracy = true;
  bool bounds = true;
  double worst_fro = 0.0;
  double worst_pro = 0.0;
  double seconds = 0.0;
};

C12 run_criteria_1_2() {
  C12 out;
  const auto t0 = Clock::now();
  for (int t = 0; t < 20; ++t) {
    const Index m = 60 + (t * 37) % 241;
    const Index n = 60 + (t * 53) % 341;
    const Matrix X =
        oracles::gaussian_matrix(m, n, 1000 + static_cast<std::uint64_t>(t));
    Eigen::BDCSVD<Matrix> svd(X);
    const Vector sigma = svd.singularValues().head(10);
    const gkpca::DenseOperator op(X);

    gkpca::GklOptions fro;
    fro.k = 10;
    fro.tol = 1e-9;
    fro.reorth = gkpca::ReorthMode::kFull;
    fro.restart = gkpca::RestartMode::kThick;
    fro.max_subspace = 40;
    fro.keep = 20;
    fro.seed = static_cast<std::uint64_t>(t) + 1;

    gkpca::GklOptions pro;
    pro.k = 10;
    pro.tol = 1e-11;
    pro.reorth = gkpca::ReorthMode::kPartial;
    pro.omega = 1e-8;
    pro.seed = static_cast<std::uint64_t>(t) + 1;

    const struct {
      const gkpca::GklOptions& opts;
      double bar;
      double* worst;
    } configs[] = {{fro, 1e-8, &out.worst_fro}, {pro, 1e-10, &out.worst_pro}};

    for (const auto& cfg : configs) {
      const gkpca::SvdlResult r = gkpca::svdl(op, cfg.opts);
      if (r.singvals.size() < 10) {
        out.accuracy = false;
        continue;
      }
      double l1_true = 0.0;
      double l1_reported = 0.0;
      for (Index i = 0; i < 10; ++i) {
        const double dev = std::abs(r.singvals(i) - sigma(i));
        const double rel = dev / sigma(i);
        *cfg.worst = std::max(*cfg.worst, rel);
        if (rel > cfg.bar) out.accuracy = false;
        if (r.converged[static_cast<std::size_t>(i)] &&
            dev > r.err_estimates(i) + 1e-10)
          out.bounds = false;
        l1_true += dev;
        l1_reported += r.err_estimates(i);
      }
      if (l1_reported < l1_true - 1e-9) out.bounds = false;
    }
  }
  out.seconds = seconds_since(t0);
  if (out.seconds > 60.0) out.accuracy = false;
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: Marchenko-Pastur bulk of the shared matrix.

bool run_criterion_3(std::string& detail) {
  const auto t0 = Clock::now();
  const Vector& s = shared().dense_svals;
  const gkpca::MpParams fit = shared().fitted;
  const bool rho_ok = fit.rho < 2.0;

  // Bulk histogram sample: drop spike outliers and the near-zero values the
  // duplicated rows produce.
  const gkpca::MpSupport sup = gkpca::mp_support(fit);
  const double lo_cut = 1e-8 * s(0);
  const double hi_cut = 1.1 * sup.sigma_plus;
  std::vector<double> bulk_vals;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > lo_cut && s(i) <= hi_cut) bulk_vals.push_back(s(i));
  Vector bulk(static_cast<Index>(bulk_vals.size()));
  for (Index i = 0; i < bulk.size(); ++i)
    bulk(i) = bulk_vals[static_cast<std::size_t>(i)];
  const double chi2 = gkpca::mp_chi2_reduced(bulk, fit, 30);
  const double seconds = shared().build_seconds + seconds_since(t0);

  detail = "rho_hat=" + fmt("%.4g", fit.rho) + ", chi2_reduced=" +
           fmt("%.3g", chi2) + ", " + fmt("%.1f", seconds) + "s";
  return rho_ok && chi2 <= 3.0 && seconds <= 300.0;
}

// ---------------------------------------------------------------------------
// Criterion 4: outlier band and kinship near-zeros of the shared spectrum.

bool run_criterion_4(std::string& detail) {
  const Vector& s = shared().dense_svals;
  const gkpca::OutlierSet outliers =
      gkpca::count_outliers(s, shared().fitted, 1.1);
  Index near_zero = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) <= 1e-8 * s(0)) ++near_zero;
  detail = "outliers=" + std::to_string(outliers.count) +
           ", near_zeros=" + std::to_string(near_zero);
  return outliers.count >= 10 && outliers.count <= 30 && near_zero >= 30;
}

// ---------------------------------------------------------------------------
// Criterion 5: per-column normalization lets the block collapse.

bool run_criterion_5(std::string& detail) {
  const gkpca::DenseOperator op(shared().X);
  const gkpca::SubspaceResult r = gkpca::subspace_iterate(
      op, 10, gkpca::SubspaceVariant::kNormalize, 1e-300, 10, 7);
  double best = 1.0;
  Index when = -1;
  for (std::size_t i = 0; i < r.state.invcond_history.size(); ++i) {
    if (r.state.invcond_history[i] < best) {
      best = r.state.invcond_history[i];
      if (best <= 1e-12 && when < 0) when = static_cast<Index>(i);
    }
  }
  detail = "min_invcond=" + fmt("%.2g", best) +
           (when >= 0 ? ", at iteration " + std::to_string(when) : "");
  return best <= 1e-12;
}

// ---------------------------------------------------------------------------
// Criterion 6: matvec efficiency ratio at matched achieved accuracy.

bool run_criterion_6(std::string& detail) {
  const Vector& sigma = shared().dense_svals;
  const gkpca::DenseOperator op(shared().X);

  gkpca::GklOptions opts;
  opts.k = 10;
  opts.tol = 1e-7;
  opts.reorth = gkpca::ReorthMode::kPartial;
  opts.omega = 1e-8;
  opts.seed = 3;
  const gkpca::SvdlResult g = gkpca::svdl(op, opts);
  const double rel_g =
      g.singvals.size() >= 10
          ? std::abs(g.singvals(9) - sigma(9)) / sigma(9)
          : 1.0;

  const gkpca::SubspaceResult s = gkpca::subspace_iterate(
      op, 10, gkpca::SubspaceVariant::kQr, 1e-8, 400, 3);
  const double rel_s = std::abs(s.singvals(9) - sigma(9)) / sigma(9);

  detail = "gkl mvps=" + std::to_string(g.stats.mvps) +
           " rel=" + fmt("%.2g", rel_g) +
           "; subspace mvps=" + std::to_string(s.mvps) +
           " rel=" + fmt("%.2g", rel_s);
  return rel_g <= 1e-5 && rel_s <= 1e-5 && g.stats.mvps * 5 <= s.mvps;
}

// ---------------------------------------------------------------------------
// Criterion 7: MP density against an iid Gaussian spectrum.

bool run_criterion_7(std::string& detail) {
  const Matrix G = oracles::gaussian_matrix(1000, 667, 20250815);
  Eigen::BDCSVD<Matrix> svd(G);
  const Vector svals = svd.singularValues() / std::sqrt(667.0);
  const gkpca::MpParams p{1000.0 / 667.0, 1.0};

  const gkpca::HistogramData hist = gkpca::histogram(svals, 10);
  double max_dev = 0.0;
  for (Index b = 0; b < hist.densities.size(); ++b) {
    const double lo = hist.edges(b);
    const double hi = hist.edges(b + 1);
    const double model =
        (gkpca::mp_cdf_sv(hi, p) - gkpca::mp_cdf_sv(lo, p)) / (hi - lo);
    max_dev = std::max(max_dev, std::abs(hist.densities(b) - model));
  }

  const double mass = oracles::midpoint_mass_eig(p);
  const double target = std::min(1.0, 1.0 / p.rho);

  detail = "max_bin_dev=" + fmt("%.3f", max_dev) +
           ", eig_mass_err=" + fmt("%.2g", std::abs(mass - target));
  return max_dev <= 0.1 && std::abs(mass - target) <= 1e-6;
}

// ---------------------------------------------------------------------------
// Criterion 8: regression vs brute-force oracles; orthogonal decoupling.

bool run_criterion_8(std::string& detail) {
  bool ok = true;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::uint64_t seed = 3000 + static_cast<std::uint64_t>(t) * 11;
    const Matrix X = oracles::gaussian_matrix(80, 3, seed);
    const Matrix Z = oracles::gaussian_matrix(80, 4, seed + 1);
    Vector y = oracles::gaussian_matrix(80, 1, seed + 2).col(0);
    y += 1.5 * X.col(0) - Z.col(1);

    const gkpca::RegressionResult fit = gkpca::ols_fit(X, y);
    const oracles::NormalEqFit ref = oracles::ols_normal_equations(X, y);
    worst = std::max(worst,
                     (fit.beta_hat - ref.beta).lpNorm<Eigen::Infinity>());
    worst = std::max(worst, std::abs(fit.sigma2_hat - ref.sigma2));
    worst = std::max(
        worst, (fit.cov_beta - ref.cov).lpNorm<Eigen::Infinity>());

    const gkpca::PcAdjustedResult adj = gkpca::pc_adjusted_fit(X, Z, y);
    const oracles::BlockFit bref = oracles::block_inverse_fit(X, Z, y);
    worst = std::max(worst,
                     (adj.beta_hat - bref.beta).lpNorm<Eigen::Infinity>());
    worst = std::max(worst,
                     (adj.gamma_hat - bref.gamma).lpNorm<Eigen::Infinity>());
    worst = std::max(
        worst, (adj.cov_beta - bref.cov_beta).lpNorm<Eigen::Infinity>());
  }
  ok = worst <= 1e-10;

  // Decoupling: X and Z from one orthonormal basis.
  double worst_dec = 0.0;
  for (int t = 0; t < 5; ++t) {
    const gkpca::ThinQr qr = gkpca::qr_thin(
        oracles::gaussian_matrix(50, 6, 4000 + static_cast<std::uint64_t>(t)));
    const Matrix X = qr.Q.leftCols(2) * 2.0;
    const Matrix Z = qr.Q.rightCols(4);
    const Vector y =
        oracles::gaussian_matrix(50, 1, 4100 + static_cast<std::uint64_t>(t))
            .col(0);
    const gkpca::PcAdjustedResult adj = gkpca::pc_adjusted_fit(X, Z, y);
    const gkpca::RegressionResult plain = gkpca::ols_fit(X, y);
    worst_dec = std::max(
        worst_dec, (adj.beta_hat - plain.beta_hat).lpNorm<Eigen::Infinity>());
  }
  detail = "oracle_dev=" + fmt("%.2g", worst) +
           ", decoupling_dev=" + fmt("%.2g", worst_dec);
  return ok && worst_dec <= 1e-12;
}

// ---------------------------------------------------------------------------
// Criterion 9: format round-trips.

bool run_criterion_9(std::string& detail) {
  const fs::path dir = fs::temp_directory_path() / "gkpca_acceptance_c9";
  fs::remove_all(dir);
  fs::create_directories(dir);

  gkpca::Rng rng(606);
  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    const Index m = 1 + static_cast<Index>(rng.index(40));
    const Index n = 1 + static_cast<Index>(rng.index(50));
    gkpca::GenotypeMatrix g;
    g.dosages.resize(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j)
        g.dosages(i, j) = static_cast<std::uint8_t>(rng.index(4));

    gkpca::write_bed(g, dir / "t.bed", dir / "t.bim", dir / "t.fam");
    const gkpca::GenotypeMatrix back =
        gkpca::read_bed(dir / "t.bed", dir / "t.bim", dir / "t.fam");
    if (back.markers() != m || back.samples() != n ||
        !(back.dosages.array() == g.dosages.array()).all())
      ++failures;

    const Matrix dense = g.dosages.cast<double>();
    gkpca::write_dense(dir / "t.gmx", dense);
    const Matrix dback = gkpca::read_dense(dir / "t.gmx");
    if (dback.rows() != m || dback.cols() != n ||
        (dback - dense).lpNorm<Eigen::Infinity>() != 0.0)
      ++failures;
  }

  // Fixed-byte decode example.
  {
    std::ofstream bed(dir / "ex.bed", std::ios::binary);
    const unsigned char bytes[4] = {0x6c, 0x1b, 0x01, 0x1b};
    bed.write(reinterpret_cast<const char*>(bytes), 4);
  }
  {
    std::ofstream bim(dir / "ex.bim");
    bim << "snp\n";
    std::ofstream fam(dir / "ex.fam");
    fam << "a\nb\nc\nd\n";
  }
  const gkpca::GenotypeMatrix ex =
      gkpca::read_bed(dir / "ex.bed", dir / "ex.bim", dir / "ex.fam");
  const bool ex_ok = ex.markers() == 1 && ex.samples() == 4 &&
                     ex.dosages(0, 0) == 0 && ex.dosages(0, 1) == 1 &&
                     ex.dosages(0, 2) == gkpca::kMissingDosage &&
                     ex.dosages(0, 3) == 2;
  detail = "round_trip_failures=" + std::to_string(failures) +
           ", byte_example=" + (ex_ok ? "ok" : "bad");
  return failures == 0 && ex_ok;
}

// ---------------------------------------------------------------------------
// Criterion 10: CLI determinism (byte-identical reruns, timing masked).

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(GKPCA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1 || !WIFEXITED(rc)) return -1;
  return WEXITSTATUS(rc);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<unreadable:" + p.string() + ">";
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  return read_file(a) == read_file(b);
}

bool same_json_masked(const fs::path& a, const fs::path& b,
                      const std::string& field) {
  std::ifstream ia(a), ib(b);
  if (!ia || !ib) return false;
  json ja = json::parse(ia, nullptr, false);
  json jb = json::parse(ib, nullptr, false);
  if (ja.is_discarded() || jb.is_discarded()) return false;
  ja.erase(field);
  jb.erase(field);
  return ja == jb;
}

// Equality of CSV files with one column (by header name) blanked out.
bool same_csv_masked(const fs::path& a, const fs::path& b,
                     std::size_t drop_col) {
  std::ifstream ia(a), ib(b);
  if (!ia || !ib) return false;
  std::string la, lb;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(ia, la));
    const bool gb = static_cast<bool>(std::getline(ib, lb));
    if (ga != gb) return false;
    if (!ga) return true;
    std::vector<std::string> ca, cb;
    std::stringstream sa(la), sb(lb);
    std::string cell;
    while (std::getline(sa, cell, ',')) ca.push_back(cell);
    while (std::getline(sb, cell, ',')) cb.push_back(cell);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i)
      if (i != drop_col && ca[i] != cb[i]) return false;
  }
}

bool run_criterion_10(std::string& detail) {
  const fs::path root = fs::temp_directory_path() / "gkpca_acceptance_c10";
  fs::remove_all(root);
  fs::create_directories(root);
  std::vector<std::string> problems;
  const auto note = [&problems](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
    return ok;
  };

  // gen (with .bed companions)
  const std::string gen_flags =
      "gen --m 40 --n 60 --r 3 --nsignal 500 --rkins 0.05 --seed 77 --bed "
      "--out ";
  note(run_cli(gen_flags + (root / "genA").string()) == 0, "gen exit A");
  note(run_cli(gen_flags + (root / "genB").string()) == 0, "gen exit B");
  for (const char* f : {"genotype.gmx", "genotype.bed", "genotype.bim",
                        "genotype.fam", "manifest.json"})
    note(same_bytes(root / "genA" / f, root / "genB" / f),
         std::string("gen ") + f);
  const std::string gmx = (root / "genA" / "genotype.gmx").string();

  // pca, gkl solver
  const std::string pca_flags =
      "pca " + gmx + " -k 5 --tol 1e-9 --seed 9 --standardize unit --out ";
  const int pa = run_cli(pca_flags + (root / "pcaA").string());
  const int pb = run_cli(pca_flags + (root / "pcaB").string());
  note(pa == pb && (pa == 0 || pa == 2), "pca exits");
  for (const char* f : {"singvals.csv", "U.gmx", "V.gmx", "manifest.json"})
    note(same_bytes(root / "pcaA" / f, root / "pcaB" / f),
         std::string("pca ") + f);
  note(same_json_masked(root / "pcaA" / "stats.json",
                        root / "pcaB" / "stats.json", "wall_seconds"),
       "pca stats.json");

  // pca, subspace solver
  const std::string sub_flags = "pca " + gmx +
                                " --algo subspace --variant qr -k 3 "
                                "--tol 1e-10 --seed 4 --out ";
  const int sa = run_cli(sub_flags + (root / "subA").string());
  const int sb = run_cli(sub_flags + (root / "subB").string());
  note(sa == sb && (sa == 0 || sa == 2), "subspace exits");
  for (const char* f : {"singvals.csv", "U.gmx", "V.gmx", "manifest.json"})
    note(same_bytes(root / "subA" / f, root / "subB" / f),
         std::string("subspace ") + f);
  note(same_json_masked(root / "subA" / "stats.json",
                        root / "subB" / "stats.json", "wall_seconds"),
       "subspace stats.json");

  // spectrum needs >= 100 singular values for the fit.
  note(run_cli("gen --m 160 --n 120 --r 4 --nsignal full --rkins 0.02 "
               "--seed 5 --out " + (root / "specin").string()) == 0,
       "spectrum input gen");
  const std::string spec_flags =
      "spectrum " + (root / "specin" / "genotype.gmx").string() +
      " --bins 20 --out ";
  note(run_cli(spec_flags + (root / "specA").string()) == 0, "spectrum A");
  note(run_cli(spec_flags + (root / "specB").string()) == 0, "spectrum B");
  for (const char* f :
       {"histogram.csv", "outliers.csv", "fit.json", "manifest.json"})
    note(same_bytes(root / "specA" / f, root / "specB" / f),
         std::string("spectrum ") + f);

  // bench (seconds column masked)
  const std::string bench_flags =
      "bench " + gmx + " -k 3 --tol 1e-9 --seed 12 --out ";
  note(run_cli(bench_flags + (root / "benchA").string()) == 0, "bench A");
  note(run_cli(bench_flags + (root / "benchB").string()) == 0, "bench B");
  note(same_csv_masked(root / "benchA" / "bench.csv",
                       root / "benchB" / "bench.csv", 2),
       "bench bench.csv");
  note(same_bytes(root / "benchA" / "manifest.json",
                  root / "benchB" / "manifest.json"),
       "bench manifest.json");

  // regress
  Matrix pheno(60, 1);
  for (int i = 0; i < 60; ++i)
    pheno(i, 0) = 0.05 * i + 0.2 * ((i % 3) - 1);
  gkpca::write_csv_matrix(root / "pheno.csv", pheno);
  const std::string reg_flags = "regress " + gmx + " --pheno " +
                                (root / "pheno.csv").string() +
                                " -k 2 --seed 3 --out ";
  note(run_cli(reg_flags + (root / "regA").string()) == 0, "regress A");
  note(run_cli(reg_flags + (root / "regB").string()) == 0, "regress B");
  for (const char* f : {"regression.json", "manifest.json"})
    note(same_bytes(root / "regA" / f, root / "regB" / f),
         std::string("regress ") + f);

  if (problems.empty()) {
    detail = "all reruns byte-identical";
    return true;
  }
  detail = "mismatches:";
  for (const std::string& p : problems) detail += " " + p + ";";
  return false;
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&failures](int idx, const std::string& desc, bool ok,
                                  const std::string& detail) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": "
              << desc;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++failures;
  };

  const C12 c12 = run_criteria_1_2();
  report(1,
         "top-10 values match the dense oracle on 20 seeded matrices "
         "(full+thick <= 1e-8, partial+plain <= 1e-10, under 60 s)",
         c12.accuracy,
         "worst rel err full+thick=" + fmt("%.2g", c12.worst_fro) +
             ", partial+plain=" + fmt("%.2g", c12.worst_pro) + ", " +
             fmt("%.1f", c12.seconds) + "s");
  report(2,
         "error estimates bound the true deviations; reported l1 metric "
         "majorizes the true l1 error",
         c12.bounds, "");

  std::string detail;
  bool ok;

  ok = run_criterion_3(detail);
  report(3,
         "synthetic-matrix bulk fits Marchenko-Pastur with rho < 2.0 and "
         "reduced chi2 <= 3 (under 5 min)",
         ok, detail);

  ok = run_criterion_4(detail);
  report(4,
         "outlier count at factor 1.1 in [10, 30]; >= 30 near-zero values "
         "from duplicated rows",
         ok, detail);

  ok = run_criterion_5(detail);
  report(5,
         "normalize-variant block iteration reaches inverse condition "
         "<= 1e-12 within 10 iterations",
         ok, detail);

  ok = run_criterion_6(detail);
  report(6,
         "bidiagonalization uses <= 1/5 the matvecs of qr subspace "
         "iteration at matched 1e-5 accuracy on the 10th value",
         ok, detail);

  ok = run_criterion_7(detail);
  report(7,
         "Gaussian spectrum histogram matches the MP density within 0.1 "
         "per bin; eigenvalue density mass = min(1, 1/rho) +- 1e-6",
         ok, detail);

  ok = run_criterion_8(detail);
  report(8,
         "regression fits match brute-force oracles to 1e-10; orthogonal "
         "PC adjustment decouples to 1e-12",
         ok, detail);

  ok = run_criterion_9(detail);
  report(9,
         "100 genotype matrices round-trip bit-exact through .bed and the "
         "dense format; 0x1B decodes to [0, 1, MISSING, 2]",
         ok, detail);

  ok = run_criterion_10(detail);
  report(10,
         "CLI reruns with fixed seeds are byte-identical apart from "
         "timing fields",
         ok, detail);

  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) +
                                    " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

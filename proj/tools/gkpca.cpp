/// Command-line front end: synthetic genotype generation, truncated PCA,
/// spectrum analysis against the Marchenko-Pastur law, solver benchmarks,
/// and PC-adjusted marker regression. Every subcommand writes a
/// manifest.json describing the run; outputs are deterministic for a fixed
/// seed (wall-time fields aside).

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gkpca/genio.hpp"
#include "gkpca/gkl.hpp"
#include "gkpca/linop.hpp"
#include "gkpca/regress.hpp"
#include "gkpca/rmt.hpp"
#include "gkpca/subspace.hpp"
#include "gkpca/synth.hpp"
#include "gkpca/types.hpp"

namespace fs = std::filesystem;
using gkpca::Index;
using gkpca::Matrix;
using gkpca::Vector;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUnconverged = 2;
constexpr int kExitFormat = 3;
constexpr int kExitUsage = 4;

json version_block() {
  return json{{"gkpca", kToolVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)}};
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out)
    throw gkpca::FormatError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

/// Run manifest: subcommand, flags, library versions, seed. Deliberately no
/// timestamps, so a rerun of the same command is byte-identical.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& config, std::uint64_t seed) {
  write_json_file(out_dir / "manifest.json",
                  json{{"command", command},
                       {"config", config},
                       {"seed", seed},
                       {"versions", version_block()}});
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector flatten_csv(const Matrix& M) {
  Vector v(M.size());
  Index at = 0;
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) v(at++) = M(i, j);
  return v;
}

/// Loads a dosage/dense matrix input by extension; .bed inputs are
/// mean-imputed to doubles, using companion .bim/.fam files next to the .bed.
Matrix load_matrix(const fs::path& input) {
  const std::string ext = input.extension().string();
  if (ext == ".bed") {
    fs::path bim = input;
    bim.replace_extension(".bim");
    fs::path fam = input;
    fam.replace_extension(".fam");
    return gkpca::impute_mean(gkpca::read_bed(input, bim, fam));
  }
  if (ext == ".gmx") return gkpca::read_dense(input);
  throw gkpca::FormatError(input.string() +
                           ": unsupported input format (expect .gmx or .bed)");
}

Matrix apply_standardize(Matrix M, const std::string& mode) {
  if (mode == "none") return M;
  const auto scheme = mode == "binomial" ? gkpca::ScalingScheme::kBinomial
                                         : gkpca::ScalingScheme::kUnitVariance;
  return gkpca::standardize(M, scheme).values;
}

double wall_seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  long long m = 0;
  long long n = 0;
  long long r = 0;
  std::string nsignal = "0";
  double rkins = 0.0;
  std::uint64_t seed = 0;
  std::string out = ".";
  bool bed = false;
};

int run_gen(const GenArgs& a) {
  gkpca::ModelParams p;
  p.m = static_cast<Index>(a.m);
  p.n = static_cast<Index>(a.n);
  p.r = static_cast<Index>(a.r);
  if (a.nsignal == "full") {
    p.nsignal = a.m * a.n;
  } else {
    std::size_t pos = 0;
    p.nsignal = std::stoll(a.nsignal, &pos);
    if (pos != a.nsignal.size())
      throw std::invalid_argument("--nsignal expects an integer or 'full'");
  }
  p.rkins = a.rkins;
  p.seed = a.seed;

  const Matrix X = gkpca::model(p);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  gkpca::write_dense(dir / "genotype.gmx", X);
  if (a.bed) {
    gkpca::GenotypeMatrix g;
    g.dosages = X.cast<std::uint8_t>();
    gkpca::write_bed(g, dir / "genotype.bed", dir / "genotype.bim",
                     dir / "genotype.fam");
  }
  write_manifest(dir, "gen",
                 json{{"m", a.m},
                      {"n", a.n},
                      {"r", a.r},
                      {"nsignal", p.nsignal},
                      {"rkins", a.rkins},
                      {"bed", a.bed}},
                 a.seed);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// pca

struct PcaArgs {
  std::string input;
  std::string algo = "gkl";
  long long k = 10;
  double tol = 1e-8;
  long max_mvps = 1000000;
  std::uint64_t seed = 0;
  std::string standardize = "none";
  std::string out = ".";
  // gkl
  std::string reorth = "partial";
  double omega = 1e-8;
  std::string restart = "none";
  long long max_subspace = 0;  // 0 = auto
  long long keep = 0;          // 0 = auto
  // subspace
  std::string variant = "qr";
  long long max_iters = 1000;
};

gkpca::GklOptions make_gkl_options(const PcaArgs& a, Index minmn) {
  gkpca::GklOptions o;
  o.k = static_cast<Index>(a.k);
  o.tol = a.tol;
  o.max_mvps = a.max_mvps;
  o.seed = a.seed;
  o.record_history = true;
  o.reorth = a.reorth == "full" ? gkpca::ReorthMode::kFull
                                : gkpca::ReorthMode::kPartial;
  o.omega = a.omega;
  if (a.restart == "thick") {
    o.restart = gkpca::RestartMode::kThick;
    o.max_subspace = a.max_subspace > 0
                         ? static_cast<Index>(a.max_subspace)
                         : std::max<Index>(2 * o.k, 20);
    o.max_subspace = std::min(o.max_subspace, minmn);
    o.keep = a.keep > 0 ? static_cast<Index>(a.keep)
                        : std::max<Index>(o.k, o.max_subspace / 2);
  }
  return o;
}

int run_pca(const PcaArgs& a) {
  const Matrix M = apply_standardize(load_matrix(a.input), a.standardize);
  const gkpca::DenseOperator op(M);
  const fs::path dir(a.out);
  fs::create_directories(dir);

  json stats;
  Vector singvals;
  Matrix U;
  Matrix V;
  bool converged = false;

  if (a.algo == "gkl") {
    const gkpca::GklOptions opts =
        make_gkl_options(a, std::min(M.rows(), M.cols()));
    const gkpca::SvdlResult r = gkpca::svdl(op, opts);
    singvals = r.singvals;
    U = r.U;
    V = r.V;
    converged = r.stats.converged;
    json history = json::array();
    for (const Vector& h : r.stats.ritz_history)
      history.push_back(vector_to_json(h));
    json err_history = json::array();
    for (const Vector& h : r.stats.err_history)
      err_history.push_back(vector_to_json(h));
    stats = json{{"algorithm", "gkl"},
                 {"mvps", r.stats.mvps},
                 {"steps", r.stats.steps},
                 {"restarts", r.stats.restarts},
                 {"reorth_count", r.stats.reorth_count},
                 {"deflations", r.stats.deflations},
                 {"converged", converged},
                 {"wall_seconds", r.stats.wall_seconds},
                 {"err_estimates", vector_to_json(r.err_estimates)},
                 {"ritz_history", history},
                 {"err_history", err_history}};
  } else if (a.algo == "subspace") {
    const auto variant = a.variant == "normalize"
                             ? gkpca::SubspaceVariant::kNormalize
                             : gkpca::SubspaceVariant::kQr;
    const auto start = std::chrono::steady_clock::now();
    const gkpca::SubspaceResult r = gkpca::subspace_iterate(
        op, static_cast<Index>(a.k), variant, a.tol,
        static_cast<Index>(a.max_iters), a.seed);
    const double wall = wall_seconds_since(start);
    singvals = r.singvals;
    U = r.basis;
    // Right vectors recovered from the left basis: v_i = X^T u_i / sigma_i.
    V.resize(M.cols(), U.cols());
    for (Index i = 0; i < U.cols(); ++i) {
      V.col(i) = M.transpose() * U.col(i);
      if (i < singvals.size() && singvals(i) > 0.0) V.col(i) /= singvals(i);
    }
    converged = r.converged;
    stats = json{{"algorithm", "subspace"},
                 {"variant", a.variant},
                 {"mvps", r.mvps},
                 {"iterations", r.state.iterations},
                 {"converged", converged},
                 {"rank_deficient", r.rank_deficient},
                 {"wall_seconds", wall},
                 {"delta_history", r.state.delta_history},
                 {"invcond_history", r.state.invcond_history}};
  } else {
    throw std::invalid_argument("--algo must be gkl or subspace");
  }

  gkpca::write_csv_matrix(dir / "singvals.csv", singvals);
  gkpca::write_dense(dir / "U.gmx", U);
  gkpca::write_dense(dir / "V.gmx", V);
  stats["partial_results"] = !converged;
  write_json_file(dir / "stats.json", stats);
  write_manifest(dir, "pca",
                 json{{"input", a.input},
                      {"algo", a.algo},
                      {"k", a.k},
                      {"tol", a.tol},
                      {"max_mvps", a.max_mvps},
                      {"standardize", a.standardize},
                      {"reorth", a.reorth},
                      {"omega", a.omega},
                      {"restart", a.restart},
                      {"max_subspace", a.max_subspace},
                      {"keep", a.keep},
                      {"variant", a.variant},
                      {"max_iters", a.max_iters}},
                 a.seed);
  if (!converged) {
    std::cerr << "gkpca pca: not converged within budget; partial results "
                 "written (stats.json has partial_results=true)\n";
    return kExitUnconverged;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
  std::string input;     // matrix path, or empty when --singvals is given
  std::string singvals;  // CSV of precomputed singular values
  long long bins = 30;
  double factor = 1.1;
  double aspect = 0.0;  // 0 = auto from matrix shape, else 1.0
  std::string standardize = "none";
  std::string out = ".";
};

int run_spectrum(const SpectrumArgs& a) {
  Vector values;
  double aspect = a.aspect;
  if (!a.singvals.empty()) {
    values = flatten_csv(gkpca::read_csv_matrix(a.singvals));
    if (aspect <= 0.0) aspect = 1.0;
  } else if (!a.input.empty()) {
    const Matrix M = apply_standardize(load_matrix(a.input), a.standardize);
    Eigen::BDCSVD<Matrix> svd(M);
    values = svd.singularValues();
    if (aspect <= 0.0)
      aspect = static_cast<double>(std::max(M.rows(), M.cols())) /
               static_cast<double>(std::min(M.rows(), M.cols()));
  } else {
    throw std::invalid_argument("spectrum: need an input matrix or --singvals");
  }

  const gkpca::SpectrumReport rep = gkpca::make_spectrum_report(
      values, aspect, a.factor, static_cast<Index>(a.bins));
  const Vector bulk = rep.singvals.tail(rep.singvals.size() -
                                        rep.outliers.count);
  const double chi2 =
      bulk.size() >= 10
          ? gkpca::mp_chi2_reduced(bulk, rep.fitted, static_cast<Index>(a.bins))
          : std::numeric_limits<double>::quiet_NaN();

  const fs::path dir(a.out);
  fs::create_directories(dir);
  Matrix hist(rep.hist.densities.size(), 3);
  for (Index b = 0; b < rep.hist.densities.size(); ++b) {
    hist(b, 0) = rep.hist.edges(b);
    hist(b, 1) = rep.hist.edges(b + 1);
    hist(b, 2) = rep.hist.densities(b);
  }
  gkpca::write_csv_matrix(dir / "histogram.csv", hist);
  gkpca::write_csv_matrix(dir / "outliers.csv",
                          Matrix(rep.outliers.values));
  write_json_file(
      dir / "fit.json",
      json{{"rho", rep.fitted.rho},
           {"sigma", rep.fitted.sigma},
           {"support",
            json{{"lambda_minus", rep.support.lambda_minus},
                 {"lambda_plus", rep.support.lambda_plus},
                 {"sigma_minus", rep.support.sigma_minus},
                 {"sigma_plus", rep.support.sigma_plus}}},
           {"outlier_factor", rep.outlier_factor},
           {"outlier_count", rep.outliers.count},
           {"values", rep.singvals.size()},
           {"bins", a.bins},
           {"chi2_reduced", chi2}});
  write_manifest(dir, "spectrum",
                 json{{"input", a.input},
                      {"singvals", a.singvals},
                      {"bins", a.bins},
                      {"factor", a.factor},
                      {"aspect", aspect},
                      {"standardize", a.standardize}},
                 0);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string input;
  std::string algos = "gkl-pro-nr,gkl-fro-nr,gkl-fro-tr,subspace-qr";
  long long k = 10;
  double tol = 1e-8;
  long max_mvps = 1000000;
  long long max_iters = 1000;
  long long oracle_cap = 2000;
  std::uint64_t seed = 0;
  std::string standardize = "none";
  std::string out = ".";
};

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct BenchRow {
  std::string algorithm;
  long mvps = 0;
  double seconds = 0.0;
  double l1_err = std::numeric_limits<double>::quiet_NaN();
  double rel_err_k = std::numeric_limits<double>::quiet_NaN();
};

int run_bench(const BenchArgs& a) {
  const Matrix M = apply_standardize(load_matrix(a.input), a.standardize);
  const gkpca::DenseOperator dense(M);
  const Index k = static_cast<Index>(a.k);

  const std::vector<std::string> algos = split_csv_list(a.algos);
  if (algos.empty())
    throw std::invalid_argument("bench: --algos list is empty");
  for (const std::string& name : algos) {
    if (name != "gkl-pro-nr" && name != "gkl-fro-nr" && name != "gkl-pro-tr" &&
        name != "gkl-fro-tr" && name != "subspace-qr" &&
        name != "subspace-normalize")
      throw std::invalid_argument("bench: unknown algorithm '" + name + "'");
  }

  std::optional<Vector> oracle;
  if (std::min(M.rows(), M.cols()) <= static_cast<Index>(a.oracle_cap)) {
    Eigen::BDCSVD<Matrix> svd(M);
    oracle = svd.singularValues().head(std::min<Index>(k, svd.singularValues().size()));
  } else {
    std::cerr << "gkpca bench: dense oracle skipped (min dimension "
              << std::min(M.rows(), M.cols()) << " > cap " << a.oracle_cap
              << "); error columns left as nan\n";
  }

  std::vector<BenchRow> rows;
  for (const std::string& name : algos) {
    // One counting layer per run; the solver-reported numbers must match it
    // exactly (stats invariant: no uncounted products).
    gkpca::MvpCounter counter;
    const gkpca::CountingOperator op(dense, counter);
    BenchRow row;
    row.algorithm = name;
    Vector vals;
    if (name.rfind("gkl", 0) == 0) {
      gkpca::GklOptions opts;
      opts.k = k;
      opts.tol = a.tol;
      opts.max_mvps = a.max_mvps;
      opts.seed = a.seed;
      opts.reorth = name.find("fro") != std::string::npos
                        ? gkpca::ReorthMode::kFull
                        : gkpca::ReorthMode::kPartial;
      if (name.find("-tr") != std::string::npos) {
        opts.restart = gkpca::RestartMode::kThick;
        opts.max_subspace =
            std::min(std::max<Index>(2 * k, 20), std::min(M.rows(), M.cols()));
        opts.keep = std::max<Index>(k, opts.max_subspace / 2);
      }
      const gkpca::SvdlResult r = gkpca::svdl(op, opts);
      vals = r.singvals;
      row.mvps = counter.count;
      row.seconds = r.stats.wall_seconds;
      if (r.stats.mvps != counter.count)
        throw std::logic_error("bench: solver mvp count disagrees with the "
                               "operator counter");
    } else {
      const auto variant = name == "subspace-normalize"
                               ? gkpca::SubspaceVariant::kNormalize
                               : gkpca::SubspaceVariant::kQr;
      const auto start = std::chrono::steady_clock::now();
      const gkpca::SubspaceResult r = gkpca::subspace_iterate(
          op, k, variant, a.tol, static_cast<Index>(a.max_iters), a.seed);
      row.seconds = wall_seconds_since(start);
      vals = r.singvals;
      row.mvps = counter.count;
      if (r.mvps != counter.count)
        throw std::logic_error("bench: solver mvp count disagrees with the "
                               "operator counter");
    }
    if (oracle) {
      const Index c = std::min<Index>(vals.size(), oracle->size());
      double l1 = 0.0;
      for (Index i = 0; i < c; ++i) l1 += std::abs(vals(i) - (*oracle)(i));
      row.l1_err = l1;
      if (vals.size() >= k && oracle->size() >= k && (*oracle)(k - 1) > 0.0)
        row.rel_err_k = std::abs(vals(k - 1) - (*oracle)(k - 1)) /
                        (*oracle)(k - 1);
    }
    rows.push_back(row);
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "bench.csv");
    if (!out)
      throw gkpca::FormatError("cannot open " + (dir / "bench.csv").string() +
                               " for writing");
    out << "algorithm,mvps,seconds,l1_err,rel_err_k\n";
    char buf[64];
    for (const BenchRow& r : rows) {
      out << r.algorithm << "," << r.mvps << ",";
      std::snprintf(buf, sizeof buf, "%.17g", r.seconds);
      out << buf << ",";
      std::snprintf(buf, sizeof buf, "%.17g", r.l1_err);
      out << buf << ",";
      std::snprintf(buf, sizeof buf, "%.17g", r.rel_err_k);
      out << buf << "\n";
    }
  }
  write_manifest(dir, "bench",
                 json{{"input", a.input},
                      {"algos", a.algos},
                      {"k", a.k},
                      {"tol", a.tol},
                      {"max_mvps", a.max_mvps},
                      {"max_iters", a.max_iters},
                      {"oracle_cap", a.oracle_cap},
                      {"standardize", a.standardize}},
                 a.seed);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// regress

struct RegressArgs {
  std::string input;
  std::string pheno;
  std::string design;  // optional joint design CSV (n x p)
  long long k = 0;
  double tol = 1e-8;
  long max_mvps = 1000000;
  std::uint64_t seed = 0;
  std::string standardize = "none";
  bool unbiased = false;
  std::string out = ".";
};

int run_regress(const RegressArgs& a) {
  const Matrix M = apply_standardize(load_matrix(a.input), a.standardize);
  const Index n = M.cols();
  const Matrix ph = gkpca::read_csv_matrix(a.pheno);
  if (ph.cols() != 1)
    throw gkpca::FormatError(a.pheno + ": phenotype must be a single column");
  if (ph.rows() != n)
    throw gkpca::FormatError(a.pheno + ": phenotype rows (" +
                             std::to_string(ph.rows()) +
                             ") do not match samples (" + std::to_string(n) +
                             ")");
  const Vector y = ph.col(0);

  // Sample-side principal components as nuisance covariates.
  Matrix Z(n, 0);
  bool pca_converged = true;
  long pca_mvps = 0;
  if (a.k > 0) {
    gkpca::GklOptions opts;
    opts.k = static_cast<Index>(a.k);
    opts.tol = a.tol;
    opts.max_mvps = a.max_mvps;
    opts.seed = a.seed;
    const gkpca::DenseOperator op(M);
    const gkpca::SvdlResult r = gkpca::svdl(op, opts);
    Z = r.V;
    pca_converged = r.stats.converged;
    pca_mvps = r.stats.mvps;
  }

  json result;
  if (!a.design.empty()) {
    const Matrix X = gkpca::read_csv_matrix(a.design);
    if (X.rows() != n)
      throw gkpca::FormatError(a.design + ": design rows do not match samples");
    json entry;
    try {
      if (Z.cols() > 0) {
        const gkpca::PcAdjustedResult fit =
            gkpca::pc_adjusted_fit(X, Z, y, a.unbiased);
        entry = json{{"beta", vector_to_json(fit.beta_hat)},
                     {"gamma", vector_to_json(fit.gamma_hat)},
                     {"sigma2", fit.joint.sigma2_hat}};
        Vector se(fit.beta_hat.size());
        for (Index i = 0; i < se.size(); ++i)
          se(i) = std::sqrt(fit.cov_beta(i, i));
        entry["se"] = vector_to_json(se);
      } else {
        const gkpca::RegressionResult fit = gkpca::ols_fit(X, y, a.unbiased);
        entry = json{{"beta", vector_to_json(fit.beta_hat)},
                     {"sigma2", fit.sigma2_hat}};
        Vector se(fit.beta_hat.size());
        for (Index i = 0; i < se.size(); ++i)
          se(i) = std::sqrt(fit.cov_beta(i, i));
        entry["se"] = vector_to_json(se);
      }
    } catch (const gkpca::RankDeficiencyError& e) {
      entry = json{{"error", e.what()}, {"column", e.column}};
    }
    result = json{{"mode", "design"},
                  {"k", a.k},
                  {"pca_converged", pca_converged},
                  {"pca_mvps", pca_mvps},
                  {"fit", entry}};
  } else {
    // Per-marker scan: X_i = [intercept, marker dosages], PCs in Z.
    json markers = json::array();
    Matrix X(n, 2);
    X.col(0).setOnes();
    for (Index i = 0; i < M.rows(); ++i) {
      X.col(1) = M.row(i).transpose();
      json entry{{"marker", i}};
      try {
        double beta;
        double se;
        double intercept;
        double sigma2;
        if (Z.cols() > 0) {
          const gkpca::PcAdjustedResult fit =
              gkpca::pc_adjusted_fit(X, Z, y, a.unbiased);
          beta = fit.beta_hat(1);
          intercept = fit.beta_hat(0);
          se = std::sqrt(fit.cov_beta(1, 1));
          sigma2 = fit.joint.sigma2_hat;
        } else {
          const gkpca::RegressionResult fit = gkpca::ols_fit(X, y, a.unbiased);
          beta = fit.beta_hat(1);
          intercept = fit.beta_hat(0);
          se = std::sqrt(fit.cov_beta(1, 1));
          sigma2 = fit.sigma2_hat;
        }
        entry["beta"] = beta;
        entry["se"] = se;
        entry["intercept"] = intercept;
        entry["sigma2"] = sigma2;
      } catch (const gkpca::RankDeficiencyError& e) {
        // Constant or PC-collinear marker: report and keep scanning.
        entry["error"] = e.what();
        entry["column"] = e.column;
      }
      markers.push_back(entry);
    }
    result = json{{"mode", "per-marker"},
                  {"k", a.k},
                  {"pca_converged", pca_converged},
                  {"pca_mvps", pca_mvps},
                  {"markers", markers}};
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_json_file(dir / "regression.json", result);
  write_manifest(dir, "regress",
                 json{{"input", a.input},
                      {"pheno", a.pheno},
                      {"design", a.design},
                      {"k", a.k},
                      {"tol", a.tol},
                      {"max_mvps", a.max_mvps},
                      {"standardize", a.standardize},
                      {"unbiased", a.unbiased}},
                 a.seed);
  if (!pca_converged) {
    std::cerr << "gkpca regress: PCA step not converged; results use the "
                 "partial basis\n";
    return kExitUnconverged;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated SVD / PCA toolkit for tall genotype matrices"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads for dense kernels (0 = library default)");

  GenArgs gen;
  CLI::App* cmd_gen =
      app.add_subcommand("gen", "Generate a synthetic genotype matrix");
  cmd_gen->add_option("--m", gen.m, "Markers (rows)")->required();
  cmd_gen->add_option("--n", gen.n, "Samples (columns)")->required();
  cmd_gen->add_option("--r", gen.r, "Admixture blocks");
  cmd_gen->add_option("--nsignal", gen.nsignal,
                      "Random single-entry writes (integer or 'full' = m*n)");
  cmd_gen->add_option("--rkins", gen.rkins,
                      "Kinship duplication rate in [0, 1]");
  cmd_gen->add_option("--seed", gen.seed, "RNG seed");
  cmd_gen->add_option("--out", gen.out, "Output directory");
  cmd_gen->add_flag("--bed", gen.bed, "Also write PLINK .bed/.bim/.fam");

  PcaArgs pca;
  CLI::App* cmd_pca =
      app.add_subcommand("pca", "Truncated SVD of a genotype/dense matrix");
  cmd_pca->add_option("input", pca.input, "Input matrix (.gmx or .bed)")
      ->required();
  cmd_pca->add_option("--algo", pca.algo, "Solver: gkl or subspace")
      ->check(CLI::IsMember({"gkl", "subspace"}));
  cmd_pca->add_option("-k,--k", pca.k, "Singular triplets requested");
  cmd_pca->add_option("--tol", pca.tol, "Convergence tolerance");
  cmd_pca->add_option("--max-mvps", pca.max_mvps,
                      "Matrix-vector product budget (gkl)");
  cmd_pca->add_option("--seed", pca.seed, "Start-vector seed");
  cmd_pca->add_option("--standardize", pca.standardize,
                      "Row standardization: none, unit or binomial")
      ->check(CLI::IsMember({"none", "unit", "binomial"}));
  cmd_pca->add_option("--out", pca.out, "Output directory");
  cmd_pca->add_option("--reorth", pca.reorth,
                      "gkl reorthogonalization: partial or full")
      ->check(CLI::IsMember({"partial", "full"}));
  cmd_pca->add_option("--omega", pca.omega,
                      "gkl semiorthogonality threshold (partial mode)");
  cmd_pca->add_option("--restart", pca.restart, "gkl restart: none or thick")
      ->check(CLI::IsMember({"none", "thick"}));
  cmd_pca->add_option("--max-subspace", pca.max_subspace,
                      "gkl thick-restart cycle length (0 = max(2k, 20))");
  cmd_pca->add_option("--keep", pca.keep,
                      "gkl thick-restart retained pairs (0 = half the cycle)");
  cmd_pca->add_option("--variant", pca.variant,
                      "subspace renormalization: qr or normalize")
      ->check(CLI::IsMember({"qr", "normalize"}));
  cmd_pca->add_option("--max-iters", pca.max_iters,
                      "subspace iteration limit");

  SpectrumArgs spectrum;
  CLI::App* cmd_spectrum = app.add_subcommand(
      "spectrum", "Marchenko-Pastur bulk fit and outlier report");
  cmd_spectrum->add_option("input", spectrum.input,
                           "Input matrix (.gmx or .bed), dense SVD path");
  cmd_spectrum->add_option("--singvals", spectrum.singvals,
                           "Precomputed singular values (CSV)");
  cmd_spectrum->add_option("--bins", spectrum.bins, "Histogram bins");
  cmd_spectrum->add_option("--factor", spectrum.factor,
                           "Outlier threshold factor on sigma_plus");
  cmd_spectrum->add_option("--aspect", spectrum.aspect,
                           "Aspect-ratio hint for the fit (0 = auto)");
  cmd_spectrum->add_option("--standardize", spectrum.standardize,
                           "Row standardization: none, unit or binomial")
      ->check(CLI::IsMember({"none", "unit", "binomial"}));
  cmd_spectrum->add_option("--out", spectrum.out, "Output directory");

  BenchArgs bench;
  CLI::App* cmd_bench = app.add_subcommand(
      "bench", "Compare solvers on one operator with shared mvp counting");
  cmd_bench->add_option("input", bench.input, "Input matrix (.gmx or .bed)")
      ->required();
  cmd_bench->add_option("--algos", bench.algos,
                        "Comma list from: gkl-pro-nr, gkl-fro-nr, gkl-pro-tr, "
                        "gkl-fro-tr, subspace-qr, subspace-normalize");
  cmd_bench->add_option("-k,--k", bench.k, "Singular triplets requested");
  cmd_bench->add_option("--tol", bench.tol, "Convergence tolerance");
  cmd_bench->add_option("--max-mvps", bench.max_mvps,
                        "Matrix-vector product budget (gkl)");
  cmd_bench->add_option("--max-iters", bench.max_iters,
                        "subspace iteration limit");
  cmd_bench->add_option("--oracle-cap", bench.oracle_cap,
                        "Skip the dense oracle above this min-dimension");
  cmd_bench->add_option("--seed", bench.seed, "Shared start-vector seed")
      ->required();
  cmd_bench->add_option("--standardize", bench.standardize,
                        "Row standardization: none, unit or binomial")
      ->check(CLI::IsMember({"none", "unit", "binomial"}));
  cmd_bench->add_option("--out", bench.out, "Output directory");

  RegressArgs regress;
  CLI::App* cmd_regress = app.add_subcommand(
      "regress", "Per-marker regression with PC adjustment");
  cmd_regress->add_option("input", regress.input,
                          "Genotype matrix (.gmx or .bed)")
      ->required();
  cmd_regress->add_option("--pheno", regress.pheno,
                          "Phenotype CSV (one column, one row per sample)")
      ->required();
  cmd_regress->add_option("--design", regress.design,
                          "Joint design CSV instead of the per-marker scan");
  cmd_regress->add_option("-k,--k", regress.k,
                          "Principal components to adjust for");
  cmd_regress->add_option("--tol", regress.tol, "PCA tolerance");
  cmd_regress->add_option("--max-mvps", regress.max_mvps, "PCA mvp budget");
  cmd_regress->add_option("--seed", regress.seed, "PCA start-vector seed");
  cmd_regress->add_option("--standardize", regress.standardize,
                          "Row standardization before PCA/scan")
      ->check(CLI::IsMember({"none", "unit", "binomial"}));
  cmd_regress->add_flag("--unbiased", regress.unbiased,
                        "Divide residual variance by n - p instead of n");
  cmd_regress->add_option("--out", regress.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (threads > 0) Eigen::setNbThreads(threads);

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_pca->parsed()) return run_pca(pca);
    if (cmd_spectrum->parsed()) return run_spectrum(spectrum);
    if (cmd_bench->parsed()) return run_bench(bench);
    if (cmd_regress->parsed()) return run_regress(regress);
  } catch (const gkpca::FormatError& e) {
    std::cerr << "gkpca: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::invalid_argument& e) {
    std::cerr << "gkpca: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "gkpca: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}

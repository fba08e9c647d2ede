#pragma once

#include "gkpca/types.hpp"

namespace gkpca {

/// Marchenko-Pastur parameters: rho is the aspect ratio (larger dimension
/// over smaller, so rho >= 1 for the usual orientation, though any rho > 0
/// is accepted), sigma the entry scale.
struct MpParams {
  double rho = 1.0;
  double sigma = 1.0;
};

/// Support edges: eigenvalue domain [lambda_minus, lambda_plus] and
/// singular-value domain [sigma_minus, sigma_plus] (square roots).
struct MpSupport {
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double sigma_minus = 0.0;
  double sigma_plus = 0.0;
};

MpSupport mp_support(const MpParams& p);

/// Bulk eigenvalue density
///   p(xi) = sqrt((lambda_plus - xi)(xi - lambda_minus)) / (2 pi sigma^2 rho xi)
/// on the support, 0 outside. Integrates to min(1, 1/rho); the deficit for
/// rho > 1 accounts for the zero eigenvalues of the rank-deficient Gram
/// matrix.
double mp_pdf_eig(double xi, const MpParams& p);

/// Bulk singular-value density
///   p(x) = sqrt((sigma_plus^2 - x^2)(x^2 - sigma_minus^2))
///          / (pi sigma^2 min(1, rho) x)
/// on [sigma_minus, sigma_plus], 0 outside; integrates to 1 for every rho.
double mp_pdf_sv(double x, const MpParams& p);

/// CDF of mp_pdf_sv by adaptive Simpson quadrature. The integration runs in
/// the substituted variable x^2 = sigma_-^2 + (sigma_+^2 - sigma_-^2)
/// (1 - cos t)/2, which absorbs the square-root edge factors into sin t and
/// leaves a smooth integrand.
double mp_cdf_sv(double x, const MpParams& p);

/// Fits (rho, sigma) to the bulk of a singular-value sample by least-squares
/// distance between the model and empirical CDFs, evaluated at the sample
/// points. Values above the 99th percentile are trimmed before fitting so
/// spike outliers do not drag the edge. Requires >= 100 values; throws
/// std::invalid_argument on too-few or degenerate (all equal) input.
/// aspect_hint seeds the optimizer with the naive dimension ratio.
MpParams fit_bulk(const Eigen::Ref<const Vector>& singvals,
                  double aspect_hint);

/// Values strictly above factor * sigma_plus, descending.
struct OutlierSet {
  Index count = 0;
  Vector values;
};

OutlierSet count_outliers(const Eigen::Ref<const Vector>& singvals,
                          const MpParams& p, double factor);

/// Equal-width density histogram: sum(density * width) = 1. A degenerate
/// (single-point) range falls back to one unit-width bin centered on the
/// value.
struct HistogramData {
  Vector edges;      // bins + 1 ascending edges
  Vector densities;  // bins entries
};

HistogramData histogram(const Eigen::Ref<const Vector>& values, Index bins);

/// Pearson goodness-of-fit of `bulk` against mp_pdf_sv restricted to the
/// histogram range: adjacent bins are merged until every expected count is
/// >= 5, and the statistic is divided by (effective bins - 3), charging the
/// two fitted parameters.
double mp_chi2_reduced(const Eigen::Ref<const Vector>& bulk,
                       const MpParams& p, Index bins);

/// One-stop summary used by the spectrum command.
struct SpectrumReport {
  Vector singvals;          // descending
  MpParams fitted;
  MpSupport support;
  double outlier_factor = 1.1;
  OutlierSet outliers;
  HistogramData hist;       // non-outlier values
};

SpectrumReport make_spectrum_report(const Eigen::Ref<const Vector>& singvals,
                                    double aspect_hint, double outlier_factor,
                                    Index bins);

}  // namespace gkpca

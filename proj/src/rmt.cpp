#include "gkpca/rmt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gkpca {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

void check_params(const MpParams& p) {
  if (!(p.rho > 0.0) || !(p.sigma > 0.0))
    throw std::invalid_argument("MpParams: rho and sigma must be positive");
}

// Integrand of the singular-value density after the substitution
// x^2 = a + h (1 - cos t), a = sigma_-^2, h = (sigma_+^2 - a)/2.
// The sqrt edge factors reduce to h sin t, so the integrand
// g(t) = h^2 sin^2 t / (2 pi sigma^2 min(1,rho) x^2(t)) is smooth on [0,pi];
// at a = 0 the x^2 in the denominator cancels a (1 - cos t) factor exactly.
class SvDensitySubstituted {
 public:
  explicit SvDensitySubstituted(const MpParams& p) {
    const MpSupport s = mp_support(p);
    a_ = s.sigma_minus * s.sigma_minus;
    h_ = 0.5 * (s.sigma_plus * s.sigma_plus - a_);
    norm_ = 2.0 * kPi * p.sigma * p.sigma * std::min(1.0, p.rho);
  }

  double operator()(double t) const {
    const double c = std::cos(t);
    const double one_m = 1.0 - c;
    const double one_p = 1.0 + c;
    const double x2 = a_ + h_ * one_m;
    const double cancel = x2 > 0.0 ? h_ * one_m / x2 : 1.0;  // a = 0 limit
    return cancel * h_ * one_p / norm_;
  }

  // t corresponding to x, clamped into [0, pi].
  double t_of(double x) const {
    const double x2 = x * x;
    if (h_ <= 0.0) return x2 >= a_ ? kPi : 0.0;
    const double c = 1.0 - (x2 - a_) / h_;
    return std::acos(std::min(1.0, std::max(-1.0, c)));
  }

 private:
  double a_ = 0.0;
  double h_ = 0.0;
  double norm_ = 1.0;
};

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 36);
}

// Cumulative model CDF at ascending points, one quadrature sweep.
std::vector<double> cdf_at_sorted(const std::vector<double>& ascending,
                                  const MpParams& p) {
  const SvDensitySubstituted g(p);
  std::vector<double> out(ascending.size());
  double acc = 0.0;
  double t_prev = 0.0;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    const double t = g.t_of(ascending[i]);
    if (t > t_prev) {
      acc += adaptive_simpson([&g](double u) { return g(u); }, t_prev, t,
                              1e-10);
      t_prev = t;
    }
    out[i] = std::min(1.0, acc);
  }
  return out;
}

double quantile_sorted(const std::vector<double>& ascending, double q) {
  const double pos = q * static_cast<double>(ascending.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= ascending.size()) return ascending.back();
  const double frac = pos - static_cast<double>(lo);
  return ascending[lo] + frac * (ascending[lo + 1] - ascending[lo]);
}

// Quantile of the model singular-value law via cumulative Simpson on a
// fixed grid in t; only used to seed the optimizer.
double mp_sv_quantile(const MpParams& p, double q) {
  const SvDensitySubstituted g(p);
  constexpr int kPanels = 256;
  std::array<double, kPanels + 1> cum{};
  const double dt = kPi / kPanels;
  double acc = 0.0;
  double f_lo = g(0.0);
  for (int i = 0; i < kPanels; ++i) {
    const double t_mid = (i + 0.5) * dt;
    const double t_hi = (i + 1.0) * dt;
    const double f_hi = g(t_hi);
    acc += dt / 6.0 * (f_lo + 4.0 * g(t_mid) + f_hi);
    cum[static_cast<std::size_t>(i) + 1] = acc;
    f_lo = f_hi;
  }
  const double target = q * acc;
  int i = 0;
  while (i < kPanels && cum[static_cast<std::size_t>(i) + 1] < target) ++i;
  const double c0 = cum[static_cast<std::size_t>(i)];
  const double c1 = cum[static_cast<std::size_t>(i) + 1];
  const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.5;
  const double t = (i + frac) * dt;
  const MpSupport s = mp_support(p);
  const double a = s.sigma_minus * s.sigma_minus;
  const double h = 0.5 * (s.sigma_plus * s.sigma_plus - a);
  return std::sqrt(a + h * (1.0 - std::cos(t)));
}

// Nelder-Mead in 2 dimensions; small, deterministic, good enough for a
// smooth 2-parameter objective.
std::array<double, 2> nelder_mead2(
    const std::function<double(const std::array<double, 2>&)>& f,
    std::array<double, 2> start, double step, int max_iter) {
  std::array<std::array<double, 2>, 3> x{
      start,
      {start[0] + step, start[1]},
      {start[0], start[1] + step},
  };
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> ord{0, 1, 2};
    std::sort(ord.begin(), ord.end(),
              [&fx](int i, int j) { return fx[i] < fx[j]; });
    const auto& best = x[static_cast<std::size_t>(ord[0])];
    const auto& mid = x[static_cast<std::size_t>(ord[1])];
    auto& worst = x[static_cast<std::size_t>(ord[2])];
    double& f_worst = fx[static_cast<std::size_t>(ord[2])];
    const double f_best = fx[static_cast<std::size_t>(ord[0])];
    const double f_mid = fx[static_cast<std::size_t>(ord[1])];
    if (std::abs(f_worst - f_best) <=
        1e-14 + 1e-10 * (std::abs(f_best) + std::abs(f_worst)))
      break;
    const std::array<double, 2> centroid{0.5 * (best[0] + mid[0]),
                                         0.5 * (best[1] + mid[1])};
    auto blend = [&](double coef) {
      return std::array<double, 2>{centroid[0] + coef * (centroid[0] - worst[0]),
                                   centroid[1] + coef * (centroid[1] - worst[1])};
    };
    const auto refl = blend(1.0);
    const double f_refl = f(refl);
    if (f_refl < f_best) {
      const auto expa = blend(2.0);
      const double f_expa = f(expa);
      if (f_expa < f_refl) {
        worst = expa;
        f_worst = f_expa;
      } else {
        worst = refl;
        f_worst = f_refl;
      }
    } else if (f_refl < f_mid) {
      worst = refl;
      f_worst = f_refl;
    } else {
      const auto contr = blend(f_refl < f_worst ? 0.5 : -0.5);
      const double f_contr = f(contr);
      if (f_contr < std::min(f_refl, f_worst)) {
        worst = contr;
        f_worst = f_contr;
      } else {  // shrink toward the best vertex
        for (int i = 0; i < 3; ++i) {
          if (i == ord[0]) continue;
          auto& xi = x[static_cast<std::size_t>(i)];
          xi[0] = best[0] + 0.5 * (xi[0] - best[0]);
          xi[1] = best[1] + 0.5 * (xi[1] - best[1]);
          fx[static_cast<std::size_t>(i)] = f(xi);
        }
      }
    }
  }
  std::array<int, 3> ord{0, 1, 2};
  std::sort(ord.begin(), ord.end(),
            [&fx](int i, int j) { return fx[i] < fx[j]; });
  return x[static_cast<std::size_t>(ord[0])];
}

}  // namespace

MpSupport mp_support(const MpParams& p) {
  check_params(p);
  const double sr = std::sqrt(p.rho);
  const double s2 = p.sigma * p.sigma;
  MpSupport out;
  out.lambda_minus = s2 * (1.0 - sr) * (1.0 - sr);
  out.lambda_plus = s2 * (1.0 + sr) * (1.0 + sr);
  out.sigma_minus = p.sigma * std::abs(1.0 - sr);
  out.sigma_plus = p.sigma * (1.0 + sr);
  return out;
}

double mp_pdf_eig(double xi, const MpParams& p) {
  const MpSupport s = mp_support(p);
  if (xi <= s.lambda_minus || xi >= s.lambda_plus) return 0.0;
  const double num = std::sqrt((s.lambda_plus - xi) * (xi - s.lambda_minus));
  return num / (2.0 * kPi * p.sigma * p.sigma * p.rho * xi);
}

double mp_pdf_sv(double x, const MpParams& p) {
  const MpSupport s = mp_support(p);
  if (x <= s.sigma_minus || x >= s.sigma_plus) return 0.0;
  const double x2 = x * x;
  const double num = std::sqrt((s.sigma_plus * s.sigma_plus - x2) *
                               (x2 - s.sigma_minus * s.sigma_minus));
  return num / (kPi * p.sigma * p.sigma * std::min(1.0, p.rho) * x);
}

double mp_cdf_sv(double x, const MpParams& p) {
  check_params(p);
  const SvDensitySubstituted g(p);
  const double t = g.t_of(x);
  if (t <= 0.0) return 0.0;
  return std::min(
      1.0, adaptive_simpson([&g](double u) { return g(u); }, 0.0, t, 1e-10));
}

MpParams fit_bulk(const Eigen::Ref<const Vector>& singvals,
                  double aspect_hint) {
  if (singvals.size() < 100)
    throw std::invalid_argument("fit_bulk: need at least 100 singular values");
  if (!(aspect_hint > 0.0))
    throw std::invalid_argument("fit_bulk: aspect_hint must be positive");
  std::vector<double> sorted(singvals.data(),
                             singvals.data() + singvals.size());
  std::sort(sorted.begin(), sorted.end());
  const double spread = sorted.back() - sorted.front();
  if (!(spread > 1e-12 * std::max(1.0, std::abs(sorted.back()))))
    throw std::invalid_argument("fit_bulk: degenerate spectrum");

  // Trim the top percent so spikes do not drag the bulk edge.
  const double cutoff = quantile_sorted(sorted, 0.99);
  std::vector<double> bulk;
  bulk.reserve(sorted.size());
  for (double v : sorted)
    if (v <= cutoff) bulk.push_back(v);
  const auto nb = static_cast<double>(bulk.size());

  // Evaluate the CDF mismatch on at most 400 order statistics.
  const std::size_t npts = std::min<std::size_t>(bulk.size(), 400);
  std::vector<double> xs(npts), femp(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    const auto rank = static_cast<std::size_t>(
        (static_cast<double>(i) + 0.5) / static_cast<double>(npts) * nb);
    const std::size_t r = std::min(rank, bulk.size() - 1);
    xs[i] = bulk[r];
    femp[i] = (static_cast<double>(r) + 0.5) / nb;
  }

  const double rho0 = std::min(std::max(aspect_hint, 0.05), 20.0);
  const double med = quantile_sorted(bulk, 0.5);
  if (!(med > 0.0))
    throw std::invalid_argument("fit_bulk: degenerate spectrum (median 0)");
  const double med_model = mp_sv_quantile({rho0, 1.0}, 0.5);
  const double sigma0 = med / med_model;

  auto objective = [&xs, &femp](const std::array<double, 2>& log_params) {
    const MpParams p{std::exp(log_params[0]), std::exp(log_params[1])};
    if (p.rho < 1e-3 || p.rho > 1e3 || p.sigma < 1e-12)
      return std::numeric_limits<double>::max();
    const std::vector<double> fmp = cdf_at_sorted(xs, p);
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = fmp[i] - femp[i];
      acc += d * d;
    }
    return acc / static_cast<double>(xs.size());
  };

  const auto best = nelder_mead2(
      objective, {std::log(rho0), std::log(sigma0)}, 0.25, 300);
  return {std::exp(best[0]), std::exp(best[1])};
}

OutlierSet count_outliers(const Eigen::Ref<const Vector>& singvals,
                          const MpParams& p, double factor) {
  const double threshold = factor * mp_support(p).sigma_plus;
  std::vector<double> hits;
  for (Index i = 0; i < singvals.size(); ++i)
    if (singvals[i] > threshold) hits.push_back(singvals[i]);
  std::sort(hits.begin(), hits.end(), std::greater<double>());
  OutlierSet out;
  out.count = static_cast<Index>(hits.size());
  out.values = Eigen::Map<const Vector>(hits.data(),
                                        static_cast<Index>(hits.size()));
  return out;
}

HistogramData histogram(const Eigen::Ref<const Vector>& values, Index bins) {
  if (bins <= 0) throw std::invalid_argument("histogram: bins must be > 0");
  if (values.size() == 0)
    throw std::invalid_argument("histogram: empty sample");
  double lo = values.minCoeff();
  double hi = values.maxCoeff();
  if (!(hi > lo)) {  // all values equal: one unit-width bin worth of range
    lo -= 0.5;
    hi += 0.5;
  }
  HistogramData out;
  out.edges.resize(bins + 1);
  for (Index b = 0; b <= bins; ++b)
    out.edges[b] = lo + (hi - lo) * static_cast<double>(b) /
                            static_cast<double>(bins);
  out.densities = Vector::Zero(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (Index i = 0; i < values.size(); ++i) {
    auto b = static_cast<Index>((values[i] - lo) / (hi - lo) *
                                static_cast<double>(bins));
    b = std::min(std::max<Index>(b, 0), bins - 1);
    out.densities[b] += 1.0;
  }
  out.densities /= static_cast<double>(values.size()) * width;
  return out;
}

double mp_chi2_reduced(const Eigen::Ref<const Vector>& bulk, const MpParams& p,
                       Index bins) {
  if (bulk.size() < 10)
    throw std::invalid_argument("mp_chi2_reduced: too few values");
  const HistogramData hist = histogram(bulk, bins);
  const auto n = static_cast<double>(bulk.size());
  const double width = hist.edges[1] - hist.edges[0];

  // Expected probabilities conditioned on the histogram range.
  std::vector<double> observed(static_cast<std::size_t>(bins));
  std::vector<double> expected(static_cast<std::size_t>(bins));
  const double f_lo = mp_cdf_sv(hist.edges[0], p);
  const double f_hi = mp_cdf_sv(hist.edges[bins], p);
  const double mass = f_hi - f_lo;
  if (!(mass > 1e-12)) return std::numeric_limits<double>::infinity();
  double prev = f_lo;
  for (Index b = 0; b < bins; ++b) {
    const double next = mp_cdf_sv(hist.edges[b + 1], p);
    expected[static_cast<std::size_t>(b)] = n * (next - prev) / mass;
    observed[static_cast<std::size_t>(b)] = hist.densities[b] * n * width;
    prev = next;
  }

  // Merge adjacent bins until each expected count reaches 5.
  std::vector<double> obs_m, exp_m;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t b = 0; b < expected.size(); ++b) {
    o_acc += observed[b];
    e_acc += expected[b];
    if (e_acc >= 5.0) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (!exp_m.empty()) {
      obs_m.back() += o_acc;
      exp_m.back() += e_acc;
    } else {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
    }
  }
  if (exp_m.size() < 4) return std::numeric_limits<double>::infinity();

  double chi2 = 0.0;
  for (std::size_t b = 0; b < exp_m.size(); ++b) {
    const double d = obs_m[b] - exp_m[b];
    chi2 += d * d / exp_m[b];
  }
  const auto dof = static_cast<double>(exp_m.size()) - 3.0;
  return chi2 / dof;
}

SpectrumReport make_spectrum_report(const Eigen::Ref<const Vector>& singvals,
                                    double aspect_hint, double outlier_factor,
                                    Index bins) {
  SpectrumReport rep;
  rep.singvals = singvals;
  std::sort(rep.singvals.data(), rep.singvals.data() + rep.singvals.size(),
            std::greater<double>());
  rep.fitted = fit_bulk(rep.singvals, aspect_hint);
  rep.support = mp_support(rep.fitted);
  rep.outlier_factor = outlier_factor;
  rep.outliers = count_outliers(rep.singvals, rep.fitted, outlier_factor);
  const Index nbulk = rep.singvals.size() - rep.outliers.count;
  rep.hist = histogram(rep.singvals.tail(nbulk), bins);
  return rep;
}

}  // namespace gkpca

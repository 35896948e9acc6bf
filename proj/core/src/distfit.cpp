#include "vidmeter/distfit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vidmeter/error.hpp"

namespace vidmeter {

namespace {

std::vector<double> checked_logs(std::span<const double> samples) {
  if (samples.empty()) raise(Errc::empty_input, "no samples");
  std::vector<double> logs;
  logs.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] > 0.0)) {
      raise(Errc::non_positive_sample,
            "sample " + std::to_string(i) + " = " + std::to_string(samples[i]));
    }
    logs.push_back(std::log(samples[i]));
  }
  return logs;
}

}  // namespace

LognormalFit fit_lognormal(std::span<const double> samples) {
  const auto logs = checked_logs(samples);
  const auto n = static_cast<double>(logs.size());
  double mean = 0.0;
  for (double v : logs) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : logs) {
    const double d = v - mean;
    ss += d * d;
  }
  return LognormalFit{mean, std::sqrt(ss / n), logs.size()};
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    raise(Errc::domain_error, "probability must be inside (0, 1)");
  }

  // Acklam's rational approximation, then one Halley refinement against the
  // erfc-based CDF; the result is accurate to a few ulp.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double err = normal_cdf(x) - p;
  const double u =
      err * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

double lognormal_cdf(double x, const LognormalFit& fit) {
  if (x <= 0.0) return 0.0;
  if (fit.sdlog == 0.0) {
    return std::log(x) < fit.meanlog ? 0.0 : 1.0;
  }
  return normal_cdf((std::log(x) - fit.meanlog) / fit.sdlog);
}

double lognormal_quantile(double p, const LognormalFit& fit) {
  return std::exp(fit.meanlog + fit.sdlog * normal_quantile(p));
}

double ks_statistic(std::span<const double> samples, const LognormalFit& fit) {
  auto logs = checked_logs(samples);  // validates positivity
  (void)logs;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double model = lognormal_cdf(sorted[i], fit);
    const double upper = static_cast<double>(i + 1) / n - model;
    const double lower = model - static_cast<double>(i) / n;
    d = std::max({d, upper, lower});
  }
  return d;
}

EcdfTable ecdf(std::span<const double> samples) {
  if (samples.empty()) raise(Errc::empty_input, "no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  EcdfTable table;
  table.reserve(sorted.size());
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    table.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return table;
}

}  // namespace vidmeter

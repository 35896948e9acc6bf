#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vidmeter {

/// Maximum-likelihood lognormal parameters (log-space mean and population
/// standard deviation) plus the sample count they were fitted from.
struct LognormalFit {
  double meanlog = 0.0;
  double sdlog = 0.0;
  std::size_t n = 0;

  bool operator==(const LognormalFit&) const = default;
};

struct EcdfPoint {
  double value = 0.0;
  double probability = 0.0;  // i/n, right-continuous steps
};
using EcdfTable = std::vector<EcdfPoint>;

/// MLE fit: meanlog = mean(ln x), sdlog = population stddev(ln x).
LognormalFit fit_lognormal(std::span<const double> samples);

/// Standard normal quantile, |error| well below 1e-9 over (0, 1).
double normal_quantile(double p);

double normal_cdf(double x);

double lognormal_cdf(double x, const LognormalFit& fit);

/// exp(meanlog + sdlog * Phi^-1(p)); DomainError outside (0, 1).
double lognormal_quantile(double p, const LognormalFit& fit);

/// Two-sided Kolmogorov-Smirnov statistic of the samples against the fitted
/// model, sup over the empirical step function. Reported raw with n; no
/// p-value is attached because the parameters were estimated from the same
/// samples.
double ks_statistic(std::span<const double> samples, const LognormalFit& fit);

/// Samples sorted ascending, paired with cumulative probabilities i/n.
/// Duplicates keep one step each; the last duplicate carries the upper step.
EcdfTable ecdf(std::span<const double> samples);

}  // namespace vidmeter

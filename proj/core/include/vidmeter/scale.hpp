#pragma once

#include <string>

#include "vidmeter/trace.hpp"

namespace vidmeter {

/// Linearly rescale a trace so its mean becomes target_mean_kbps:
/// out_i = in_i * target_mean / mean(in). Shape, length and burstiness are
/// preserved exactly; ZeroMeanTrace when the input mean is zero.
BitrateTrace scale_trace(const BitrateTrace& orig, double target_mean_kbps);

/// Mean absolute per-interval error of sim against orig, normalized by the
/// mean of orig (not per-point), in percent.
double mape(const BitrateTrace& orig, const BitrateTrace& sim);

struct SimulationReport {
  BitrateTrace scaled;
  double mape_percent = 0.0;
  double pearson = 0.0;
  double cutoff = 0.0;
  std::string warning;  // non-empty when lengths differed
};

/// Simulate the reference resolution from orig: truncate both at the cutoff,
/// compare over the common prefix, scale orig to the reference's mean, and
/// report MAPE against the reference plus the correlation between the two.
SimulationReport simulate_resolution(const BitrateTrace& orig,
                                     const BitrateTrace& reference,
                                     double cutoff = 180.0);

}  // namespace vidmeter

#include "vidmeter/scale.hpp"

#include <cmath>

#include "vidmeter/error.hpp"

namespace vidmeter {

BitrateTrace scale_trace(const BitrateTrace& orig, double target_mean_kbps) {
  if (orig.empty()) raise(Errc::empty_trace, "trace has no values");
  if (!(target_mean_kbps > 0.0)) {
    raise(Errc::domain_error, "target mean must be > 0");
  }
  const double mean = orig.mean();
  if (mean <= 0.0) raise(Errc::zero_mean_trace, "original trace mean is zero");

  BitrateTrace out = orig;
  const double factor = target_mean_kbps / mean;
  for (auto& v : out.values) v *= factor;
  return out;
}

double mape(const BitrateTrace& orig, const BitrateTrace& sim) {
  if (orig.size() != sim.size()) {
    raise(Errc::length_mismatch, "traces have lengths " +
                                     std::to_string(orig.size()) + " and " +
                                     std::to_string(sim.size()));
  }
  if (orig.empty()) raise(Errc::empty_trace, "trace has no values");
  const double mean = orig.mean();
  if (mean <= 0.0) raise(Errc::zero_mean_trace, "original trace mean is zero");

  double sum = 0.0;
  for (std::size_t i = 0; i < orig.size(); ++i) {
    sum += std::abs(orig.values[i] - sim.values[i]);
  }
  return sum / static_cast<double>(orig.size()) / mean * 100.0;
}

SimulationReport simulate_resolution(const BitrateTrace& orig,
                                     const BitrateTrace& reference,
                                     double cutoff) {
  if (orig.interval != reference.interval) {
    raise(Errc::domain_error, "traces have different intervals");
  }
  BitrateTrace a = truncate(orig, cutoff);
  BitrateTrace b = truncate(reference, cutoff);

  SimulationReport report;
  report.cutoff = cutoff;
  if (a.size() != b.size()) {
    const std::size_t common = std::min(a.size(), b.size());
    report.warning = "lengths differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + "); compared first " +
                     std::to_string(common) + " intervals";
    a.values.resize(common);
    b.values.resize(common);
    a.source_duration = static_cast<double>(common) * a.interval;
    b.source_duration = a.source_duration;
  }

  report.scaled = scale_trace(a, b.mean());
  report.mape_percent = mape(b, report.scaled);
  report.pearson = pearson(a, b);
  return report;
}

}  // namespace vidmeter

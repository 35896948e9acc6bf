#include "vidmeter/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vidmeter/error.hpp"

namespace vidmeter {

double BitrateTrace::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

BitrateTrace BitrateTrace::from_values(std::vector<double> values,
                                       double interval) {
  BitrateTrace t;
  t.interval = interval;
  t.source_duration = interval * static_cast<double>(values.size());
  t.values = std::move(values);
  return t;
}

BitrateTrace bin_frames(const FrameLog& log, double interval) {
  if (interval <= 0.0) raise(Errc::domain_error, "interval must be > 0");
  if (log.empty()) raise(Errc::empty_log, "frame log has no frames");
  log.validate();

  const double last = log.last_pts();
  const auto buckets = static_cast<std::size_t>(std::floor(last / interval)) + 1;

  BitrateTrace trace;
  trace.interval = interval;
  trace.values.assign(buckets, 0.0);
  for (const auto& f : log.frames) {
    auto k = static_cast<std::size_t>(std::floor(f.pts / interval));
    k = std::min(k, buckets - 1);  // guards float edge at the last boundary
    trace.values[k] += static_cast<double>(f.size);
  }
  const double bytes_to_kbps = 8.0 / 1000.0 / interval;
  for (auto& v : trace.values) v *= bytes_to_kbps;

  trace.source_duration = last;
  if (log.declared_duration) {
    trace.source_duration = std::max(trace.source_duration, *log.declared_duration);
  }
  return trace;
}

TraceStats trace_stats(const BitrateTrace& trace,
                       double partial_bucket_threshold) {
  if (trace.empty()) raise(Errc::empty_trace, "trace has no values");

  std::size_t n = trace.size();
  // Drop a trailing sliver bucket: it covers too little media to be a
  // representative instantaneous sample.
  if (n >= 2 && trace.source_duration > 0.0) {
    const double covered =
        trace.source_duration - static_cast<double>(n - 1) * trace.interval;
    if (covered > 0.0 && covered < partial_bucket_threshold * trace.interval) {
      --n;
    }
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += trace.values[i];
  const double mean = sum / static_cast<double>(n);

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = trace.values[i] - mean;
    ss += d * d;
  }
  const double stddev = std::sqrt(ss / static_cast<double>(n));

  TraceStats stats;
  stats.mean_kbps = mean;
  stats.stddev_kbps = stddev;
  stats.duration = trace.source_duration;
  if (mean > 0.0) stats.burstiness = stddev / mean;
  return stats;
}

BitrateTrace truncate(const BitrateTrace& trace, double cutoff) {
  if (cutoff <= 0.0) raise(Errc::domain_error, "cutoff must be > 0");

  // Buckets whose start lies in [0, cutoff) survive.
  const auto keep = static_cast<std::size_t>(std::ceil(cutoff / trace.interval));
  BitrateTrace out = trace;
  if (out.values.size() > keep) out.values.resize(keep);
  out.source_duration = std::min(out.source_duration, cutoff);
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    raise(Errc::length_mismatch, "sequences have lengths " +
                                     std::to_string(a.size()) + " and " +
                                     std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  if (n < 2) raise(Errc::domain_error, "need at least 2 paired values");

  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);

  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    raise(Errc::undefined_correlation, "constant input sequence");
  }
  return sab / std::sqrt(saa * sbb);
}

double pearson(const BitrateTrace& a, const BitrateTrace& b) {
  return pearson(std::span<const double>(a.values),
                 std::span<const double>(b.values));
}

}  // namespace vidmeter

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vidmeter/frame_log.hpp"

namespace vidmeter {

/// Per-interval instantaneous bitrates (kbit/s) of one stream.
struct BitrateTrace {
  double interval = 1.0;        // seconds per bucket
  std::vector<double> values;   // kbps, all >= 0
  double source_duration = 0.0; // seconds of media the trace covers

  bool operator==(const BitrateTrace&) const = default;

  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }
  double mean() const;

  /// Wrap raw per-interval values; source_duration defaults to n * interval.
  static BitrateTrace from_values(std::vector<double> values,
                                  double interval = 1.0);
};

struct TraceStats {
  double mean_kbps = 0.0;
  double stddev_kbps = 0.0;                // population standard deviation
  std::optional<double> burstiness;        // stddev/mean; empty when mean == 0
  double duration = 0.0;                   // seconds
};

/// Bucket a frame log into instantaneous bitrates. A frame with
/// k*interval <= pts < (k+1)*interval lands in bucket k (a frame exactly on
/// a boundary belongs to the later bucket); the bucket holding the last
/// frame is the final one. source_duration is max(last pts, declared
/// duration).
BitrateTrace bin_frames(const FrameLog& log, double interval = 1.0);

/// Mean, population stddev and burstiness (relative standard deviation) of a
/// trace. A trailing bucket covering less than partial_bucket_threshold of an
/// interval is excluded so a sliver of media cannot masquerade as a
/// low-bitrate second; set the threshold to 0 to keep every bucket.
TraceStats trace_stats(const BitrateTrace& trace,
                       double partial_bucket_threshold = 0.5);

/// Keep only the buckets at least partially inside [0, cutoff). Traces
/// shorter than the cutoff come back unchanged.
BitrateTrace truncate(const BitrateTrace& trace, double cutoff);

/// Pearson product-moment correlation of two equally long value sequences.
double pearson(std::span<const double> a, std::span<const double> b);
double pearson(const BitrateTrace& a, const BitrateTrace& b);

}  // namespace vidmeter

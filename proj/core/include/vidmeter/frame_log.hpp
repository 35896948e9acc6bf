#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vidmeter/itag.hpp"

namespace vidmeter {

/// One downloaded media frame: presentation timestamp and payload size.
struct Frame {
  double pts = 0.0;             // seconds, non-negative
  std::uint64_t size = 0;       // bytes
  std::optional<bool> is_key;   // unknown for most sources

  bool operator==(const Frame&) const = default;
};

/// Ordered per-frame record of one stream; the atomic measurement record
/// everything else in the toolkit is derived from.
struct FrameLog {
  std::string video_id;
  std::optional<ItagDescriptor> itag;
  std::vector<Frame> frames;                // sorted by pts, non-decreasing
  std::optional<double> declared_duration;  // seconds

  bool operator==(const FrameLog&) const = default;

  bool empty() const { return frames.empty(); }
  double last_pts() const { return frames.empty() ? 0.0 : frames.back().pts; }
  std::uint64_t total_bytes() const;

  /// Throws MalformedLog when pts are negative, decreasing, or the log runs
  /// more than 1 s past its declared duration.
  void validate() const;
};

}  // namespace vidmeter

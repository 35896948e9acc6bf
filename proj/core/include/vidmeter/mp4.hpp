#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vidmeter/frame_log.hpp"

namespace vidmeter {

/// Sample-level view of one video track: sizes plus decode-time deltas, with
/// fragment runs already folded in for fragmented files.
struct Mp4SampleTable {
  std::uint32_t timescale = 0;               // ticks per second
  std::vector<std::uint32_t> sample_sizes;   // bytes
  std::vector<std::uint32_t> sample_deltas;  // ticks
  bool fragmented = false;
  double declared_duration = 0.0;            // seconds; 0 = unknown
};

/// Walk the box tree of an MP4 (classic or fragmented) and pull out the first
/// video track's sample table. Audio tracks and unknown boxes are skipped.
/// Failures are structured: TruncatedBox, NoVideoTrack,
/// InconsistentSampleTable.
Mp4SampleTable extract_sample_table(std::span<const std::uint8_t> bytes);

FrameLog sample_table_to_framelog(const Mp4SampleTable& table,
                                  std::string video_id);

/// extract_sample_table + sample_table_to_framelog. Decode time is used as
/// pts; composition offsets are ignored.
FrameLog parse_mp4(std::span<const std::uint8_t> bytes,
                   std::string video_id = "");

}  // namespace vidmeter

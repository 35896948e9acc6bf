#pragma once

#include <filesystem>
#include <vector>

#include "vidmeter/frame_log.hpp"
#include "vidmeter/synth.hpp"

namespace vidmeter {

/// Convert a bitrate trace to an equivalent frame log: one frame per bucket,
/// sized to carry the bucket's bits. Round-trips through bin_frames up to
/// byte rounding.
FrameLog trace_to_framelog(const BitrateTrace& trace, std::string video_id,
                           std::optional<ItagDescriptor> itag = std::nullopt);

/// On-disk corpus layout:
///   <dir>/index.json             catalog of every video and its variants
///   <dir>/durations.csv          one duration per line (for `fit`)
///   <dir>/framelogs/<id>_<res>.csv
void export_corpus(const std::vector<SyntheticVideo>& corpus,
                   const std::filesystem::path& dir);

std::vector<SyntheticVideo> load_corpus(const std::filesystem::path& dir);

}  // namespace vidmeter

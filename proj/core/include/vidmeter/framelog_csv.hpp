#pragma once

#include <filesystem>
#include <string>

#include "vidmeter/frame_log.hpp"
#include "vidmeter/trace.hpp"

namespace vidmeter {

/// Canonical frame-log CSV. Layout:
///
///   # video_id=<id>
///   # itag=<code>                 (omitted when unknown)
///   # declared_duration=<seconds> (omitted when absent)
///   index,pts_seconds,size_bytes,is_key
///   0,0.000000,100,
///
/// UTF-8, LF line endings. pts carry at least six decimals and always
/// round-trip exactly; is_key cells may be blank.
std::string write_framelog_csv(const FrameLog& log);
FrameLog read_framelog_csv(const std::string& text);

/// Plain bitrate-trace CSV (header `t_seconds,kbps`), used for report data
/// and as an alternative CLI input. Carries interval/source_duration as
/// `# key=value` lines so it round-trips exactly.
std::string write_trace_csv(const BitrateTrace& trace);
BitrateTrace read_trace_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& data);

/// Shortest decimal form that parses back to exactly the same double, padded
/// to at least six decimal places.
std::string format_seconds(double value);

}  // namespace vidmeter

#include "vidmeter/error.hpp"

namespace vidmeter {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_log: return "EmptyLog";
    case Errc::malformed_log: return "MalformedLog";
    case Errc::empty_trace: return "EmptyTrace";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::undefined_correlation: return "UndefinedCorrelation";
    case Errc::truncated_box: return "TruncatedBox";
    case Errc::no_video_track: return "NoVideoTrack";
    case Errc::inconsistent_sample_table: return "InconsistentSampleTable";
    case Errc::schema_error: return "SchemaError";
    case Errc::parse_error: return "ParseError";
    case Errc::non_positive_sample: return "NonPositiveSample";
    case Errc::empty_input: return "EmptyInput";
    case Errc::domain_error: return "DomainError";
    case Errc::zero_mean_trace: return "ZeroMeanTrace";
    case Errc::profile_error: return "ProfileError";
    case Errc::no_eligible_videos: return "NoEligibleVideos";
    case Errc::video_not_found: return "VideoNotFound";
    case Errc::not_found: return "NotFound";
    case Errc::bad_request: return "BadRequest";
    case Errc::config_error: return "ConfigError";
  }
  return "Error";
}

}  // namespace vidmeter

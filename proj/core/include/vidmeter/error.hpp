#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vidmeter {

enum class Errc {
  empty_log,
  malformed_log,
  empty_trace,
  length_mismatch,
  undefined_correlation,
  truncated_box,
  no_video_track,
  inconsistent_sample_table,
  schema_error,
  parse_error,
  non_positive_sample,
  empty_input,
  domain_error,
  zero_mean_trace,
  profile_error,
  no_eligible_videos,
  video_not_found,
  not_found,
  bad_request,
  config_error,
};

const char* errc_name(Errc code);

/// Every failure the toolkit reports deliberately is an Error carrying one of
/// the Errc codes above. `detail` holds a byte offset (box parsing) or a line
/// number (CSV parsing) when the code has one, -1 otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::int64_t detail = -1)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        detail_(detail) {}

  Errc code() const { return code_; }
  std::int64_t detail() const { return detail_; }

 private:
  Errc code_;
  std::int64_t detail_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message,
                               std::int64_t detail = -1) {
  throw Error(code, message, detail);
}

}  // namespace vidmeter

#include "vidmeter/frame_log.hpp"

#include <string>

#include "vidmeter/error.hpp"

namespace vidmeter {

std::uint64_t FrameLog::total_bytes() const {
  std::uint64_t sum = 0;
  for (const auto& f : frames) sum += f.size;
  return sum;
}

void FrameLog::validate() const {
  double prev = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double pts = frames[i].pts;
    if (pts < 0.0) {
      raise(Errc::malformed_log,
            "negative pts " + std::to_string(pts) + " at frame " +
                std::to_string(i));
    }
    if (i > 0 && pts < prev) {
      raise(Errc::malformed_log,
            "pts decreases at frame " + std::to_string(i));
    }
    prev = pts;
  }
  if (declared_duration && !frames.empty() &&
      last_pts() > *declared_duration + 1.0) {
    raise(Errc::malformed_log,
          "last pts " + std::to_string(last_pts()) +
              " exceeds declared duration " +
              std::to_string(*declared_duration) + " by more than 1 s");
  }
}

}  // namespace vidmeter

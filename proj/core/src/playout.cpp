#include "vidmeter/playout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vidmeter/error.hpp"

namespace vidmeter {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;

/// Piecewise-linear media demand: cumulative kbits needed to play the first
/// x seconds, and its inverse (buffered media time for downloaded kbits).
class MediaCurve {
 public:
  explicit MediaCurve(const BitrateTrace& media)
      : interval_(media.interval), values_(media.values) {
    cumulative_.resize(values_.size() + 1, 0.0);
    for (std::size_t i = 0; i < values_.size(); ++i) {
      cumulative_[i + 1] = cumulative_[i] + values_[i] * interval_;
    }
  }

  double duration() const {
    return interval_ * static_cast<double>(values_.size());
  }
  double total_kbits() const { return cumulative_.back(); }

  double rate_at(double media_time) const {
    auto k = static_cast<std::size_t>(
        std::floor(media_time / interval_ + kEps));
    k = std::min(k, values_.size() - 1);
    return values_[k];
  }

  double next_boundary(double media_time) const {
    const double b =
        (std::floor(media_time / interval_ + kEps) + 1.0) * interval_;
    return std::min(b, duration());
  }

  /// kbits needed to hold the first x media seconds.
  double need(double x) const {
    x = std::clamp(x, 0.0, duration());
    auto k = static_cast<std::size_t>(std::floor(x / interval_ + kEps));
    if (k >= values_.size()) return total_kbits();
    return cumulative_[k] +
           (x - static_cast<double>(k) * interval_) * values_[k];
  }

  /// Largest media time whose demand is covered by d kbits.
  double buffered(double d) const {
    if (d >= total_kbits() - kEps) return duration();
    std::size_t k = frontier_index(d);
    const double rate = values_[k];
    if (rate <= 0.0) return static_cast<double>(k + 1) * interval_;
    return static_cast<double>(k) * interval_ +
           std::min(interval_, std::max(0.0, d - cumulative_[k]) / rate);
  }

  /// kbits at which the buffered() slope next changes.
  double frontier_boundary(double d) const {
    if (d >= total_kbits() - kEps) return total_kbits();
    return cumulative_[frontier_index(d) + 1];
  }

 private:
  std::size_t frontier_index(double d) const {
    auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), d + kEps);
    auto k = static_cast<std::size_t>(it - cumulative_.begin());
    k = (k == 0) ? 0 : k - 1;
    while (k + 1 < cumulative_.size() - 1 && cumulative_[k + 1] <= d + kEps) {
      ++k;
    }
    return std::min(k, values_.size() - 1);
  }

  double interval_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

}  // namespace

LinkModel LinkModel::constant(double kbps, double start_latency) {
  LinkModel link;
  link.constant_kbps = kbps;
  link.start_latency = start_latency;
  return link;
}

LinkModel LinkModel::from_trace(std::vector<double> capacity_kbps,
                                double interval, double start_latency) {
  LinkModel link;
  link.capacity_trace = std::move(capacity_kbps);
  link.interval = interval;
  link.start_latency = start_latency;
  return link;
}

double LinkModel::capacity_at(double t) const {
  if (t < start_latency) return 0.0;
  if (capacity_trace.empty()) return constant_kbps;
  auto k = static_cast<std::size_t>(
      std::floor((t - start_latency) / interval + kEps));
  k = std::min(k, capacity_trace.size() - 1);
  return capacity_trace[k];
}

double LinkModel::next_change_after(double t) const {
  if (t < start_latency - kEps) return start_latency;
  if (capacity_trace.empty()) return kInf;
  auto k = static_cast<std::size_t>(
      std::floor((t - start_latency) / interval + kEps));
  if (k + 1 >= capacity_trace.size()) return kInf;  // held at last value
  return start_latency + static_cast<double>(k + 1) * interval;
}

void LinkModel::validate(double media_interval) const {
  if (constant_kbps < 0.0) raise(Errc::domain_error, "negative link capacity");
  for (double c : capacity_trace) {
    if (c < 0.0) raise(Errc::domain_error, "negative link capacity");
  }
  if (!capacity_trace.empty() && std::abs(interval - media_interval) > 1e-12) {
    raise(Errc::domain_error,
          "capacity trace interval must match the media interval");
  }
  if (start_latency < 0.0) raise(Errc::domain_error, "negative start latency");
}

PlayoutResult simulate_download(const BitrateTrace& media,
                                const LinkModel& link,
                                const PlayerConfig& cfg) {
  if (media.empty()) raise(Errc::empty_trace, "media trace has no values");
  link.validate(media.interval);
  if (!(cfg.cutoff > 0.0)) raise(Errc::domain_error, "cutoff must be > 0");
  if (cfg.initial_buffer < 0.0 || cfg.rebuffer_target < 0.0) {
    raise(Errc::domain_error, "buffer targets must be >= 0");
  }

  const BitrateTrace clipped = truncate(media, cfg.cutoff);
  const MediaCurve curve(clipped);
  const double media_end = curve.duration();
  const double total = curve.total_kbits();
  const double ceiling = cfg.wall_ceiling;

  PlayoutResult result;
  double t = 0.0;        // wall seconds
  double d = 0.0;        // downloaded kbits
  double playhead = 0.0; // media seconds

  // Advance wall time downloading at link capacity until `until`, until
  // `bits` kbits are present, or until the file completes.
  auto download_until = [&](double until, double bits) {
    const double goal = std::min(bits, total);
    while (t < until - 1e-12 && d < goal - kEps) {
      const double c = link.capacity_at(t);
      double segment_end = std::min(until, link.next_change_after(t));
      if (c > 0.0) segment_end = std::min(segment_end, t + (goal - d) / c);
      if (segment_end <= t) segment_end = until;  // zero capacity forever
      d = std::min(total, d + c * (segment_end - t));
      t = segment_end;
    }
  };

  // Startup: buffer the initial target (or the whole clip if shorter).
  const double startup_bits =
      curve.need(std::min(cfg.initial_buffer, media_end));
  download_until(ceiling, startup_bits);
  if (d + kEps < startup_bits) {
    result.timed_out = true;
    result.wall_elapsed = t;
    result.downloaded_bytes =
        static_cast<std::uint64_t>(std::llround(d * 125.0));
    return result;
  }
  result.startup_delay = t;
  const double first_capacity = link.capacity_at(link.start_latency);
  const double ideal_startup =
      link.start_latency +
      (first_capacity > 0.0 ? startup_bits / first_capacity : 0.0);

  while (playhead < media_end - kEps) {
    const double buffered = curve.buffered(d);
    const double consume = curve.rate_at(playhead);
    const double c = link.capacity_at(t);
    const bool starved = (buffered - playhead) <= kEps && d < total - kEps &&
                         c < consume - 1e-12;

    if (!starved) {
      // Playing. Step to the nearest event: media boundary, buffer empty,
      // capacity change, frontier slope change, or end of media.
      double dt = media_end - playhead;
      dt = std::min(dt, curve.next_boundary(playhead) - playhead);
      if (d < total - kEps && consume > 0.0 && c < consume) {
        dt = std::min(dt, (buffered - playhead) / (1.0 - c / consume));
      }
      const double link_change = link.next_change_after(t);
      if (link_change < kInf) dt = std::min(dt, link_change - t);
      if (c > 0.0 && d < total - kEps) {
        dt = std::min(dt, (curve.frontier_boundary(d) - d) / c);
      }
      dt = std::max(dt, 1e-12);

      if (t + dt > ceiling) {
        const double room = std::max(0.0, ceiling - t);
        d = std::min(total, d + c * room);
        playhead = std::min(media_end,
                            std::min(playhead + room, curve.buffered(d)));
        t = ceiling;
        result.timed_out = playhead < media_end - kEps;
        break;
      }
      t += dt;
      playhead += dt;
      d = std::min(total, d + c * dt);
      continue;
    }

    // Stall: playhead frozen at `playhead` since wall time `t`.
    const double stall_start = t;
    const double ready_bits = curve.need(curve.next_boundary(playhead));
    download_until(ceiling, ready_bits);
    if (d + kEps < ready_bits) {
      result.stalls.push_back({playhead, ceiling - stall_start});
      result.timed_out = true;
      break;
    }
    // Rebuffer floor: the stall lasts at least rebuffer_target wall seconds,
    // unless the whole file lands first.
    const double floor_deadline = stall_start + cfg.rebuffer_target;
    if (t < floor_deadline && d < total - kEps) {
      download_until(std::min(floor_deadline, ceiling), total);
      if (d < total - kEps) t = std::min(floor_deadline, ceiling);
      if (t >= ceiling - 1e-12 && floor_deadline > ceiling &&
          d < total - kEps) {
        result.stalls.push_back({playhead, ceiling - stall_start});
        result.timed_out = true;
        break;
      }
    }
    result.stalls.push_back({playhead, t - stall_start});
  }

  result.wall_elapsed = t;
  result.completed = !result.timed_out && playhead >= media_end - kEps;
  result.downloaded_bytes = static_cast<std::uint64_t>(std::llround(d * 125.0));
  for (const auto& s : result.stalls) result.total_stall += s.wall_duration;
  result.all_frames_on_time = result.stalls.empty() && !result.timed_out &&
                              result.startup_delay <= ideal_startup + 1e-6;
  return result;
}

int classify(double value, const std::vector<double>& edges) {
  int k = 0;
  for (double e : edges) {
    if (value >= e) ++k;
  }
  return k;
}

TestRecord verdict(const PlayoutResult& result, const TraceStats& media_stats,
                   const ClassEdges& edges,
                   std::optional<double> source_duration) {
  if (!media_stats.burstiness) {
    raise(Errc::zero_mean_trace, "burstiness undefined for zero-mean media");
  }
  TestRecord record;
  record.media_duration = media_stats.duration;
  record.source_duration = source_duration.value_or(media_stats.duration);
  record.startup_delay = result.startup_delay;
  record.stall_count = static_cast<int>(result.stalls.size());
  record.total_stall = result.total_stall;
  record.mean_kbps = media_stats.mean_kbps;
  record.burstiness = *media_stats.burstiness;
  record.completed = result.completed;
  record.timed_out = result.timed_out;
  record.all_frames_on_time = result.all_frames_on_time;
  record.duration_class =
      classify(record.source_duration, edges.duration_edges);
  record.bitrate_class =
      classify(record.mean_kbps / 1000.0, edges.bitrate_edges_mbps);
  record.burstiness_class =
      classify(record.burstiness, edges.burstiness_edges);
  record.bucket = "dur" + std::to_string(record.duration_class) + ".rate" +
                  std::to_string(record.bitrate_class) + ".burst" +
                  std::to_string(record.burstiness_class);
  if (record.stall_count == 0) record.bucket += ".no-stall";
  return record;
}

}  // namespace vidmeter

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vidmeter/trace.hpp"

namespace vidmeter {

/// Constrained link feeding the player: constant capacity or a per-interval
/// capacity trace (held at its last value past the end), with an optional
/// dead time before the first byte arrives.
struct LinkModel {
  double constant_kbps = 0.0;
  std::vector<double> capacity_trace;  // kbps; empty means constant
  double interval = 1.0;               // must match the media interval
  double start_latency = 0.0;          // seconds

  static LinkModel constant(double kbps, double start_latency = 0.0);
  static LinkModel from_trace(std::vector<double> capacity_kbps,
                              double interval = 1.0,
                              double start_latency = 0.0);

  double capacity_at(double t) const;
  /// Wall time of the next capacity change after t; +inf when none.
  double next_change_after(double t) const;

  void validate(double media_interval) const;
};

struct PlayerConfig {
  double initial_buffer = 2.0;   // media seconds buffered before playback
  double rebuffer_target = 2.0;  // minimum wall seconds a stall lasts
  double cutoff = 180.0;         // media truncated here before simulation
  double wall_ceiling = 3600.0;  // give up and flag TimedOut past this
};

struct StallEvent {
  double media_time = 0.0;     // where the playhead froze (media seconds)
  double wall_duration = 0.0;  // how long it stayed frozen (wall seconds)
};

struct PlayoutResult {
  double startup_delay = 0.0;
  std::vector<StallEvent> stalls;
  double total_stall = 0.0;
  std::uint64_t downloaded_bytes = 0;
  bool completed = false;
  bool timed_out = false;
  bool all_frames_on_time = false;
  double wall_elapsed = 0.0;
};

/// Fluid-flow playout simulation. Download fills a buffer at link capacity;
/// playback starts once initial_buffer media seconds are present and the
/// playhead then consumes the trace in real time. A stall begins when the
/// buffer empties while arrival lags consumption; it ends once the next
/// interval is fully buffered, but no sooner than rebuffer_target wall
/// seconds in (or immediately on download completion). A zero-capacity link
/// ends in a TimedOut result at the wall ceiling.
PlayoutResult simulate_download(const BitrateTrace& media,
                                const LinkModel& link,
                                const PlayerConfig& cfg);

/// Classification edges; class k means the value reached k of the edges.
struct ClassEdges {
  std::vector<double> duration_edges{120.0, 300.0, 600.0};       // seconds
  std::vector<double> bitrate_edges_mbps{0.5, 1.0, 2.5, 5.0, 7.0};
  std::vector<double> burstiness_edges{0.2, 0.5, 1.0};
};

int classify(double value, const std::vector<double>& edges);

/// One measurement outcome: stall results bundled with the media metrics the
/// collector stores alongside them.
struct TestRecord {
  std::string video_id;
  int ma_id = -1;
  int sequence = -1;
  double cutoff = 0.0;
  double media_duration = 0.0;   // seconds actually simulated (post-cutoff)
  double source_duration = 0.0;  // full video duration
  double startup_delay = 0.0;
  int stall_count = 0;
  double total_stall = 0.0;
  double mean_kbps = 0.0;
  double burstiness = 0.0;
  bool completed = false;
  bool timed_out = false;
  bool all_frames_on_time = false;
  int duration_class = 0;
  int bitrate_class = 0;
  int burstiness_class = 0;
  std::string bucket;
  double min_length_at_selection = 0.0;
};

/// Bundle a playout result with the media's trace metrics and classify it.
/// ZeroMeanTrace when the media burstiness is undefined. source_duration
/// defaults to the stats duration when the caller knows no better.
TestRecord verdict(const PlayoutResult& result, const TraceStats& media_stats,
                   const ClassEdges& edges = {},
                   std::optional<double> source_duration = std::nullopt);

}  // namespace vidmeter

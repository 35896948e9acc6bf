#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vidmeter/frame_log.hpp"
#include "vidmeter/trace.hpp"

namespace vidmeter {

/// One servable stream: the stored frame log (lowest stored resolution) plus
/// the advertised mean bitrates the generator may upscale to.
struct CatalogEntry {
  std::string id;
  FrameLog log;
  std::map<int, double> advertised_mean_kbps;  // by resolution height

  BitrateTrace stored_trace(double interval = 1.0) const;
};

class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<CatalogEntry> entries);

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  /// nullptr when the id is unknown.
  const CatalogEntry* find(const std::string& id) const;

  /// Read a corpus export directory (index.json + framelogs/): the lowest
  /// stored resolution becomes the stored log, the rest advertised means.
  static Catalog load(const std::filesystem::path& dir);

 private:
  std::vector<CatalogEntry> entries_;
};

struct Chunk {
  double send_at = 0.0;        // seconds from response start
  std::uint64_t bytes = 0;
};

/// Per-interval chunk schedule shaped to the stored trace, rescaled to
/// target_mean_kbps. BadRequest when the target is not positive.
std::vector<Chunk> shape_schedule(const CatalogEntry& entry,
                                  double target_mean_kbps,
                                  double interval = 1.0);

std::uint64_t schedule_checksum(const std::vector<Chunk>& schedule);
std::string checksum_hex(std::uint64_t checksum);

std::uint64_t schedule_total_bytes(const std::vector<Chunk>& schedule);

/// HTTP traffic generator.
///   GET /videos               catalog metadata (JSON)
///   GET /stream/{id}?mean_kbps=X   paced incompressible bytes
///   GET /framelog/{id}        stored frame log as CSV
/// Each chunk is written no earlier than its send_at relative to response
/// start; responses carry X-Total-Bytes and X-Schedule-Checksum headers.
class TrafficServer {
 public:
  explicit TrafficServer(Catalog catalog);
  ~TrafficServer();

  TrafficServer(const TrafficServer&) = delete;
  TrafficServer& operator=(const TrafficServer&) = delete;

  /// Bind and serve on a background thread; port 0 picks a free port.
  /// Returns the bound port.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vidmeter

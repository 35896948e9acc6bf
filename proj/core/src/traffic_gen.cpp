#include "vidmeter/traffic_gen.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "vidmeter/error.hpp"
#include "vidmeter/framelog_csv.hpp"
#include "vidmeter/rng.hpp"
#include "vidmeter/scale.hpp"

namespace vidmeter {

BitrateTrace CatalogEntry::stored_trace(double interval) const {
  return bin_frames(log, interval);
}

Catalog::Catalog(std::vector<CatalogEntry> entries)
    : entries_(std::move(entries)) {}

const CatalogEntry* Catalog::find(const std::string& id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

Catalog Catalog::load(const std::filesystem::path& dir) {
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(read_file(dir / "index.json"));
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::parse_error, "bad index.json: " + std::string(e.what()));
  }

  std::vector<CatalogEntry> entries;
  for (const auto& video : index.at("videos")) {
    CatalogEntry entry;
    entry.id = video.at("id").get<std::string>();
    int lowest = 0;
    std::string lowest_file;
    for (const auto& [key, v] : video.at("resolutions").items()) {
      const int height = std::stoi(key);
      entry.advertised_mean_kbps[height] = v.value("mean_kbps", 0.0);
      if (lowest == 0 || height < lowest) {
        lowest = height;
        lowest_file = v.at("trace_file").get<std::string>();
      }
    }
    if (lowest == 0) continue;  // no stored stream, not servable
    entry.log = read_framelog_csv(read_file(dir / lowest_file));
    entries.push_back(std::move(entry));
  }
  return Catalog(std::move(entries));
}

std::vector<Chunk> shape_schedule(const CatalogEntry& entry,
                                  double target_mean_kbps, double interval) {
  if (!(target_mean_kbps > 0.0)) {
    raise(Errc::bad_request, "mean_kbps must be > 0");
  }
  if (entry.log.empty()) raise(Errc::empty_log, "stored log is empty");

  const BitrateTrace shaped =
      scale_trace(entry.stored_trace(interval), target_mean_kbps);
  std::vector<Chunk> schedule;
  schedule.reserve(shaped.size());
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    Chunk c;
    c.send_at = static_cast<double>(i) * interval;
    c.bytes = static_cast<std::uint64_t>(
        std::llround(shaped.values[i] * interval * 125.0));  // kbit -> bytes
    schedule.push_back(c);
  }
  return schedule;
}

std::uint64_t schedule_checksum(const std::vector<Chunk>& schedule) {
  // FNV-1a over the (send_at, bytes) pairs.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& c : schedule) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(c.send_at));
    std::memcpy(&bits, &c.send_at, sizeof(bits));
    mix(bits);
    mix(c.bytes);
  }
  return h;
}

std::string checksum_hex(std::uint64_t checksum) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(checksum));
  return buf;
}

std::uint64_t schedule_total_bytes(const std::vector<Chunk>& schedule) {
  std::uint64_t total = 0;
  for (const auto& c : schedule) total += c.bytes;
  return total;
}

namespace {

std::string incompressible_payload(const std::string& video_id,
                                   std::size_t chunk_index,
                                   std::uint64_t bytes) {
  std::uint64_t seed = 0xcbf29ce484222325ULL;
  for (char c : video_id) {
    seed = (seed ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  }
  Rng rng(mix_seed(seed ^ chunk_index));
  std::string payload(bytes, '\0');
  std::size_t i = 0;
  while (i < payload.size()) {
    std::uint64_t word = rng.next_u64();
    for (int b = 0; b < 8 && i < payload.size(); ++b, ++i) {
      payload[i] = static_cast<char>((word >> (b * 8)) & 0xff);
    }
  }
  return payload;
}

}  // namespace

struct TrafficServer::Impl {
  Catalog catalog;
  httplib::Server server;
  std::thread thread;

  explicit Impl(Catalog cat) : catalog(std::move(cat)) { route(); }

  void route() {
    server.Get("/videos", [this](const httplib::Request&,
                                 httplib::Response& res) {
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (const auto& entry : catalog.entries()) {
        nlohmann::ordered_json j;
        j["id"] = entry.id;
        j["frames"] = entry.log.frames.size();
        j["duration"] = entry.log.declared_duration.value_or(entry.log.last_pts());
        nlohmann::ordered_json means;
        for (const auto& [height, kbps] : entry.advertised_mean_kbps) {
          means[std::to_string(height)] = kbps;
        }
        j["mean_kbps"] = std::move(means);
        list.push_back(std::move(j));
      }
      res.set_content(list.dump(2) + "\n", "application/json");
    });

    server.Get(R"(/framelog/([^/]+))", [this](const httplib::Request& req,
                                              httplib::Response& res) {
      const CatalogEntry* entry = catalog.find(req.matches[1]);
      if (!entry) {
        res.status = 404;
        res.set_content("unknown video id\n", "text/plain");
        return;
      }
      res.set_content(write_framelog_csv(entry->log), "text/csv");
    });

    server.Get(R"(/stream/([^/]+))", [this](const httplib::Request& req,
                                            httplib::Response& res) {
      const CatalogEntry* entry = catalog.find(req.matches[1]);
      if (!entry) {
        res.status = 404;
        res.set_content("unknown video id\n", "text/plain");
        return;
      }
      const std::string raw = req.get_param_value("mean_kbps");
      double mean_kbps = 0.0;
      auto [ptr, ec] =
          std::from_chars(raw.data(), raw.data() + raw.size(), mean_kbps);
      if (raw.empty() || ec != std::errc{} || ptr != raw.data() + raw.size() ||
          !(mean_kbps > 0.0)) {
        res.status = 400;
        res.set_content("mean_kbps must be a positive number\n", "text/plain");
        return;
      }

      auto schedule = std::make_shared<std::vector<Chunk>>(
          shape_schedule(*entry, mean_kbps));
      res.set_header("X-Schedule-Checksum",
                     checksum_hex(schedule_checksum(*schedule)));
      res.set_header("X-Total-Bytes",
                     std::to_string(schedule_total_bytes(*schedule)));

      // One clock per response; chunks are never written before their
      // send_at. Lateness is up to the client's consumption rate.
      auto start = std::make_shared<std::chrono::steady_clock::time_point>();
      auto index = std::make_shared<std::size_t>(0);
      const std::string id = entry->id;
      res.set_chunked_content_provider(
          "application/octet-stream",
          [this, schedule, start, index, id](std::size_t,
                                             httplib::DataSink& sink) {
            if (*index == 0) {
              *start = std::chrono::steady_clock::now();
            }
            if (*index >= schedule->size()) {
              sink.done();
              return true;
            }
            const Chunk& chunk = (*schedule)[*index];
            const auto due =
                *start + std::chrono::duration_cast<
                             std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(chunk.send_at));
            std::this_thread::sleep_until(due);
            if (!server.is_running()) return false;
            const std::string payload =
                incompressible_payload(id, *index, chunk.bytes);
            ++*index;
            return sink.write(payload.data(), payload.size());
          });
    });
  }
};

TrafficServer::TrafficServer(Catalog catalog)
    : impl_(std::make_unique<Impl>(std::move(catalog))) {}

TrafficServer::~TrafficServer() { stop(); }

int TrafficServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) raise(Errc::bad_request, "cannot bind to " + host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      raise(Errc::bad_request,
            "cannot bind to " + host + ":" + std::to_string(port));
    }
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void TrafficServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace vidmeter

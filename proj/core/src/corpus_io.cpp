#include "vidmeter/corpus_io.hpp"

#include <cmath>

#include <json.hpp>

#include "vidmeter/error.hpp"
#include "vidmeter/framelog_csv.hpp"
#include "vidmeter/trace.hpp"

namespace vidmeter {

namespace {

std::string trace_filename(const std::string& id, int height) {
  return "framelogs/" + id + "_" + std::to_string(height) + "p.csv";
}

}  // namespace

FrameLog trace_to_framelog(const BitrateTrace& trace, std::string video_id,
                           std::optional<ItagDescriptor> itag) {
  FrameLog log;
  log.video_id = std::move(video_id);
  log.itag = itag;
  log.declared_duration = trace.source_duration;
  log.frames.reserve(trace.values.size());
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    Frame f;
    f.pts = static_cast<double>(i) * trace.interval;
    f.size = static_cast<std::uint64_t>(
        std::llround(trace.values[i] * trace.interval * 125.0));  // kbit->B
    log.frames.push_back(f);
  }
  return log;
}

void export_corpus(const std::vector<SyntheticVideo>& corpus,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "framelogs");

  nlohmann::ordered_json index;
  index["interval"] = 1.0;
  index["videos"] = nlohmann::ordered_json::array();

  std::string durations = "duration_seconds\n";

  for (const auto& video : corpus) {
    nlohmann::ordered_json entry;
    entry["id"] = video.id;
    entry["duration"] = video.duration;
    entry["category"] = video.category;
    entry["burstiness"] = video.burstiness;
    nlohmann::ordered_json resolutions;
    for (const auto& [height, variant] : video.resolutions) {
      if (!variant.available) continue;
      nlohmann::ordered_json v;
      v["mp4_size_mb"] = variant.mp4_size_mb;
      v["webm_size_mb"] = variant.webm_size_mb;
      v["mean_kbps"] = variant.mean_kbps;
      v["dash_mean_kbps"] = variant.dash_mean_kbps;
      v["trace_file"] = trace_filename(video.id, height);
      resolutions[std::to_string(height)] = std::move(v);

      const auto itag = itag_for(Resolution{height}, Container::mp4);
      write_file(dir / trace_filename(video.id, height),
                 write_framelog_csv(trace_to_framelog(
                     variant.trace, video.id, itag)));
    }
    entry["resolutions"] = std::move(resolutions);
    index["videos"].push_back(std::move(entry));

    durations += format_seconds(video.duration);
    durations += '\n';
  }

  write_file(dir / "index.json", index.dump(2) + "\n");
  write_file(dir / "durations.csv", durations);
}

std::vector<SyntheticVideo> load_corpus(const std::filesystem::path& dir) {
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(read_file(dir / "index.json"));
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::parse_error, "bad index.json: " + std::string(e.what()));
  }

  const double interval = index.value("interval", 1.0);
  std::vector<SyntheticVideo> corpus;
  if (!index.contains("videos") || !index["videos"].is_array()) {
    raise(Errc::schema_error, "index.json has no videos array");
  }
  for (const auto& entry : index["videos"]) {
    SyntheticVideo video;
    video.id = entry.at("id").get<std::string>();
    video.duration = entry.at("duration").get<double>();
    video.category = entry.value("category", "");
    video.burstiness = entry.value("burstiness", 0.0);
    for (const auto& [key, v] : entry.at("resolutions").items()) {
      ResolutionVariant variant;
      variant.available = true;
      variant.mp4_size_mb = v.value("mp4_size_mb", 0.0);
      variant.webm_size_mb = v.value("webm_size_mb", 0.0);
      variant.mean_kbps = v.value("mean_kbps", 0.0);
      variant.dash_mean_kbps = v.value("dash_mean_kbps", 0.0);
      const auto file = v.at("trace_file").get<std::string>();
      const FrameLog log = read_framelog_csv(read_file(dir / file));
      variant.trace = bin_frames(log, interval);
      video.resolutions.emplace(std::stoi(key), std::move(variant));
    }
    corpus.push_back(std::move(video));
  }
  return corpus;
}

}  // namespace vidmeter

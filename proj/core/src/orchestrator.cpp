#include "vidmeter/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "vidmeter/error.hpp"

namespace vidmeter {

namespace {

// Stream tags for the per-cycle derived seeds.
enum : std::uint64_t {
  kStreamChart = 0x10,
  kStreamPhase1 = 0x20,
  kStreamPhase3 = 0x30,
};

Rng cycle_stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t id) {
  return Rng(mix_seed(mix_seed(seed ^ purpose) ^ id));
}

nlohmann::ordered_json record_to_json(const TestRecord& r) {
  nlohmann::ordered_json j;
  j["ma_id"] = r.ma_id;
  j["sequence"] = r.sequence;
  j["video_id"] = r.video_id;
  j["source_duration"] = r.source_duration;
  j["media_duration"] = r.media_duration;
  j["cutoff"] = r.cutoff;
  j["min_length_at_selection"] = r.min_length_at_selection;
  j["startup_delay"] = r.startup_delay;
  j["stall_count"] = r.stall_count;
  j["total_stall"] = r.total_stall;
  j["mean_kbps"] = r.mean_kbps;
  j["burstiness"] = r.burstiness;
  j["completed"] = r.completed;
  j["timed_out"] = r.timed_out;
  j["all_frames_on_time"] = r.all_frames_on_time;
  j["duration_class"] = r.duration_class;
  j["bitrate_class"] = r.bitrate_class;
  j["burstiness_class"] = r.burstiness_class;
  j["bucket"] = r.bucket;
  return j;
}

}  // namespace

int CycleConfig::effective_chart_size() const {
  if (chart_size > 0) return chart_size;
  return std::max(20, ma_count / 50);
}

std::string CycleConfig::validate() const {
  if (ma_count < 1) raise(Errc::config_error, "M must be >= 1");
  if (tests_per_ma_per_cycle < 1) {
    raise(Errc::config_error, "tests_per_ma_per_cycle must be >= 1");
  }
  if (!(min_length < cutoff)) {
    raise(Errc::config_error, "MINLENGTH must be less than CUTOFF");
  }
  if (effective_chart_size() < 1) {
    raise(Errc::config_error, "chart size must be >= 1");
  }
  if (effective_chart_size() >= ma_count) {
    return "chart size N=" + std::to_string(effective_chart_size()) +
           " is not much smaller than M=" + std::to_string(ma_count) +
           "; per-video result counts will be thin";
  }
  return {};
}

ChartService::ChartService(const std::vector<SyntheticVideo>* corpus)
    : corpus_(corpus) {}

std::vector<ChartEntry> ChartService::top(int n, Rng& rng) const {
  const auto& corpus = *corpus_;
  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)),
                            corpus.size());

  std::vector<double> weight(corpus.size());
  double total = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    weight[i] = 1.0 / static_cast<double>(i + 1);  // Zipf, s = 1
    total += weight[i];
  }

  std::vector<ChartEntry> chart;
  chart.reserve(take);
  for (std::size_t k = 0; k < take; ++k) {
    double r = rng.uniform01() * total;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (weight[i] <= 0.0) continue;
      if (r < weight[i]) {
        pick = i;
        break;
      }
      r -= weight[i];
      pick = i;  // float slop lands on the last weighted entry
    }
    chart.push_back({corpus[pick].id, corpus[pick].duration, pick});
    total -= weight[pick];
    weight[pick] = 0.0;
  }
  return chart;
}

std::vector<ChartEntry> select_videos(const std::vector<ChartEntry>& charts,
                                      int n, double min_length) {
  if (charts.empty()) raise(Errc::no_eligible_videos, "chart is empty");
  std::vector<ChartEntry> eligible;
  for (const auto& entry : charts) {
    if (entry.duration < min_length) continue;  // strictly shorter discarded
    eligible.push_back(entry);
    if (static_cast<int>(eligible.size()) >= n) break;
  }
  if (eligible.empty()) {
    raise(Errc::no_eligible_videos,
          "no chart video is at least " + std::to_string(min_length) + " s");
  }
  return eligible;
}

void Repository::append(TestRecord record) {
  records_.push_back(std::move(record));
}

std::map<std::string, Repository::VideoAggregate> Repository::aggregates()
    const {
  std::map<std::string, VideoAggregate> by_video;
  for (const auto& r : records_) {
    auto& agg = by_video[r.video_id];
    agg.tests += 1;
    agg.mean_total_stall += r.total_stall;
    agg.mean_startup += r.startup_delay;
    if (r.stall_count == 0) agg.stall_free_tests += 1;
  }
  for (auto& [id, agg] : by_video) {
    agg.mean_total_stall /= agg.tests;
    agg.mean_startup /= agg.tests;
  }
  return by_video;
}

std::string Repository::export_jsonl() const {
  std::vector<const TestRecord*> ordered;
  ordered.reserve(records_.size());
  for (const auto& r : records_) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const TestRecord* a, const TestRecord* b) {
                     if (a->ma_id != b->ma_id) return a->ma_id < b->ma_id;
                     return a->sequence < b->sequence;
                   });
  std::string out;
  for (const TestRecord* r : ordered) {
    out += record_to_json(*r).dump();
    out += '\n';
  }
  return out;
}

Orchestrator::Orchestrator(CycleConfig cfg,
                           const std::vector<SyntheticVideo>* corpus)
    : cfg_(std::move(cfg)), corpus_(corpus), charts_(corpus) {}

const SyntheticVideo& Orchestrator::find_video(const std::string& id) const {
  for (const auto& v : *corpus_) {
    if (v.id == id) return v;
  }
  raise(Errc::video_not_found, "no video with id '" + id + "'");
}

TestRecord Orchestrator::test_video(const SyntheticVideo& video,
                                    const MeasurementAgent& ma) const {
  const ResolutionVariant& variant =
      video.resolutions.at(video.lowest_height());
  PlayerConfig player;
  player.cutoff = cfg_.cutoff;
  const PlayoutResult result =
      simulate_download(variant.trace, ma.link, player);
  const TraceStats stats = trace_stats(truncate(variant.trace, cfg_.cutoff));
  TestRecord record = verdict(result, stats, cfg_.edges, video.duration);
  record.video_id = video.id;
  record.cutoff = cfg_.cutoff;
  return record;
}

TestRecord Orchestrator::run_instruction(const MeasurementAgent& ma,
                                         const Instruction& instruction,
                                         const std::vector<ChartEntry>& chart,
                                         double min_length, Rng& rng) const {
  if (instruction.type == Instruction::Type::collect_and_random_test) {
    const auto eligible =
        select_videos(chart, cfg_.effective_chart_size(), min_length);
    const auto& pick = eligible[rng.uniform_index(eligible.size())];
    TestRecord record = test_video(find_video(pick.video_id), ma);
    record.min_length_at_selection = min_length;
    return record;
  }
  TestRecord record = test_video(find_video(instruction.video_id), ma);
  record.min_length_at_selection = min_length;
  return record;
}

Repository Orchestrator::run_cycle(
    const std::vector<MeasurementAgent>& agents) const {
  cfg_.validate();
  Repository repo;
  repo.set_min_length_in_force(cfg_.min_length);

  Rng chart_rng = cycle_stream(cfg_.seed, kStreamChart, 0);
  const auto chart = charts_.top(cfg_.effective_chart_size(), chart_rng);

  // Phase 1: every idle agent collects the chart and tests one random video.
  std::vector<TestRecord> phase1;
  for (const auto& ma : agents) {
    if (!ma.idle) continue;
    Rng rng = cycle_stream(cfg_.seed, kStreamPhase1,
                           static_cast<std::uint64_t>(ma.id));
    Instruction collect{Instruction::Type::collect_and_random_test, {}};
    TestRecord record =
        run_instruction(ma, collect, chart, cfg_.min_length, rng);
    record.ma_id = ma.id;
    record.sequence = 0;
    phase1.push_back(record);
    repo.append(std::move(record));
  }
  if (phase1.empty()) return repo;  // every line was busy this cycle

  // Phase 2: classify what was tested and move MINLENGTH to the first
  // quartile of the tested durations, unless that would pass the cutoff.
  std::vector<double> durations;
  durations.reserve(phase1.size());
  for (const auto& r : phase1) durations.push_back(r.source_duration);
  const double q1 = first_quartile(durations);
  double min_length = cfg_.min_length;
  if (q1 <= cfg_.cutoff) min_length = q1;
  repo.set_min_length_in_force(min_length);

  std::vector<std::string> classified;
  for (const auto& r : phase1) {
    if (r.source_duration < min_length) continue;
    if (std::find(classified.begin(), classified.end(), r.video_id) ==
        classified.end()) {
      classified.push_back(r.video_id);
    }
  }
  if (classified.empty()) return repo;

  // Phase 3: round-robin type-2 instructions until each agent has run its
  // full quota for the cycle.
  std::size_t cursor = 0;
  for (const auto& ma : agents) {
    if (!ma.idle) continue;
    Rng rng = cycle_stream(cfg_.seed, kStreamPhase3,
                           static_cast<std::uint64_t>(ma.id));
    for (int k = 1; k < cfg_.tests_per_ma_per_cycle; ++k) {
      Instruction test{Instruction::Type::test_video,
                       classified[cursor % classified.size()]};
      ++cursor;
      TestRecord record = run_instruction(ma, test, chart, min_length, rng);
      record.ma_id = ma.id;
      record.sequence = k;
      repo.append(std::move(record));
    }
  }
  return repo;
}

double first_quartile(std::vector<double> values) {
  if (values.empty()) raise(Errc::empty_input, "no values");
  std::sort(values.begin(), values.end());
  const double h = 0.25 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values[lo];
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace vidmeter

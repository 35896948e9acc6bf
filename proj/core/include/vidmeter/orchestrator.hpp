#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vidmeter/playout.hpp"
#include "vidmeter/rng.hpp"
#include "vidmeter/synth.hpp"

namespace vidmeter {

/// Measurement-cycle configuration. chart_size 0 picks the default
/// max(20, ma_count / 50).
struct CycleConfig {
  int ma_count = 10;                  // M
  int chart_size = 0;                 // N
  double min_length = 72.0;           // seconds
  double cutoff = 180.0;              // seconds
  int tests_per_ma_per_cycle = 4;
  ClassEdges edges;
  std::uint64_t seed = 0;

  int effective_chart_size() const;
  /// ConfigError unless MINLENGTH < CUTOFF and counts are positive. Returns
  /// a warning string (empty when none) instead of failing when the chart is
  /// not much smaller than the agent population.
  std::string validate() const;
};

struct MeasurementAgent {
  int id = 0;
  LinkModel link;
  bool idle = true;  // tests only run while the line is idle
};

struct ChartEntry {
  std::string video_id;
  double duration = 0.0;
  std::size_t corpus_index = 0;
};

/// In-process stand-in for the discontinued charts service: popularity is a
/// Zipf(s=1) weight over corpus order and a chart is a weighted sample
/// without replacement.
class ChartService {
 public:
  explicit ChartService(const std::vector<SyntheticVideo>* corpus);
  std::vector<ChartEntry> top(int n, Rng& rng) const;

 private:
  const std::vector<SyntheticVideo>* corpus_;
};

/// Filter a chart to videos no shorter than min_length (strictly shorter are
/// discarded) and keep the first n, preserving chart order.
/// NoEligibleVideos when the filter empties the chart.
std::vector<ChartEntry> select_videos(const std::vector<ChartEntry>& charts,
                                      int n, double min_length);

struct Instruction {
  enum class Type { collect_and_random_test, test_video };
  Type type = Type::collect_and_random_test;
  std::string video_id;  // type 2 only
};

/// Append-only result store. Aggregates are recomputed from the records on
/// demand; there is no hidden state.
class Repository {
 public:
  void append(TestRecord record);
  const std::vector<TestRecord>& records() const { return records_; }

  double min_length_in_force() const { return min_length_in_force_; }
  void set_min_length_in_force(double v) { min_length_in_force_ = v; }

  struct VideoAggregate {
    int tests = 0;
    double mean_total_stall = 0.0;
    double mean_startup = 0.0;
    int stall_free_tests = 0;
  };
  std::map<std::string, VideoAggregate> aggregates() const;

  /// Line-delimited flat records; byte-identical for identical inputs.
  std::string export_jsonl() const;

 private:
  std::vector<TestRecord> records_;
  double min_length_in_force_ = 0.0;
};

class Orchestrator {
 public:
  Orchestrator(CycleConfig cfg, const std::vector<SyntheticVideo>* corpus);

  /// Execute one §-style instruction on one agent. Type 1 fetches the given
  /// chart, filters it, and tests one uniformly chosen video; type 2 tests
  /// the named video. VideoNotFound for unknown ids.
  TestRecord run_instruction(const MeasurementAgent& ma,
                             const Instruction& instruction,
                             const std::vector<ChartEntry>& chart,
                             double min_length, Rng& rng) const;

  /// One full weekly cycle over all agents:
  ///   phase 1 - every idle agent collects the chart and tests one random
  ///             eligible video;
  ///   phase 2 - tested videos are classified and MINLENGTH moves to the
  ///             first quartile of tested durations (ignored if that would
  ///             exceed CUTOFF);
  ///   phase 3 - the controller hands out the classified videos round-robin
  ///             until every agent has run tests_per_ma_per_cycle tests.
  Repository run_cycle(const std::vector<MeasurementAgent>& agents) const;

 private:
  const SyntheticVideo& find_video(const std::string& id) const;
  TestRecord test_video(const SyntheticVideo& video,
                        const MeasurementAgent& ma) const;

  CycleConfig cfg_;
  const std::vector<SyntheticVideo>* corpus_;
  ChartService charts_;
};

/// First quartile with linear interpolation (R type 7).
double first_quartile(std::vector<double> values);

}  // namespace vidmeter

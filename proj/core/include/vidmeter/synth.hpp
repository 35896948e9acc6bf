#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vidmeter/distfit.hpp"
#include "vidmeter/itag.hpp"
#include "vidmeter/trace.hpp"

namespace vidmeter {

struct SizeKey {
  int height = 0;
  Container container = Container::mp4;

  auto operator<=>(const SizeKey&) const = default;
};

/// Population model a synthetic corpus is drawn from. Defaults reproduce the
/// fitted duration/size table the toolkit ships with.
struct PopulationProfile {
  LognormalFit length_fit{5.16, 1.31, 0};  // seconds

  /// Fitted size models (MB) per resolution and container.
  std::map<SizeKey, LognormalFit> size_fits;

  /// Probability that a resolution exists for a video. 360p is the floor:
  /// it is forced present whenever any other resolution is.
  std::map<int, double> availability;

  /// WebM sizes derive from MP4 sizes: webm = mp4 * slope * exp(N(0, noise)).
  /// The slope per resolution comes from the WebM/MP4 fit pair when both are
  /// present; webm_size_slope is the fallback ratio.
  std::map<int, double> webm_noise_sdlog;
  double webm_size_slope = 1.05;
  double webm_fallback_noise_sdlog = 0.05;

  double dash_bitrate_delta = -0.05;  // DASH mean = progressive mean * (1+delta)
  double subsegment_seconds = 5.0;
  double correlation_floor = 0.75;    // cross-resolution trace correlation
  double ar_coefficient = 0.8;
  double spike_amplitude = 1.5;

  /// Sampler for per-video burstiness (relative stddev of the 1 s trace).
  LognormalFit burstiness_fit{-1.2039728043259361 /* ln 0.3 */, 0.35, 0};

  /// Sanity window for size-vs-duration draws: sizes implying a mean bitrate
  /// outside [min, max] Mbps are redrawn. The window is deliberately wide so
  /// the redraws only catch absurd combinations and leave the fitted size
  /// marginals intact.
  double min_sane_mbps = 0.001;
  double max_sane_mbps = 1000.0;

  std::vector<std::string> categories;

  static PopulationProfile defaults();

  double webm_slope_for(int height) const;
  double webm_noise_for(int height) const;

  /// ProfileError when probabilities leave [0,1], 360p is not the most
  /// available resolution, or a fit is degenerate.
  void validate() const;
};

struct ResolutionVariant {
  bool available = false;
  double mp4_size_mb = 0.0;
  double webm_size_mb = 0.0;
  double mean_kbps = 0.0;       // progressive-download mean (video+container)
  double dash_mean_kbps = 0.0;  // adaptive variant of the same stream
  BitrateTrace trace;
};

struct SyntheticVideo {
  std::string id;
  double duration = 0.0;  // seconds
  std::string category;
  double burstiness = 0.0;
  std::map<int, ResolutionVariant> resolutions;  // keyed by height

  const ResolutionVariant* variant(int height) const;
  /// Lowest available resolution; every video has at least one.
  int lowest_height() const;
};

/// Multiplicative AR(1) trace around the requested mean with a deterministic
/// rate spike at every subsegment boundary. The series is calibrated so the
/// empirical mean equals mean_kbps and the relative standard deviation equals
/// the requested burstiness (clamping at zero perturbs both by well under the
/// documented 15% for any burstiness up to 1.5). burstiness 0 yields a
/// constant trace with spikes disabled.
BitrateTrace synth_trace(double duration_seconds, double mean_kbps,
                         double burstiness, double subsegment_seconds,
                         std::uint64_t seed, double ar_coefficient = 0.8,
                         double spike_amplitude = 1.5, double interval = 1.0);

/// One deterministic video: video index i of corpus seed s is identical no
/// matter how generation is partitioned.
SyntheticVideo synth_video(const PopulationProfile& profile,
                           std::uint64_t seed, std::uint64_t index);

std::vector<SyntheticVideo> synth_corpus(std::size_t n,
                                         const PopulationProfile& profile,
                                         std::uint64_t seed);

}  // namespace vidmeter

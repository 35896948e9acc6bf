#include "vidmeter/synth.hpp"

#include <algorithm>
#include <cmath>

#include "vidmeter/error.hpp"
#include "vidmeter/rng.hpp"
#include "vidmeter/scale.hpp"

namespace vidmeter {

namespace {

constexpr int kRedrawLimit = 1000;
constexpr int kCalibrationIterations = 4;

// Purpose tags so each draw stream is independent of the others.
enum : std::uint64_t {
  kStreamDuration = 1,
  kStreamCategory = 2,
  kStreamBurstiness = 3,
  kStreamAvailability = 4,
  kStreamSizes = 5,
  kStreamTrace = 6,
};

Rng stream(std::uint64_t video_seed, std::uint64_t purpose) {
  return Rng(mix_seed(video_seed + purpose * 0x9e3779b97f4a7c15ULL));
}

double spike_cv2(double amplitude, double q) {
  const double d = amplitude - 1.0;
  const double e = 1.0 + d * q;
  return d * d * q * (1.0 - q) / (e * e);
}

}  // namespace

PopulationProfile PopulationProfile::defaults() {
  PopulationProfile p;
  p.size_fits = {
      {{360, Container::mp4}, {2.30, 1.35, 0}},
      {{720, Container::mp4}, {3.77, 1.32, 0}},
      {{1080, Container::mp4}, {4.36, 1.32, 0}},
      {{360, Container::webm}, {2.42, 1.42, 0}},
      {{720, Container::webm}, {3.80, 1.37, 0}},
      {{1080, Container::webm}, {4.39, 1.35, 0}},
  };
  p.availability = {{360, 1.0}, {720, 0.485}, {1080, 0.210}};
  p.webm_noise_sdlog = {{360, 0.26}, {720, 0.16}, {1080, 0.12}};
  p.categories = {
      "Music",         "Entertainment",        "Comedy",
      "Film",          "Sports",               "News",
      "People",        "Gaming",               "Howto",
      "Education",     "Science",              "Autos",
      "Travel",        "Pets",                 "Nonprofits",
  };
  return p;
}

double PopulationProfile::webm_slope_for(int height) const {
  auto mp4 = size_fits.find({height, Container::mp4});
  auto webm = size_fits.find({height, Container::webm});
  if (mp4 != size_fits.end() && webm != size_fits.end()) {
    return std::exp(webm->second.meanlog - mp4->second.meanlog);
  }
  return webm_size_slope;
}

double PopulationProfile::webm_noise_for(int height) const {
  auto it = webm_noise_sdlog.find(height);
  return it != webm_noise_sdlog.end() ? it->second : webm_fallback_noise_sdlog;
}

void PopulationProfile::validate() const {
  for (const auto& [height, prob] : availability) {
    if (prob < 0.0 || prob > 1.0) {
      raise(Errc::profile_error, "availability for " + std::to_string(height) +
                                     "p outside [0, 1]");
    }
    if (!size_fits.contains({height, Container::mp4})) {
      raise(Errc::profile_error,
            "no MP4 size fit for " + std::to_string(height) + "p");
    }
  }
  auto base = availability.find(360);
  if (base == availability.end()) {
    raise(Errc::profile_error, "availability must include 360p");
  }
  for (const auto& [height, prob] : availability) {
    if (prob > base->second) {
      raise(Errc::profile_error, "360p availability must be the maximum");
    }
  }
  for (const auto& [key, fit] : size_fits) {
    if (fit.sdlog < 0.0) raise(Errc::profile_error, "negative sdlog in size fit");
  }
  if (length_fit.sdlog < 0.0) raise(Errc::profile_error, "negative sdlog in length fit");
  if (!(min_sane_mbps > 0.0) || !(max_sane_mbps > min_sane_mbps)) {
    raise(Errc::profile_error, "bad bitrate sanity bounds");
  }
  if (categories.empty()) raise(Errc::profile_error, "no category labels");
}

const ResolutionVariant* SyntheticVideo::variant(int height) const {
  auto it = resolutions.find(height);
  if (it == resolutions.end() || !it->second.available) return nullptr;
  return &it->second;
}

int SyntheticVideo::lowest_height() const {
  for (const auto& [height, v] : resolutions) {
    if (v.available) return height;
  }
  raise(Errc::profile_error, "video has no available resolution");
}

BitrateTrace synth_trace(double duration_seconds, double mean_kbps,
                         double burstiness, double subsegment_seconds,
                         std::uint64_t seed, double ar_coefficient,
                         double spike_amplitude, double interval) {
  if (!(duration_seconds > 0.0) || !(mean_kbps > 0.0)) {
    raise(Errc::domain_error, "duration and mean must be > 0");
  }
  if (burstiness < 0.0) raise(Errc::domain_error, "burstiness must be >= 0");

  const auto n = static_cast<std::size_t>(
      std::max(1.0, std::ceil(duration_seconds / interval)));
  BitrateTrace trace;
  trace.interval = interval;
  trace.source_duration = duration_seconds;

  if (burstiness == 0.0) {
    trace.values.assign(n, mean_kbps);
    return trace;
  }

  // Split the requested variance between the periodic subsegment spike and
  // the AR(1) noise. When the target is below what a full-height spike alone
  // produces, shrink the spike instead and drop the noise.
  const auto spike_every = static_cast<std::size_t>(
      std::max(1.0, std::round(subsegment_seconds / interval)));
  const double q = 1.0 / static_cast<double>(spike_every);
  double amplitude = spike_amplitude;
  double log_var = 0.0;
  const double b2 = burstiness * burstiness;
  if (spike_cv2(amplitude, q) > b2) {
    const double root = std::sqrt(q * (1.0 - q));
    amplitude = 1.0 + burstiness / (root - burstiness * q);
  } else {
    const double cv2_noise = (1.0 + b2) / (1.0 + spike_cv2(amplitude, q)) - 1.0;
    log_var = std::log1p(cv2_noise);
  }

  Rng rng(seed);
  const double sx = std::sqrt(log_var);
  const double innovation =
      sx * std::sqrt(1.0 - ar_coefficient * ar_coefficient);

  trace.values.resize(n);
  double x = rng.normal(0.0, sx);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) x = ar_coefficient * x + rng.normal(0.0, innovation);
    double v = std::exp(x - log_var / 2.0);
    if (i % spike_every == 0) v *= amplitude;
    trace.values[i] = v;
  }

  // Calibrate to the exact requested mean and relative stddev, re-clamping at
  // zero each pass; repeated passes keep the clamp distortion small even for
  // very bursty targets.
  const double target_sd = burstiness * mean_kbps;
  for (int pass = 0; pass < kCalibrationIterations; ++pass) {
    double m = 0.0;
    for (double v : trace.values) m += v;
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : trace.values) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd <= 0.0) break;
    const double gain = target_sd / sd;
    for (auto& v : trace.values) {
      v = std::max(0.0, mean_kbps + (v - m) * gain);
    }
  }
  return trace;
}

SyntheticVideo synth_video(const PopulationProfile& profile,
                           std::uint64_t seed, std::uint64_t index) {
  profile.validate();
  const std::uint64_t video_seed = mix_seed(seed ^ index);

  SyntheticVideo video;
  video.id = "v" + std::to_string(index) + "-" + std::to_string(seed);

  {
    Rng rng = stream(video_seed, kStreamDuration);
    video.duration =
        rng.lognormal(profile.length_fit.meanlog, profile.length_fit.sdlog);
  }
  {
    Rng rng = stream(video_seed, kStreamCategory);
    video.category =
        profile.categories[rng.uniform_index(profile.categories.size())];
  }
  {
    Rng rng = stream(video_seed, kStreamBurstiness);
    video.burstiness = rng.lognormal(profile.burstiness_fit.meanlog,
                                     profile.burstiness_fit.sdlog);
  }

  // Availability: independent draws, then 360p forced whenever anything else
  // is present (and as the last resort so no video is streamless).
  {
    Rng rng = stream(video_seed, kStreamAvailability);
    bool any_other = false;
    std::map<int, bool> available;
    for (const auto& [height, prob] : profile.availability) {
      const bool present = rng.uniform01() < prob;
      available[height] = present;
      if (height != 360 && present) any_other = true;
    }
    if (any_other || std::none_of(available.begin(), available.end(),
                                  [](const auto& kv) { return kv.second; })) {
      available[360] = true;
    }
    for (const auto& [height, present] : available) {
      ResolutionVariant v;
      v.available = present;
      video.resolutions.emplace(height, std::move(v));
    }
  }

  {
    Rng rng = stream(video_seed, kStreamSizes);
    for (auto& [height, variant] : video.resolutions) {
      if (!variant.available) continue;
      const LognormalFit& fit = profile.size_fits.at({height, Container::mp4});

      double size_mb = 0.0;
      bool sane = false;
      for (int attempt = 0; attempt < kRedrawLimit; ++attempt) {
        size_mb = rng.lognormal(fit.meanlog, fit.sdlog);
        const double mbps = size_mb * 8.0 / video.duration;
        if (mbps >= profile.min_sane_mbps && mbps <= profile.max_sane_mbps) {
          sane = true;
          break;
        }
      }
      if (!sane) {
        raise(Errc::profile_error,
              "bitrate sanity bounds unsatisfiable for " +
                  std::to_string(height) + "p");
      }

      variant.mp4_size_mb = size_mb;
      variant.webm_size_mb =
          size_mb * profile.webm_slope_for(height) *
          rng.lognormal(0.0, profile.webm_noise_for(height));
      variant.mean_kbps = size_mb * 8000.0 / video.duration;  // MB -> kbit
      variant.dash_mean_kbps =
          variant.mean_kbps * (1.0 + profile.dash_bitrate_delta);
    }
  }

  // One shared shape per video, rescaled per resolution, keeps the
  // cross-resolution correlation structurally at 1 (>= the profile floor).
  {
    Rng rng = stream(video_seed, kStreamTrace);
    const int base_height = video.lowest_height();
    const ResolutionVariant& base = video.resolutions.at(base_height);
    BitrateTrace shape = synth_trace(
        video.duration, base.mean_kbps, video.burstiness,
        profile.subsegment_seconds, rng.next_u64(), profile.ar_coefficient,
        profile.spike_amplitude);
    for (auto& [height, variant] : video.resolutions) {
      if (!variant.available) continue;
      variant.trace = scale_trace(shape, variant.mean_kbps);
    }
  }
  return video;
}

std::vector<SyntheticVideo> synth_corpus(std::size_t n,
                                         const PopulationProfile& profile,
                                         std::uint64_t seed) {
  if (n < 1) raise(Errc::domain_error, "corpus size must be >= 1");
  std::vector<SyntheticVideo> corpus;
  corpus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    corpus.push_back(synth_video(profile, seed, i));
  }
  return corpus;
}

}  // namespace vidmeter

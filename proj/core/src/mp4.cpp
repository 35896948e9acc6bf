#include "vidmeter/mp4.hpp"

#include <algorithm>
#include <optional>

#include "vidmeter/error.hpp"

namespace vidmeter {

namespace {

constexpr int kMaxBoxDepth = 16;
constexpr std::uint64_t kMaxSamples = 16'000'000;

constexpr std::uint32_t fourcc(const char (&s)[5]) {
  return (std::uint32_t(std::uint8_t(s[0])) << 24) |
         (std::uint32_t(std::uint8_t(s[1])) << 16) |
         (std::uint32_t(std::uint8_t(s[2])) << 8) |
         std::uint32_t(std::uint8_t(s[3]));
}

constexpr std::uint32_t kMoov = fourcc("moov");
constexpr std::uint32_t kTrak = fourcc("trak");
constexpr std::uint32_t kTkhd = fourcc("tkhd");
constexpr std::uint32_t kMdia = fourcc("mdia");
constexpr std::uint32_t kMdhd = fourcc("mdhd");
constexpr std::uint32_t kHdlr = fourcc("hdlr");
constexpr std::uint32_t kMinf = fourcc("minf");
constexpr std::uint32_t kStbl = fourcc("stbl");
constexpr std::uint32_t kStsz = fourcc("stsz");
constexpr std::uint32_t kStts = fourcc("stts");
constexpr std::uint32_t kMvex = fourcc("mvex");
constexpr std::uint32_t kTrex = fourcc("trex");
constexpr std::uint32_t kMoof = fourcc("moof");
constexpr std::uint32_t kTraf = fourcc("traf");
constexpr std::uint32_t kTfhd = fourcc("tfhd");
constexpr std::uint32_t kTrun = fourcc("trun");
constexpr std::uint32_t kVide = fourcc("vide");

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, std::uint64_t base_offset)
      : data_(data), base_(base_offset) {}

  std::uint64_t remaining() const { return data_.size() - pos_; }
  std::uint64_t pos() const { return pos_; }
  std::uint64_t file_offset() const { return base_ + pos_; }

  void require(std::uint64_t n) const {
    if (remaining() < n) {
      raise(Errc::truncated_box,
            "need " + std::to_string(n) + " bytes at offset " +
                std::to_string(base_ + pos_),
            static_cast<std::int64_t>(base_ + pos_));
    }
  }

  std::uint8_t u8() {
    require(1);
    return data_[pos_++];
  }

  std::uint32_t u24() {
    require(3);
    std::uint32_t v = (std::uint32_t(data_[pos_]) << 16) |
                      (std::uint32_t(data_[pos_ + 1]) << 8) |
                      std::uint32_t(data_[pos_ + 2]);
    pos_ += 3;
    return v;
  }

  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += 8;
    return v;
  }

  void skip(std::uint64_t n) {
    require(n);
    pos_ += n;
  }

  ByteReader sub(std::uint64_t length) {
    require(length);
    ByteReader r(data_.subspan(pos_, length), base_ + pos_);
    pos_ += length;
    return r;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::uint64_t pos_ = 0;
  std::uint64_t base_ = 0;
};

struct Track {
  std::uint32_t track_id = 0;
  std::uint32_t timescale = 0;
  bool is_video = false;
  std::vector<std::uint32_t> sizes;
  std::vector<std::uint32_t> deltas;
  double declared_duration = 0.0;
};

struct TrexDefaults {
  std::uint32_t track_id = 0;
  std::uint32_t default_duration = 0;
  std::uint32_t default_size = 0;
};

struct FragmentRun {
  std::uint32_t track_id = 0;
  std::vector<std::uint32_t> sizes;
  std::vector<std::uint32_t> deltas;
};

struct ParseState {
  std::vector<Track> tracks;
  std::vector<TrexDefaults> trex;
  std::vector<FragmentRun> runs;
  bool saw_moof = false;
};

void check_table_budget(std::uint64_t entries, std::uint64_t entry_bytes,
                        const ByteReader& r, const char* what) {
  if (entries > kMaxSamples || entries * entry_bytes > r.remaining()) {
    raise(Errc::inconsistent_sample_table,
          std::string(what) + " declares " + std::to_string(entries) +
              " entries but only " + std::to_string(r.remaining()) +
              " bytes remain");
  }
}

void parse_stsz(ByteReader r, Track& track) {
  r.u8();   // version
  r.u24();  // flags
  const std::uint32_t uniform_size = r.u32();
  const std::uint32_t count = r.u32();
  if (count > kMaxSamples) {
    raise(Errc::inconsistent_sample_table,
          "stsz sample count " + std::to_string(count) + " over limit");
  }
  track.sizes.clear();
  if (uniform_size == 0) {
    check_table_budget(count, 4, r, "stsz");
    track.sizes.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) track.sizes.push_back(r.u32());
  } else {
    track.sizes.assign(count, uniform_size);
  }
}

void parse_stts(ByteReader r, Track& track) {
  r.u8();
  r.u24();
  const std::uint32_t entry_count = r.u32();
  check_table_budget(entry_count, 8, r, "stts");
  track.deltas.clear();
  std::uint64_t total = 0;
  for (std::uint32_t i = 0; i < entry_count; ++i) {
    const std::uint32_t count = r.u32();
    const std::uint32_t delta = r.u32();
    total += count;
    if (total > kMaxSamples) {
      raise(Errc::inconsistent_sample_table,
            "stts expands to " + std::to_string(total) + " samples");
    }
    track.deltas.insert(track.deltas.end(), count, delta);
  }
}

void parse_mdhd(ByteReader r, Track& track) {
  const std::uint8_t version = r.u8();
  r.u24();
  std::uint64_t duration = 0;
  if (version == 1) {
    r.u64();  // creation
    r.u64();  // modification
    track.timescale = r.u32();
    duration = r.u64();
  } else {
    r.u32();
    r.u32();
    track.timescale = r.u32();
    duration = r.u32();
  }
  if (track.timescale == 0) {
    raise(Errc::inconsistent_sample_table, "mdhd timescale is zero");
  }
  const std::uint64_t unknown =
      version == 1 ? ~std::uint64_t{0} : std::uint64_t{0xffffffff};
  if (duration != 0 && duration != unknown) {
    track.declared_duration =
        static_cast<double>(duration) / static_cast<double>(track.timescale);
  }
}

void parse_tkhd(ByteReader r, Track& track) {
  const std::uint8_t version = r.u8();
  r.u24();
  if (version == 1) {
    r.u64();
    r.u64();
    track.track_id = r.u32();
  } else {
    r.u32();
    r.u32();
    track.track_id = r.u32();
  }
}

void parse_hdlr(ByteReader r, Track& track) {
  r.u8();
  r.u24();
  r.u32();  // pre_defined
  track.is_video = (r.u32() == kVide);
}

struct TfhdInfo {
  std::uint32_t track_id = 0;
  std::optional<std::uint32_t> default_duration;
  std::optional<std::uint32_t> default_size;
};

TfhdInfo parse_tfhd(ByteReader r) {
  r.u8();
  const std::uint32_t flags = r.u24();
  TfhdInfo info;
  info.track_id = r.u32();
  if (flags & 0x000001) r.u64();  // base-data-offset
  if (flags & 0x000002) r.u32();  // sample-description-index
  if (flags & 0x000008) info.default_duration = r.u32();
  if (flags & 0x000010) info.default_size = r.u32();
  return info;
}

void parse_trun(ByteReader r, const TfhdInfo& tfhd, const TrexDefaults* trex,
                FragmentRun& run) {
  r.u8();
  const std::uint32_t flags = r.u24();
  const std::uint32_t count = r.u32();
  if (count > kMaxSamples || run.sizes.size() + count > kMaxSamples) {
    raise(Errc::inconsistent_sample_table,
          "trun sample count " + std::to_string(count) + " over limit");
  }
  const bool has_duration = flags & 0x000100;
  const bool has_size = flags & 0x000200;
  if (has_duration || has_size) {
    std::uint64_t per_sample = (has_duration ? 4 : 0) + (has_size ? 4 : 0) +
                               ((flags & 0x000400) ? 4 : 0) +
                               ((flags & 0x000800) ? 4 : 0);
    check_table_budget(count, per_sample, r, "trun");
  }
  if (flags & 0x000001) r.u32();  // data-offset
  if (flags & 0x000004) r.u32();  // first-sample-flags

  std::optional<std::uint32_t> fallback_duration = tfhd.default_duration;
  std::optional<std::uint32_t> fallback_size = tfhd.default_size;
  if (trex) {
    if (!fallback_duration) fallback_duration = trex->default_duration;
    if (!fallback_size) fallback_size = trex->default_size;
  }

  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t duration = 0;
    std::uint32_t size = 0;
    if (has_duration) {
      duration = r.u32();
    } else if (fallback_duration) {
      duration = *fallback_duration;
    } else {
      raise(Errc::inconsistent_sample_table,
            "trun sample has no duration and no default");
    }
    if (has_size) {
      size = r.u32();
    } else if (fallback_size) {
      size = *fallback_size;
    } else {
      raise(Errc::inconsistent_sample_table,
            "trun sample has no size and no default");
    }
    if (flags & 0x000400) r.u32();  // sample flags
    if (flags & 0x000800) r.u32();  // composition offset
    run.deltas.push_back(duration);
    run.sizes.push_back(size);
  }
}

struct BoxHeader {
  std::uint32_t type = 0;
  std::uint64_t payload_length = 0;
};

BoxHeader read_box_header(ByteReader& r) {
  const std::uint64_t start = r.file_offset();
  std::uint64_t size = r.u32();
  BoxHeader header;
  header.type = r.u32();
  std::uint64_t header_len = 8;
  if (size == 1) {
    size = r.u64();
    header_len = 16;
  } else if (size == 0) {
    size = r.remaining() + header_len;  // box extends to end of enclosure
  }
  if (size < header_len) {
    raise(Errc::truncated_box,
          "box size " + std::to_string(size) + " smaller than header at offset " +
              std::to_string(start),
          static_cast<std::int64_t>(start));
  }
  header.payload_length = size - header_len;
  if (header.payload_length > r.remaining()) {
    raise(Errc::truncated_box,
          "box at offset " + std::to_string(start) + " runs past end of input",
          static_cast<std::int64_t>(start));
  }
  return header;
}

void parse_container(ByteReader r, ParseState& state, int depth,
                     Track* track, TfhdInfo* tfhd, FragmentRun* run);

void handle_box(std::uint32_t type, ByteReader payload, ParseState& state,
                int depth, Track* track, TfhdInfo* tfhd, FragmentRun* run) {
  switch (type) {
    case kMoov:
    case kMvex:
      parse_container(std::move(payload), state, depth + 1, track, tfhd, run);
      break;
    case kTrak: {
      state.tracks.emplace_back();
      parse_container(std::move(payload), state, depth + 1,
                      &state.tracks.back(), tfhd, run);
      break;
    }
    case kMdia:
    case kMinf:
    case kStbl:
      if (track) {
        parse_container(std::move(payload), state, depth + 1, track, tfhd, run);
      }
      break;
    case kTkhd:
      if (track) parse_tkhd(std::move(payload), *track);
      break;
    case kMdhd:
      if (track) parse_mdhd(std::move(payload), *track);
      break;
    case kHdlr:
      if (track) parse_hdlr(std::move(payload), *track);
      break;
    case kStsz:
      if (track) parse_stsz(std::move(payload), *track);
      break;
    case kStts:
      if (track) parse_stts(std::move(payload), *track);
      break;
    case kTrex: {
      ByteReader r = std::move(payload);
      r.u8();
      r.u24();
      TrexDefaults d;
      d.track_id = r.u32();
      r.u32();  // default sample description index
      d.default_duration = r.u32();
      d.default_size = r.u32();
      state.trex.push_back(d);
      break;
    }
    case kMoof: {
      state.saw_moof = true;
      parse_container(std::move(payload), state, depth + 1, nullptr, nullptr,
                      nullptr);
      break;
    }
    case kTraf: {
      // Scan tfhd first so trun defaults are known, then replay for truns.
      ByteReader scan = payload;
      TfhdInfo info;
      bool have_tfhd = false;
      while (scan.remaining() >= 8) {
        BoxHeader h = read_box_header(scan);
        ByteReader body = scan.sub(h.payload_length);
        if (h.type == kTfhd) {
          info = parse_tfhd(std::move(body));
          have_tfhd = true;
          break;
        }
      }
      if (!have_tfhd) {
        raise(Errc::inconsistent_sample_table, "traf without tfhd");
      }
      FragmentRun fragment;
      fragment.track_id = info.track_id;
      parse_container(std::move(payload), state, depth + 1, nullptr, &info,
                      &fragment);
      state.runs.push_back(std::move(fragment));
      break;
    }
    case kTrun: {
      if (tfhd && run) {
        const TrexDefaults* trex = nullptr;
        for (const auto& d : state.trex) {
          if (d.track_id == tfhd->track_id) trex = &d;
        }
        parse_trun(std::move(payload), *tfhd, trex, *run);
      }
      break;
    }
    default:
      break;  // unknown boxes skipped silently
  }
}

void parse_container(ByteReader r, ParseState& state, int depth, Track* track,
                     TfhdInfo* tfhd, FragmentRun* run) {
  if (depth > kMaxBoxDepth) {
    raise(Errc::truncated_box, "box nesting deeper than " +
                                   std::to_string(kMaxBoxDepth),
          static_cast<std::int64_t>(r.file_offset()));
  }
  while (r.remaining() > 0) {
    if (r.remaining() < 8) {
      raise(Errc::truncated_box,
            "trailing " + std::to_string(r.remaining()) +
                " bytes are not a box at offset " +
                std::to_string(r.file_offset()),
            static_cast<std::int64_t>(r.file_offset()));
    }
    BoxHeader header = read_box_header(r);
    ByteReader payload = r.sub(header.payload_length);
    handle_box(header.type, std::move(payload), state, depth, track, tfhd, run);
  }
}

}  // namespace

Mp4SampleTable extract_sample_table(std::span<const std::uint8_t> bytes) {
  ParseState state;
  parse_container(ByteReader(bytes, 0), state, 0, nullptr, nullptr, nullptr);

  const Track* video = nullptr;
  for (const auto& t : state.tracks) {
    if (t.is_video) {
      video = &t;
      break;
    }
  }
  if (!video) raise(Errc::no_video_track, "no video track in moov");
  if (video->timescale == 0) {
    raise(Errc::inconsistent_sample_table, "video track has no timescale");
  }
  if (video->sizes.size() != video->deltas.size()) {
    raise(Errc::inconsistent_sample_table,
          "stsz has " + std::to_string(video->sizes.size()) +
              " samples but stts expands to " +
              std::to_string(video->deltas.size()));
  }

  Mp4SampleTable table;
  table.timescale = video->timescale;
  table.sample_sizes = video->sizes;
  table.sample_deltas = video->deltas;
  table.fragmented = state.saw_moof;
  table.declared_duration = video->declared_duration;

  for (const auto& fragment : state.runs) {
    if (fragment.track_id != video->track_id) continue;
    table.sample_sizes.insert(table.sample_sizes.end(), fragment.sizes.begin(),
                              fragment.sizes.end());
    table.sample_deltas.insert(table.sample_deltas.end(),
                               fragment.deltas.begin(), fragment.deltas.end());
  }
  if (table.sample_sizes.size() > kMaxSamples) {
    raise(Errc::inconsistent_sample_table, "sample count over limit");
  }
  if (table.sample_sizes.empty()) {
    raise(Errc::no_video_track, "video track declares zero samples");
  }
  return table;
}

FrameLog sample_table_to_framelog(const Mp4SampleTable& table,
                                  std::string video_id) {
  if (table.timescale == 0) {
    raise(Errc::inconsistent_sample_table, "timescale is zero");
  }
  if (table.sample_sizes.size() != table.sample_deltas.size()) {
    raise(Errc::inconsistent_sample_table, "size/delta count mismatch");
  }
  FrameLog log;
  log.video_id = std::move(video_id);
  log.frames.reserve(table.sample_sizes.size());
  const double scale = 1.0 / static_cast<double>(table.timescale);
  std::uint64_t ticks = 0;  // decode time before sample i
  for (std::size_t i = 0; i < table.sample_sizes.size(); ++i) {
    Frame f;
    f.pts = static_cast<double>(ticks) * scale;
    f.size = table.sample_sizes[i];
    log.frames.push_back(f);
    ticks += table.sample_deltas[i];
  }
  if (table.declared_duration > 0.0) {
    const double last = log.frames.back().pts;
    // A stale init-segment duration must not clip the extracted timeline.
    log.declared_duration = std::max(table.declared_duration, last);
  }
  log.validate();
  return log;
}

FrameLog parse_mp4(std::span<const std::uint8_t> bytes, std::string video_id) {
  return sample_table_to_framelog(extract_sample_table(bytes),
                                  std::move(video_id));
}

}  // namespace vidmeter

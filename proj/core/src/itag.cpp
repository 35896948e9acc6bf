#include "vidmeter/itag.hpp"

#include <array>

namespace vidmeter {

const char* container_name(Container c) {
  switch (c) {
    case Container::mp4: return "MP4";
    case Container::webm: return "WebM";
    case Container::flv: return "FLV";
    case Container::mp4_dash: return "MP4-DASH";
  }
  return "?";
}

std::optional<Container> container_from_name(const std::string& name) {
  if (name == "MP4") return Container::mp4;
  if (name == "WebM") return Container::webm;
  if (name == "FLV") return Container::flv;
  if (name == "MP4-DASH") return Container::mp4_dash;
  return std::nullopt;
}

namespace {

// DASH itags (137/136/135/134) carry no audio track; audio ships separately.
constexpr std::array<ItagDescriptor, 11> kCatalog{{
    {46, kRes1080, Container::webm, true},
    {45, kRes720, Container::webm, true},
    {43, kRes360, Container::webm, true},
    {37, kRes1080, Container::mp4, true},
    {22, kRes720, Container::mp4, true},
    {18, kRes360, Container::mp4, true},
    {137, kRes1080, Container::mp4_dash, false},
    {136, kRes720, Container::mp4_dash, false},
    {135, kRes480, Container::mp4_dash, false},
    {134, kRes360, Container::mp4_dash, false},
    {34, kRes360, Container::flv, true},
}};

}  // namespace

std::span<const ItagDescriptor> itag_catalog() { return kCatalog; }

std::optional<ItagDescriptor> find_itag(int code) {
  for (const auto& d : kCatalog) {
    if (d.code == code) return d;
  }
  return std::nullopt;
}

std::optional<ItagDescriptor> itag_for(Resolution res, Container container) {
  for (const auto& d : kCatalog) {
    if (d.resolution == res && d.container == container) return d;
  }
  return std::nullopt;
}

}  // namespace vidmeter

#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>

namespace vidmeter {

enum class Container { mp4, webm, flv, mp4_dash };

const char* container_name(Container c);
std::optional<Container> container_from_name(const std::string& name);

/// Video resolution named by frame height ("360p", "1080p", ...).
struct Resolution {
  int height = 0;

  std::string label() const { return std::to_string(height) + "p"; }
  auto operator<=>(const Resolution&) const = default;
};

inline constexpr Resolution kRes240{240};
inline constexpr Resolution kRes360{360};
inline constexpr Resolution kRes480{480};
inline constexpr Resolution kRes720{720};
inline constexpr Resolution kRes1080{1080};

/// One stream variant: the numeric itag plus what it encodes.
struct ItagDescriptor {
  int code = 0;
  Resolution resolution{};
  Container container = Container::mp4;
  bool has_audio = false;

  bool operator==(const ItagDescriptor&) const = default;
};

/// The built-in catalog of the eleven itags the toolkit knows about.
std::span<const ItagDescriptor> itag_catalog();

/// Catalog lookup by itag code; nullopt for codes outside the catalog.
std::optional<ItagDescriptor> find_itag(int code);

/// Preferred single-file MP4 itag for a resolution (18/22/37), used when
/// synthesized streams are exported as frame logs.
std::optional<ItagDescriptor> itag_for(Resolution res, Container container);

}  // namespace vidmeter

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace nongauss {

enum class Family {
  twin_beam,
  photon_subtracted,
  photon_added,
  squeezed_number,
  squeezed_bell,
  scheme_ideal,
  scheme_realistic,
};

// Conditioning measurement on the ancilla modes.
enum class Detector {
  ideal,   // single-photon projector |1><1|
  on_off,  // threshold POVM with efficiency eta
};

std::string to_string(Family f);
std::string to_string(Detector d);
std::optional<Family> parse_family(std::string_view name);
std::optional<Detector> parse_detector(std::string_view name);

inline bool is_scheme(Family f) { return f == Family::scheme_ideal || f == Family::scheme_realistic; }

}  // namespace nongauss

#include "nongauss/scheme_config.hpp"

#include "nongauss/errors.hpp"
#include "nongauss/family.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <utility>

namespace nongauss {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilyNames{{
    {Family::twin_beam, "twin-beam"},
    {Family::photon_subtracted, "photon-subtracted"},
    {Family::photon_added, "photon-added"},
    {Family::squeezed_number, "squeezed-number"},
    {Family::squeezed_bell, "squeezed-bell"},
    {Family::scheme_ideal, "scheme-ideal"},
    {Family::scheme_realistic, "scheme-realistic"},
}};

}  // namespace

void SchemeConfig::validate() const {
  auto fail = [](const char* field, double v, const char* range) {
    throw InvalidArgument(fmt::format("{} = {} outside {}", field, v, range));
  };
  if (!(r >= 0.0) || !std::isfinite(r)) fail("r", r, "[0, inf)");
  if (!(s >= 0.0) || !std::isfinite(s)) fail("s", s, "[0, inf)");
  for (auto [name, v] : {std::pair{"T1", T1}, {"T2", T2}, {"T_loss", T_loss}, {"T_thermal", T_thermal}}) {
    if (!(v > 0.0 && v <= 1.0)) fail(name, v, "(0, 1]");
  }
  for (auto [name, v] : {std::pair{"eta3", eta3}, {"eta4", eta4}}) {
    if (!(v > 0.0 && v <= 1.0)) fail(name, v, "(0, 1]");
  }
  if (!(n_thermal >= 0.0)) fail("n_thermal", n_thermal, "[0, inf)");
  if (!std::isfinite(phi_zeta)) fail("phi_zeta", phi_zeta, "finite values");
  if (!std::isfinite(phi_xi)) fail("phi_xi", phi_xi, "finite values");
  if (cutoff < 1) fail("cutoff", cutoff, "[1, inf)");
}

std::string to_string(Family f) {
  for (const auto& [fam, name] : kFamilyNames) {
    if (fam == f) return std::string(name);
  }
  return "unknown";
}

std::string to_string(Detector d) { return d == Detector::ideal ? "ideal" : "on-off"; }

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [fam, n] : kFamilyNames) {
    if (n == name) return fam;
  }
  return std::nullopt;
}

std::optional<Detector> parse_detector(std::string_view name) {
  if (name == "ideal") return Detector::ideal;
  if (name == "on-off" || name == "onoff" || name == "on_off") return Detector::on_off;
  return std::nullopt;
}

}  // namespace nongauss

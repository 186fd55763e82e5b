#pragma once

// Two-mode resource states for teleportation: the de-Gaussified twin beams, the
// squeezed Bell ansatz and the states heralded by the generation scheme.

#include "nongauss/family.hpp"
#include "nongauss/gauss_poly.hpp"
#include "nongauss/scheme_config.hpp"
#include "nongauss/symplectic.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace nongauss {

struct ResourceState {
  Family family{Family::twin_beam};
  PolyGaussFunction chi;  // modes 0,1, chi(0,0) = 1
  std::optional<double> success_prob;
  double r{0.0};
  std::optional<double> delta;          // squeezed Bell mixing angle
  std::optional<SchemeConfig> config;   // scheme families only
  std::optional<Detector> detector;
  std::vector<std::string> notes;
};

// One ladder operator acting on a mode.
struct Ladder {
  std::size_t mode;
  bool dagger;
};
using LadderWord = std::vector<Ladder>;  // leftmost operator first

// chi of o X and X o, given chi of X.
PolyGaussFunction ladder_left(const PolyGaussFunction& chi, Ladder o);
PolyGaussFunction ladder_right(const PolyGaussFunction& chi, Ladder o);

// chi of P rho P^dag for P = sum_k c_k word_k, without normalization.
PolyGaussFunction apply_operator(const PolyGaussFunction& chi,
                                 const std::vector<std::pair<cplx, LadderWord>>& op);

// Divides by chi(0,...,0); throws PhysicalityError on a zero-norm state.
PolyGaussFunction normalize_chi(const PolyGaussFunction& chi);

// delta is read only for the squeezed Bell family (default 0).
ResourceState theoretical_state(Family family, double r, std::optional<double> delta = std::nullopt);

ResourceState scheme_state(const SchemeConfig& cfg, Detector detector);

// Squeezed Bell angle reproducing a de-Gaussified family.
double delta_photon_subtracted(double r);
double delta_photon_added(double r);
inline double delta_squeezed_number() { return std::numbers::pi / 2; }

// tan kappa = sqrt((1 - T)/T).
double mixing_angle(double T);

// Small-kappa squeezed Bell angle of the ideal scheme,
// arctan(k^2 sinh^2 r / (s + k^2 sinh r cosh r)) with k^2 = kappa1 kappa2.
double delta_equivalent(const SchemeConfig& cfg);

// r' = -1/2 ln[1 - T (1 - e^{-2r})].
double effective_squeezing(double r, double T_loss);

// 10 log10 e^{2r}.
double squeezing_db(double r);

}  // namespace nongauss

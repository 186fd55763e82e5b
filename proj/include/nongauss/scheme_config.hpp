#pragma once

#include <numbers>
#include <string>

namespace nongauss {

// Full parameter set of one generation-scheme evaluation. Modes are numbered
// 0..3 in code (signal pair 0,1; ancilla pair 2,3).
struct SchemeConfig {
  double r{1.0};                          // principal squeezing amplitude
  double s{0.0};                          // ancillary squeezing amplitude
  double phi_zeta{std::numbers::pi};
  double phi_xi{std::numbers::pi};
  double T1{0.99};                        // signal/ancilla mixing, modes 0,2
  double T2{0.99};                        // modes 1,3
  double T_loss{1.0};                     // per-mode channel transmissivity
  double T_thermal{1.0};                  // thermal beam splitter stage
  double n_thermal{0.0};
  double eta3{0.15};
  double eta4{0.15};
  bool loss_on_ancilla{true};             // false: loss only on modes 0,1
  int cutoff{20};                         // Fock oracle truncation

  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

// Twin-beam-family phase convention: phi = pi gives zeta = -r.
inline constexpr double kDefaultPhase = std::numbers::pi;

}  // namespace nongauss

#pragma once

// End-to-end Fock-space constructions of every resource family, built only
// from the fock.hpp operators.

#include "nongauss/family.hpp"
#include "nongauss/fock.hpp"
#include "nongauss/scheme_config.hpp"

namespace nongauss::fock {

struct OracleResult {
  FockDensity rho;  // normalized two-mode state
  double success_prob{1.0};
  int cutoff{0};    // truncation actually used
  double leak{0.0};
};

// 20 per mode up to r = 1, 30 up to r = 1.6, growing beyond.
int default_cutoff(double r);

// Squeeze, mix, lose and condition. Losses on modes 2,3 are folded into the
// detector weights and losses on modes 0,1 act on the conditioned density.
// The cutoff starts at cfg.cutoff and grows by 5 until every squeezer leaks
// less than leak_tol.
OracleResult scheme_oracle(const SchemeConfig& cfg, Detector detector, double leak_tol = 1e-8,
                           int max_cutoff = 45);

// Photon-subtracted, photon-added, squeezed-number and squeezed Bell states, all with phase pi.
OracleResult theoretical_oracle(Family family, double r, double delta, int cutoff, double leak_tol = 1e-8,
                                int max_cutoff = 90);

}  // namespace nongauss::fock

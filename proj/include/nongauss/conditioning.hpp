#pragma once

// Heralding the scheme's ancilla modes in phase space: the four-mode Gaussian
// chi is integrated against detector kernels on modes 2,3, leaving a
// non-Gaussian two-mode chi on modes 0,1.

#include "nongauss/family.hpp"
#include "nongauss/gauss_poly.hpp"
#include "nongauss/symplectic.hpp"

namespace nongauss {

// chi of the POVM element, as a function of one complex variable.
struct DetectorKernel {
  Detector kind{Detector::ideal};
  double efficiency{1.0};
  PolyGaussFunction kernel;

  // (1 - |b|^2) exp(-|b|^2 / 2), the single-photon projector.
  static DetectorKernel ideal();
  // pi delta2(b) - (1/eta) exp(-((2 - eta)/(2 eta)) |b|^2).
  static DetectorKernel on_off(double eta);
};

struct ConditionedState {
  PolyGaussFunction chi;  // modes 0,1, chi(0,0) = 1
  double success_prob{0.0};
  Detector detector3{Detector::ideal};
  Detector detector4{Detector::ideal};
};

// (1/pi^2) int d2b3 d2b4 chi_1234 K3 K4, before normalization.
PolyGaussFunction condition_unnormalized(const GaussianChar& chi4, const DetectorKernel& d3,
                                         const DetectorKernel& d4);

// Same integral for two on/off detectors, written out as the four pieces
// chi(b1,b2,0,0) + (1/pi) int G4 + (1/pi) int G3 + (1/pi^2) int int G3 G4.
PolyGaussFunction condition_on_off_expanded(const GaussianChar& chi4, double eta3, double eta4);

// Throws DegeneratePostselection when the heralding probability vanishes.
ConditionedState condition(const GaussianChar& chi4, const DetectorKernel& d3, const DetectorKernel& d4);

// Heralding probability, computed with modes 0,1 pinned at zero.
double success_probability(const GaussianChar& chi4, const DetectorKernel& d3, const DetectorKernel& d4);

}  // namespace nongauss

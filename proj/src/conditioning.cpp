#include "nongauss/conditioning.hpp"

#include "nongauss/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace nongauss {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kAncilla[2] = {2, 3};

void check_four_modes(const GaussianChar& chi4) {
  if (chi4.n_modes() != 4) {
    throw InvalidArgument(fmt::format("conditioning needs a four-mode chi, got {} modes", chi4.n_modes()));
  }
}

// Kernel placed on `mode` of a four-mode space.
PolyGaussFunction kernel_on(const DetectorKernel& d, std::size_t mode, std::size_t n_modes = 4) {
  const std::size_t target[1] = {mode};
  return embed_modes(d.kernel, n_modes, target);
}

// Splits a kernel into single-monomial pieces, so that cancellations between
// them stay visible to the degeneracy test.
std::vector<PolyGaussFunction> kernel_pieces(const DetectorKernel& d) {
  std::vector<PolyGaussFunction> pieces;
  for (const auto& t : d.kernel.terms()) {
    for (const auto& [mono, c] : t.poly.coefficients()) {
      GaussPolyTerm one = t;
      one.poly = Polynomial(t.poly.n_vars());
      one.poly.add(mono, c);
      PolyGaussFunction f(d.kernel.n_vars());
      f.add_term(std::move(one));
      pieces.push_back(std::move(f));
    }
  }
  return pieces;
}

// One complex mode of the Gaussian piece -(1/eta) exp(-a/2 |b|^2).
PolyGaussFunction on_off_gaussian(double eta) {
  const double a = (2.0 - eta) / eta;
  return PolyGaussFunction::gaussian(a * Eigen::Matrix2d::Identity(), -1.0 / eta);
}

}  // namespace

DetectorKernel DetectorKernel::ideal() {
  PolyGaussFunction k(2);
  GaussPolyTerm t;
  t.poly = Polynomial::constant(2, 1.0);
  t.poly.add({2, 0}, -1.0);
  t.poly.add({0, 2}, -1.0);
  t.quad = Eigen::Matrix2d::Identity();
  t.lin = Eigen::Vector2cd::Zero();
  k.add_term(std::move(t));
  return {Detector::ideal, 1.0, std::move(k)};
}

DetectorKernel DetectorKernel::on_off(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument(fmt::format("detector efficiency {} outside (0,1]", eta));
  return {Detector::on_off, eta, add(PolyGaussFunction::point_mass(2, 0), on_off_gaussian(eta))};
}

PolyGaussFunction condition_unnormalized(const GaussianChar& chi4, const DetectorKernel& d3,
                                         const DetectorKernel& d4) {
  check_four_modes(chi4);
  const PolyGaussFunction integrand =
      multiply(multiply(chi4.to_poly_gauss(), kernel_on(d3, 2)), kernel_on(d4, 3));
  return scale(integrate_out(integrand, kAncilla), 1.0 / (kPi * kPi));
}

PolyGaussFunction condition_on_off_expanded(const GaussianChar& chi4, double eta3, double eta4) {
  check_four_modes(chi4);
  const PolyGaussFunction chi = chi4.to_poly_gauss();
  const std::size_t mode2[1] = {2};
  const std::size_t mode3[1] = {3};
  const PolyGaussFunction g3 = embed_modes(on_off_gaussian(eta3), 4, mode2);
  const PolyGaussFunction g4 = embed_modes(on_off_gaussian(eta4), 4, mode3);

  const PolyGaussFunction dd = restrict_to_zero(chi, kAncilla);
  // The remaining pieces keep one ancilla variable, integrated in 3 modes.
  const std::size_t anc_last[1] = {2};
  const PolyGaussFunction dg =
      integrate_out(multiply(restrict_to_zero(chi, mode2), restrict_to_zero(g4, mode2)), anc_last);
  const PolyGaussFunction gd =
      integrate_out(multiply(restrict_to_zero(chi, mode3), restrict_to_zero(g3, mode3)), anc_last);
  const PolyGaussFunction gg = integrate_out(multiply(multiply(chi, g3), g4), kAncilla);
  return add(add(dd, scale(dg, 1.0 / kPi)), add(scale(gd, 1.0 / kPi), scale(gg, 1.0 / (kPi * kPi))));
}

ConditionedState condition(const GaussianChar& chi4, const DetectorKernel& d3, const DetectorKernel& d4) {
  const double p = success_probability(chi4, d3, d4);
  return {canonicalize(scale(condition_unnormalized(chi4, d3, d4), 1.0 / p)), p, d3.kind, d4.kind};
}

double success_probability(const GaussianChar& chi4, const DetectorKernel& d3, const DetectorKernel& d4) {
  check_four_modes(chi4);
  const std::size_t signal[2] = {0, 1};
  const PolyGaussFunction reduced = restrict_to_zero(chi4.to_poly_gauss(), signal);
  const std::size_t first[1] = {0};
  const std::size_t second[1] = {1};
  double p = 0.0;
  double magnitude = 0.0;
  for (const auto& k3 : kernel_pieces(d3)) {
    const PolyGaussFunction k3e = embed_modes(k3, 2, first);
    for (const auto& k4 : kernel_pieces(d4)) {
      const PolyGaussFunction integrand = multiply(multiply(reduced, k3e), embed_modes(k4, 2, second));
      const double v = integrate_out(integrand, signal).scalar().real() / (kPi * kPi);
      p += v;
      magnitude += std::abs(v);
    }
  }
  if (!(std::abs(p) > 1e-12 * magnitude) || !(p > 0.0)) {
    throw DegeneratePostselection(fmt::format("heralding probability {:.3g} vanishes", p));
  }
  return p;
}

}  // namespace nongauss

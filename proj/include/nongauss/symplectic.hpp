#pragma once

// Zero-mean Gaussian characteristic functions chi(x) = exp(-1/2 x^T S x) and
// the linear-optics maps acting on them.

#include "nongauss/gauss_poly.hpp"
#include "nongauss/scheme_config.hpp"

#include <Eigen/Dense>

#include <utility>

namespace nongauss {

struct SqueezeParam {
  double amplitude{0.0};
  double phase{kDefaultPhase};
};

struct ChannelParam {
  double transmissivity{1.0};
  double thermal_occupation{0.0};
};

class GaussianChar {
 public:
  // Vacuum on n_modes modes.
  explicit GaussianChar(std::size_t n_modes);
  // Throws PhysicalityError unless exponent is symmetric PSD.
  GaussianChar(std::size_t n_modes, Eigen::MatrixXd exponent);

  std::size_t n_modes() const { return n_modes_; }
  const Eigen::MatrixXd& exponent() const { return exponent_; }

  cplx operator()(std::span<const double> x) const;
  PolyGaussFunction to_poly_gauss() const;

 private:
  std::size_t n_modes_;
  Eigen::MatrixXd exponent_;
};

GaussianChar vacuum_char(std::size_t n_modes);

// Two-mode squeezed vacuum S_ij(zeta)|0,0> on modes (i,j) of an n-mode vacuum.
GaussianChar two_mode_squeezed_char(const SqueezeParam& p, std::pair<std::size_t, std::size_t> modes,
                                    std::size_t n_modes = 2);

// Single-mode thermal state with mean occupation n_bar.
GaussianChar thermal_char(double n_bar, std::size_t mode = 0, std::size_t n_modes = 1);

// Block-diagonal product of independent characteristic functions.
GaussianChar direct_sum(const GaussianChar& a, const GaussianChar& b);

// Real 2n x 2n map L of the SU(2) substitution alpha_i = sqrt(T) b_i - sqrt(R) b_j,
// alpha_j = sqrt(T) b_j + sqrt(R) b_i. chi_out(b) = chi_in(L b).
Eigen::MatrixXd beam_splitter_map(std::size_t n_modes, std::pair<std::size_t, std::size_t> modes, double T);

GaussianChar beam_splitter_substitute(const GaussianChar& f, std::pair<std::size_t, std::size_t> modes, double T);
PolyGaussFunction beam_splitter_substitute(const PolyGaussFunction& f, std::pair<std::size_t, std::size_t> modes,
                                           double T);

// chi(alpha) -> chi(sqrt(T) alpha) chi_env(sqrt(R) alpha) on one mode, with a
// thermal environment of occupation n_bar (vacuum when n_bar = 0).
GaussianChar loss_channel(const GaussianChar& f, std::size_t mode, double T_loss, double n_bar = 0.0);

// Thermal beam splitter followed by a vacuum beam splitter on one mode.
GaussianChar thermal_loss_chain(const GaussianChar& f, std::size_t mode, const ChannelParam& thermal,
                                double T_loss);

// chi_1234 of the scheme: two twin beams, per-mode channels, then the two
// mixing beam splitters on (0,2) and (1,3).
GaussianChar scheme_four_mode_char(const SchemeConfig& cfg);

// Mean photon number of one mode, <a^dag a>.
double mean_photon_number(const GaussianChar& f, std::size_t mode);
double total_mean_photon_number(const GaussianChar& f);

// Variance of X or Y (X = (a + a^dag)/sqrt 2) for the mode
// c = (w_i a_i + w_j a_j) of a two-mode pair, with real weights (w_i, w_j).
double combined_quadrature_variance(const GaussianChar& f, std::pair<std::size_t, std::size_t> modes,
                                    std::pair<double, double> weights, bool x_quadrature);

}  // namespace nongauss

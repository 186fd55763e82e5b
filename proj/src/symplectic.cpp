#include "nongauss/symplectic.hpp"

#include "nongauss/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace nongauss {

namespace {

using Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_pair(std::pair<std::size_t, std::size_t> modes, std::size_t n_modes) {
  if (modes.first == modes.second || modes.first >= n_modes || modes.second >= n_modes) {
    throw InvalidArgument(fmt::format("mode pair ({}, {}) invalid for {} modes", modes.first, modes.second, n_modes));
  }
}

void check_transmissivity(double T, bool allow_zero) {
  if (!(T <= 1.0) || (allow_zero ? T < 0.0 : T <= 0.0)) {
    throw InvalidArgument(fmt::format("transmissivity {} outside {}", T, allow_zero ? "[0,1]" : "(0,1]"));
  }
}

}  // namespace

GaussianChar::GaussianChar(std::size_t n_modes)
    : n_modes_(n_modes), exponent_(Eigen::MatrixXd::Identity(idx(2 * n_modes), idx(2 * n_modes))) {}

GaussianChar::GaussianChar(std::size_t n_modes, Eigen::MatrixXd exponent)
    : n_modes_(n_modes), exponent_(std::move(exponent)) {
  const Index n = idx(2 * n_modes);
  if (exponent_.rows() != n || exponent_.cols() != n) {
    throw InvalidArgument(fmt::format("GaussianChar: exponent must be {}x{}", n, n));
  }
  const double scale = std::max(1.0, exponent_.cwiseAbs().maxCoeff());
  if ((exponent_ - exponent_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw PhysicalityError("GaussianChar: exponent is not symmetric");
  }
  exponent_ = 0.5 * (exponent_ + exponent_.transpose()).eval();
  if (n > 0) {
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(exponent_, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .minCoeff();
    if (min_eig < -1e-10 * scale) {
      throw PhysicalityError(fmt::format("GaussianChar: exponent has negative eigenvalue {}", min_eig));
    }
  }
}

cplx GaussianChar::operator()(std::span<const double> x) const {
  if (x.size() != 2 * n_modes_) throw InvalidArgument("GaussianChar: point size mismatch");
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), idx(x.size()));
  return std::exp(-0.5 * v.dot(exponent_ * v));
}

PolyGaussFunction GaussianChar::to_poly_gauss() const { return PolyGaussFunction::gaussian(exponent_); }

GaussianChar vacuum_char(std::size_t n_modes) { return GaussianChar(n_modes); }

GaussianChar two_mode_squeezed_char(const SqueezeParam& p, std::pair<std::size_t, std::size_t> modes,
                                    std::size_t n_modes) {
  check_pair(modes, n_modes);
  if (!(p.amplitude >= 0.0)) throw InvalidArgument("two_mode_squeezed_char: amplitude must be >= 0");
  const double c = std::cosh(p.amplitude);
  const double s = std::sinh(p.amplitude);
  const double cp = std::cos(p.phase);
  const double sp = std::sin(p.phase);

  // varsigma_i = alpha_i cosh + alpha_j^* e^{i phi} sinh, as real 2x4 maps on
  // (x_i, y_i, x_j, y_j); the pair exponent is M_i^T M_i + M_j^T M_j.
  Eigen::Matrix<double, 2, 4> mi;
  mi << c, 0, s * cp, s * sp,
        0, c, s * sp, -s * cp;
  Eigen::Matrix<double, 2, 4> mj;
  mj << s * cp, s * sp, c, 0,
        s * sp, -s * cp, 0, c;
  const Eigen::Matrix4d block = mi.transpose() * mi + mj.transpose() * mj;

  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(idx(2 * n_modes), idx(2 * n_modes));
  const std::size_t coords[4] = {2 * modes.first, 2 * modes.first + 1, 2 * modes.second, 2 * modes.second + 1};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) sigma(idx(coords[a]), idx(coords[b])) = block(a, b);
  }
  return GaussianChar(n_modes, sigma);
}

GaussianChar thermal_char(double n_bar, std::size_t mode, std::size_t n_modes) {
  if (!(n_bar >= 0.0)) throw InvalidArgument("thermal_char: occupation must be >= 0");
  if (mode >= n_modes) throw InvalidArgument("thermal_char: mode out of range");
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(idx(2 * n_modes), idx(2 * n_modes));
  sigma(idx(2 * mode), idx(2 * mode)) = 2.0 * n_bar + 1.0;
  sigma(idx(2 * mode + 1), idx(2 * mode + 1)) = 2.0 * n_bar + 1.0;
  return GaussianChar(n_modes, sigma);
}

GaussianChar direct_sum(const GaussianChar& a, const GaussianChar& b) {
  const Index na = a.exponent().rows();
  const Index nb = b.exponent().rows();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(na + nb, na + nb);
  sigma.topLeftCorner(na, na) = a.exponent();
  sigma.bottomRightCorner(nb, nb) = b.exponent();
  return GaussianChar(a.n_modes() + b.n_modes(), sigma);
}

Eigen::MatrixXd beam_splitter_map(std::size_t n_modes, std::pair<std::size_t, std::size_t> modes, double T) {
  check_pair(modes, n_modes);
  check_transmissivity(T, true);
  const double t = std::sqrt(T);
  const double r = std::sqrt(1.0 - T);
  Eigen::MatrixXd map = Eigen::MatrixXd::Identity(idx(2 * n_modes), idx(2 * n_modes));
  for (std::size_t q = 0; q < 2; ++q) {
    const Index i = idx(2 * modes.first + q);
    const Index j = idx(2 * modes.second + q);
    map(i, i) = t;
    map(i, j) = -r;
    map(j, j) = t;
    map(j, i) = r;
  }
  return map;
}

GaussianChar beam_splitter_substitute(const GaussianChar& f, std::pair<std::size_t, std::size_t> modes, double T) {
  const Eigen::MatrixXd map = beam_splitter_map(f.n_modes(), modes, T);
  return GaussianChar(f.n_modes(), map.transpose() * f.exponent() * map);
}

PolyGaussFunction beam_splitter_substitute(const PolyGaussFunction& f, std::pair<std::size_t, std::size_t> modes,
                                           double T) {
  return linear_substitute(f, beam_splitter_map(f.n_modes(), modes, T));
}

GaussianChar loss_channel(const GaussianChar& f, std::size_t mode, double T_loss, double n_bar) {
  if (mode >= f.n_modes()) throw InvalidArgument("loss_channel: mode out of range");
  check_transmissivity(T_loss, false);
  if (!(n_bar >= 0.0)) throw InvalidArgument("loss_channel: occupation must be >= 0");
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(f.exponent().rows(), f.exponent().cols());
  const Index x = idx(2 * mode);
  d(x, x) = d(x + 1, x + 1) = std::sqrt(T_loss);
  Eigen::MatrixXd sigma = d * f.exponent() * d;
  const double env = (1.0 - T_loss) * (2.0 * n_bar + 1.0);
  sigma(x, x) += env;
  sigma(x + 1, x + 1) += env;
  return GaussianChar(f.n_modes(), sigma);
}

GaussianChar thermal_loss_chain(const GaussianChar& f, std::size_t mode, const ChannelParam& thermal,
                                double T_loss) {
  return loss_channel(loss_channel(f, mode, thermal.transmissivity, thermal.thermal_occupation), mode, T_loss);
}

GaussianChar scheme_four_mode_char(const SchemeConfig& cfg) {
  cfg.validate();
  GaussianChar chi = direct_sum(two_mode_squeezed_char({cfg.r, cfg.phi_zeta}, {0, 1}, 2),
                                two_mode_squeezed_char({cfg.s, cfg.phi_xi}, {0, 1}, 2));
  const std::size_t lossy_modes = cfg.loss_on_ancilla ? 4 : 2;
  const ChannelParam thermal{cfg.T_thermal, cfg.n_thermal};
  for (std::size_t k = 0; k < lossy_modes; ++k) chi = thermal_loss_chain(chi, k, thermal, cfg.T_loss);
  chi = beam_splitter_substitute(chi, {0, 2}, cfg.T1);
  chi = beam_splitter_substitute(chi, {1, 3}, cfg.T2);
  return chi;
}

double mean_photon_number(const GaussianChar& f, std::size_t mode) {
  if (mode >= f.n_modes()) throw InvalidArgument("mean_photon_number: mode out of range");
  const Index x = idx(2 * mode);
  return 0.25 * (f.exponent()(x, x) + f.exponent()(x + 1, x + 1)) - 0.5;
}

double total_mean_photon_number(const GaussianChar& f) {
  double n = 0.0;
  for (std::size_t k = 0; k < f.n_modes(); ++k) n += mean_photon_number(f, k);
  return n;
}

double combined_quadrature_variance(const GaussianChar& f, std::pair<std::size_t, std::size_t> modes,
                                    std::pair<double, double> weights, bool x_quadrature) {
  check_pair(modes, f.n_modes());
  // D_c(g) = D_i(w_i g) D_j(w_j g) for real weights.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(f.exponent().rows(), 2);
  m(idx(2 * modes.first), 0) = weights.first;
  m(idx(2 * modes.first + 1), 1) = weights.first;
  m(idx(2 * modes.second), 0) = weights.second;
  m(idx(2 * modes.second + 1), 1) = weights.second;
  const Eigen::Matrix2d reduced = m.transpose() * f.exponent() * m;
  // chi = exp(-(y^2 VarX + x^2 VarY - 2xy Cov)) for D = exp(i sqrt2 (y X - x Y)).
  return x_quadrature ? 0.5 * reduced(1, 1) : 0.5 * reduced(0, 0);
}

}  // namespace nongauss

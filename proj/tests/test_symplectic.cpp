#include "doctest.h"
#include "test_support.hpp"

#include "nongauss/errors.hpp"
#include "nongauss/resources.hpp"
#include "nongauss/symplectic.hpp"

#include <numbers>

using namespace nongauss;

namespace {

const double kPi = std::numbers::pi;

// Var X of c = (a_i + sign a_j)/sqrt2 from second differences of chi along the
// displacement direction that couples to X_c, -d^2chi/dy^2 / 2 at zero.
double fd_variance(const GaussianChar& chi, std::size_t i, std::size_t j, double sign) {
  const double h = 1e-3;
  auto at = [&](double y) {
    std::vector<double> v(2 * chi.n_modes(), 0.0);
    v[2 * i + 1] = y / std::sqrt(2.0);
    v[2 * j + 1] = sign * y / std::sqrt(2.0);
    return chi(v).real();
  };
  const double d2 = (at(h) - 2.0 * at(0.0) + at(-h)) / (h * h);
  return -0.5 * d2;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

}  // namespace

TEST_SUITE("symplectic") {
  TEST_CASE("zero squeezing is the vacuum") {
    const auto chi = two_mode_squeezed_char({0.0, kPi}, {0, 1});
    CHECK((chi.exponent() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);
  }

  TEST_CASE("combined-mode variances of a twin beam at r = 1") {
    const auto chi = two_mode_squeezed_char({1.0, kPi}, {0, 1});
    const double plus = combined_quadrature_variance(chi, {0, 1}, {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}, true);
    const double minus = combined_quadrature_variance(chi, {0, 1}, {1 / std::sqrt(2.0), -1 / std::sqrt(2.0)}, true);
    const double hi = std::max(plus, minus);
    const double lo = std::min(plus, minus);
    CHECK(hi == doctest::Approx(std::exp(2.0) / 2).epsilon(1e-12));
    CHECK(lo == doctest::Approx(std::exp(-2.0) / 2).epsilon(1e-12));
    CHECK(hi == doctest::Approx(3.6945).epsilon(1e-4));
    CHECK(lo == doctest::Approx(0.067668).epsilon(1e-4));
    CHECK(fd_variance(chi, 0, 1, 1.0) == doctest::Approx(plus).epsilon(1e-5));
    CHECK(fd_variance(chi, 0, 1, -1.0) == doctest::Approx(minus).epsilon(1e-5));
  }

  TEST_CASE("squeezed variance after loss") {
    GaussianChar chi = two_mode_squeezed_char({2.0, kPi}, {0, 1});
    chi = loss_channel(loss_channel(chi, 0, 0.85), 1, 0.85);
    const double w = 1 / std::sqrt(2.0);
    const double v = std::min(combined_quadrature_variance(chi, {0, 1}, {w, w}, true),
                              combined_quadrature_variance(chi, {0, 1}, {w, -w}, true));
    CHECK(v == doctest::Approx((1 - 0.85 * (1 - std::exp(-4.0))) / 2).epsilon(1e-12));
    CHECK(v == doctest::Approx(0.082787).epsilon(1e-5));
    const double r_eff = -0.5 * std::log(2 * v);
    CHECK(r_eff == doctest::Approx(0.8991).epsilon(1e-4));
    CHECK(r_eff == doctest::Approx(effective_squeezing(2.0, 0.85)).epsilon(1e-12));
  }

  TEST_CASE("thermal characteristic functions") {
    CHECK((thermal_char(0.0).exponent() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
    CHECK(thermal_char(1.0).exponent()(0, 0) / 2 == doctest::Approx(1.5));
    CHECK((thermal_char(1e-30).exponent() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
    CHECK(mean_photon_number(thermal_char(0.7), 0) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK_THROWS_AS(thermal_char(-0.1), InvalidArgument);
  }

  TEST_CASE("beam splitter limits") {
    const auto chi = direct_sum(two_mode_squeezed_char({0.8, kPi}, {0, 1}), thermal_char(0.3, 0, 2));
    const auto same = beam_splitter_substitute(chi, {0, 2}, 1.0);
    CHECK((same.exponent() - chi.exponent()).norm() < 1e-15);

    // T = 0: alpha_i = -b_j, alpha_j = b_i. chi_out(b) = chi_in(L b).
    const auto swapped = beam_splitter_substitute(chi, {0, 2}, 0.0);
    for (int k = 0; k < 10; ++k) {
      const auto b = testing::random_point(8);
      auto lb = b;
      lb[0] = -b[4];
      lb[1] = -b[5];
      lb[4] = b[0];
      lb[5] = b[1];
      CHECK(std::abs(swapped(b) - chi(lb)) < 1e-14);
    }

    const auto vac = beam_splitter_substitute(vacuum_char(2), {0, 1}, 0.99);
    CHECK((vac.exponent() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14);
  }

  TEST_CASE("beam splitter on PolyGauss matches the Gaussian path") {
    const auto chi = two_mode_squeezed_char({0.7, kPi}, {0, 1});
    const auto g = beam_splitter_substitute(chi, {0, 1}, 0.6);
    const auto p = beam_splitter_substitute(chi.to_poly_gauss(), {0, 1}, 0.6);
    for (int k = 0; k < 20; ++k) {
      const auto x = testing::random_point(4);
      CHECK(std::abs(g(x) - evaluate(p, x)) < 1e-14);
    }
  }

  TEST_CASE("loss identity and vacuum fixed point") {
    const auto chi = two_mode_squeezed_char({1.3, kPi}, {0, 1});
    CHECK((loss_channel(chi, 0, 1.0).exponent() - chi.exponent()).norm() < 1e-15);
    for (double T : {0.1, 0.5, 0.85, 0.99}) {
      CHECK((loss_channel(vacuum_char(2), 1, T).exponent() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);
    }
    CHECK_THROWS_AS(loss_channel(chi, 0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(loss_channel(chi, 0, 1.2), InvalidArgument);
  }

  TEST_CASE("scheme factorizes without mixing") {
    SchemeConfig cfg;
    cfg.r = 1.2;
    cfg.s = 0.3;
    cfg.T1 = cfg.T2 = 1.0;
    const auto chi = scheme_four_mode_char(cfg);
    CHECK(chi.exponent().block(0, 4, 4, 4).norm() < 1e-15);
    CHECK((chi.exponent().topLeftCorner(4, 4) - two_mode_squeezed_char({1.2, kPi}, {0, 1}).exponent()).norm() <
          1e-14);
    SchemeConfig zero;
    zero.r = zero.s = 0.0;
    zero.T1 = zero.T2 = zero.T_loss = 1.0;
    CHECK((scheme_four_mode_char(zero).exponent() - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-15);
  }

  TEST_CASE("loss only on the signal pair when requested") {
    SchemeConfig cfg;
    cfg.r = 0.9;
    cfg.s = 0.2;
    cfg.T1 = cfg.T2 = 1.0;
    cfg.T_loss = 0.8;
    cfg.loss_on_ancilla = false;
    const auto chi = scheme_four_mode_char(cfg);
    CHECK((chi.exponent().bottomRightCorner(4, 4) - two_mode_squeezed_char({0.2, kPi}, {0, 1}).exponent()).norm() <
          1e-14);
  }

  TEST_CASE("property: exponents stay positive semidefinite") {
    for (int k = 0; k < 30; ++k) {
      SchemeConfig cfg;
      cfg.r = testing::uniform(0, 2.5);
      cfg.s = testing::uniform(0, 1);
      cfg.phi_zeta = testing::uniform(0, 2 * kPi);
      cfg.phi_xi = testing::uniform(0, 2 * kPi);
      cfg.T1 = testing::uniform(0.01, 1);
      cfg.T2 = testing::uniform(0.01, 1);
      cfg.T_loss = testing::uniform(0.05, 1);
      cfg.T_thermal = testing::uniform(0.05, 1);
      cfg.n_thermal = testing::uniform(0, 2);
      const auto chi = scheme_four_mode_char(cfg);
      CHECK((chi.exponent() - chi.exponent().transpose()).norm() < 1e-12);
      CHECK(min_eigenvalue(chi.exponent()) >= -1e-10);
      const std::vector<double> zero(8, 0.0);
      CHECK(chi(zero).real() == 1.0);
    }
  }

  TEST_CASE("property: beam splitters preserve total photon number") {
    for (int k = 0; k < 20; ++k) {
      const auto chi = direct_sum(two_mode_squeezed_char({testing::uniform(0, 2), testing::uniform(0, 6)}, {0, 1}),
                                  two_mode_squeezed_char({testing::uniform(0, 1), testing::uniform(0, 6)}, {0, 1}));
      const double T = testing::uniform(0, 1);
      const auto out = beam_splitter_substitute(beam_splitter_substitute(chi, {0, 2}, T), {1, 3}, 1 - T);
      CHECK(std::abs(total_mean_photon_number(out) - total_mean_photon_number(chi)) < 1e-10);
    }
  }

  TEST_CASE("property: losses compose multiplicatively") {
    const auto chi = two_mode_squeezed_char({1.7, kPi}, {0, 1});
    for (int k = 0; k < 20; ++k) {
      const double a = testing::uniform(0.05, 1);
      const double b = testing::uniform(0.05, 1);
      const auto twice = loss_channel(loss_channel(chi, 0, a), 0, b);
      CHECK((twice.exponent() - loss_channel(chi, 0, a * b).exponent()).norm() < 1e-12);
    }
  }

  TEST_CASE("property: effective squeezing is strictly reduced and vanishes only at r = 0") {
    for (double T : {0.5, 0.6, 0.7, 0.8, 0.9, 0.99}) {
      CHECK(effective_squeezing(0.0, T) == 0.0);
      CHECK(effective_squeezing(1e-9, T) < 1e-8);
      for (int i = 1; i <= 20; ++i) {
        const double r = 0.1 * i;
        const double rp = effective_squeezing(r, T);
        CHECK(rp > 0.0);
        CHECK(rp < r);
      }
    }
    CHECK(effective_squeezing(1.4, 1.0) == doctest::Approx(1.4).epsilon(1e-14));
  }
}

#include "doctest.h"
#include "test_support.hpp"

#include "nongauss/errors.hpp"
#include "nongauss/fock_oracle.hpp"
#include "nongauss/resources.hpp"
#include "nongauss/symplectic.hpp"

#include <numbers>

using namespace nongauss;
using testing::cplx;

namespace {

const double kPi = std::numbers::pi;

double max_chi_difference(const PolyGaussFunction& a, const PolyGaussFunction& b, double radius = 2.0) {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const cplx b1 = std::polar(radius * i / 4.0, 0.4 + 1.3 * j);
      const cplx b2 = std::polar(radius * j / 4.0, -1.0 + 0.8 * i);
      const double x[4] = {b1.real(), b1.imag(), b2.real(), b2.imag()};
      worst = std::max(worst, std::abs(evaluate(a, x) - evaluate(b, x)));
    }
  }
  return worst;
}

PolyGaussFunction one_mode_vacuum() { return PolyGaussFunction::gaussian(Eigen::MatrixXd::Identity(2, 2)); }

}  // namespace

TEST_SUITE("resources") {
  TEST_CASE("ladder rules on the vacuum") {
    // a^dag |0><0| a = |1><1|
    const auto one = apply_operator(one_mode_vacuum(), {{1.0, {{0, true}}}});
    for (int k = 0; k < 10; ++k) {
      const auto x = testing::random_point(2, 2.0);
      const double b2 = x[0] * x[0] + x[1] * x[1];
      CHECK(std::abs(evaluate(one, x) - (1 - b2) * std::exp(-b2 / 2)) < 1e-14);
    }
    // a |1><1| a^dag = |0><0|
    const auto back = apply_operator(one, {{1.0, {{0, false}}}});
    for (int k = 0; k < 10; ++k) {
      const auto x = testing::random_point(2, 2.0);
      CHECK(std::abs(evaluate(back, x) - std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2)) < 1e-14);
    }
    // a |0> = 0
    CHECK_THROWS_AS(normalize_chi(apply_operator(one_mode_vacuum(), {{1.0, {{0, false}}}})), PhysicalityError);
  }

  TEST_CASE("left and right multiplication against finite differences") {
    // chi of a rho for rho = |0><0|: Tr[a |0><0| D(b)] = <0|D(b) a|0> = 0, and
    // chi of rho a^dag vanishes too; a^dag rho gives <0|D(b)|1> = -b^* e^{-|b|^2/2}.
    const auto vac = one_mode_vacuum();
    const auto left = ladder_left(vac, {0, true});
    for (int k = 0; k < 10; ++k) {
      const auto x = testing::random_point(2, 1.5);
      const cplx b(x[0], x[1]);
      CHECK(std::abs(evaluate(left, x) + std::conj(b) * std::exp(-std::norm(b) / 2)) < 1e-14);
      CHECK(std::abs(evaluate(ladder_left(vac, {0, false}), x)) < 1e-14);
      CHECK(std::abs(evaluate(ladder_right(vac, {0, true}), x)) < 1e-14);
    }
  }

  TEST_CASE("twin beam is the Gaussian two-mode squeezed state") {
    const auto tb = theoretical_state(Family::twin_beam, 1.2);
    const auto chi = two_mode_squeezed_char({1.2, kPi}, {0, 1});
    for (int k = 0; k < 10; ++k) {
      const auto x = testing::random_point(4, 2.0);
      CHECK(std::abs(evaluate(tb.chi, x) - chi(x)) < 1e-15);
    }
    CHECK(max_chi_difference(theoretical_state(Family::squeezed_bell, 1.2, 0.0).chi, tb.chi) == 0.0);
  }

  TEST_CASE("special squeezed Bell angles reproduce the de-Gaussified families") {
    for (double r : {0.3, 1.0, 1.6}) {
      const auto ps = theoretical_state(Family::photon_subtracted, r);
      const auto pa = theoretical_state(Family::photon_added, r);
      const auto sn = theoretical_state(Family::squeezed_number, r);
      CHECK(max_chi_difference(theoretical_state(Family::squeezed_bell, r, delta_photon_subtracted(r)).chi, ps.chi) <
            1e-10);
      CHECK(max_chi_difference(theoretical_state(Family::squeezed_bell, r, delta_photon_added(r)).chi, pa.chi) < 1e-10);
      CHECK(max_chi_difference(theoretical_state(Family::squeezed_bell, r, delta_squeezed_number()).chi, sn.chi) <
            1e-10);
    }
  }

  TEST_CASE("theoretical families agree with Fock constructions") {
    for (double r : {0.4, 0.8}) {
      for (Family f : {Family::twin_beam, Family::photon_subtracted, Family::photon_added, Family::squeezed_number,
                       Family::squeezed_bell}) {
        const double delta = 0.37;
        const auto st = theoretical_state(f, r, delta);
        const auto oracle = fock::theoretical_oracle(f, r, delta, fock::default_cutoff(r) + 10);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
          for (int j = 0; j < 5; ++j) {
            const cplx b1 = std::polar(0.35 * i, 0.2 + 1.7 * j);
            const cplx b2 = std::polar(0.35 * j, 2.1 - 0.6 * i);
            const double x[4] = {b1.real(), b1.imag(), b2.real(), b2.imag()};
            worst = std::max(worst, std::abs(evaluate(st.chi, x) - fock::char_function(oracle.rho, b1, b2)));
          }
        }
        INFO("family " << to_string(f) << " r " << r);
        CHECK(worst < 1e-6);
      }
    }
  }

  TEST_CASE("photon subtraction from the vacuum has zero norm") {
    CHECK_THROWS_AS(theoretical_state(Family::photon_subtracted, 0.0), PhysicalityError);
    CHECK_NOTHROW(theoretical_state(Family::photon_added, 0.0));
    CHECK_THROWS_AS(theoretical_state(Family::scheme_ideal, 1.0), InvalidArgument);
    CHECK_THROWS_AS(theoretical_state(Family::twin_beam, -1.0), InvalidArgument);
  }

  TEST_CASE("equivalent squeezed Bell angle") {
    SchemeConfig cfg;
    cfg.r = 1.0;
    cfg.T1 = cfg.T2 = 0.99;
    cfg.s = 0.011;
    const double k2 = mixing_angle(0.99) * mixing_angle(0.99);
    const double expected =
        std::atan(k2 * std::pow(std::sinh(1.0), 2) / (0.011 + k2 * std::sinh(1.0) * std::cosh(1.0)));
    CHECK(delta_equivalent(cfg) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(mixing_angle(0.99) == doctest::Approx(std::atan(std::sqrt(0.01 / 0.99))).epsilon(1e-14));

    cfg.s = 0.0;
    CHECK(delta_equivalent(cfg) == doctest::Approx(std::atan(std::tanh(1.0))).epsilon(1e-14));
    CHECK(delta_equivalent(cfg) == doctest::Approx(delta_photon_subtracted(1.0)).epsilon(1e-14));
    double last = delta_equivalent(cfg);
    for (double s : {0.01, 0.1, 1.0, 10.0, 1e4}) {
      cfg.s = s;
      CHECK(delta_equivalent(cfg) < last);
      last = delta_equivalent(cfg);
    }
    CHECK(last < 1e-5);
  }

  TEST_CASE("scheme state approaches the equivalent squeezed Bell state as kappa^2") {
    std::vector<double> errors;
    for (double T : {0.99, 0.999, 0.9999}) {
      SchemeConfig cfg;
      cfg.r = 0.8;
      cfg.T1 = cfg.T2 = T;
      cfg.s = 0.5 * (1 - T);
      cfg.T_loss = 1.0;
      const auto st = scheme_state(cfg, Detector::ideal);
      CHECK(st.family == Family::scheme_ideal);
      CHECK(st.notes.empty());
      errors.push_back(
          max_chi_difference(st.chi, theoretical_state(Family::squeezed_bell, 0.8, delta_equivalent(cfg)).chi));
    }
    MESSAGE("chi mismatch " << errors[0] << ", " << errors[1] << ", " << errors[2]);
    // Each tenfold reduction of kappa^2 shrinks the mismatch about tenfold.
    CHECK(errors[1] / errors[0] == doctest::Approx(0.1).epsilon(0.2));
    CHECK(errors[2] / errors[1] == doctest::Approx(0.1).epsilon(0.2));
  }

  TEST_CASE("scheme state bookkeeping") {
    SchemeConfig cfg;
    cfg.r = 1.6;
    cfg.s = 0.05;
    cfg.T_loss = 0.85;
    const auto real = scheme_state(cfg, Detector::on_off);
    CHECK(real.family == Family::scheme_realistic);
    REQUIRE(real.success_prob.has_value());
    CHECK(*real.success_prob > 0.0);
    CHECK(*real.success_prob < 1.0);
    CHECK(real.notes.empty());
    const auto flagged = scheme_state(cfg, Detector::ideal);
    CHECK(flagged.notes.size() == 1);
    cfg.r = -1.0;
    CHECK_THROWS_AS(scheme_state(cfg, Detector::ideal), InvalidArgument);
  }

  TEST_CASE("effective squeezing") {
    CHECK(effective_squeezing(1.3, 1.0) == doctest::Approx(1.3).epsilon(1e-14));
    const double rp = effective_squeezing(2.0, 0.85);
    CHECK(rp == doctest::Approx(-0.5 * std::log(1 - 0.85 * (1 - std::exp(-4.0)))).epsilon(1e-14));
    CHECK(std::abs(rp - 0.8991) < 1e-4);
    CHECK(std::abs(squeezing_db(rp) - 7.81) < 5e-3);
    CHECK(std::abs(squeezing_db(2.0) - 17.37) < 5e-3);
  }

  TEST_CASE("property: every family has chi(0) = 1 and Hermitian symmetry") {
    std::vector<ResourceState> states;
    for (Family f : {Family::twin_beam, Family::photon_subtracted, Family::photon_added, Family::squeezed_number,
                     Family::squeezed_bell}) {
      states.push_back(theoretical_state(f, 1.1, 0.6));
    }
    SchemeConfig cfg;
    cfg.r = 1.1;
    cfg.s = 0.02;
    states.push_back(scheme_state(cfg, Detector::ideal));
    cfg.T_loss = 0.85;
    states.push_back(scheme_state(cfg, Detector::on_off));
    for (const auto& st : states) {
      INFO("family " << to_string(st.family));
      const double zero[4] = {0, 0, 0, 0};
      CHECK(std::abs(evaluate(st.chi, zero) - 1.0) < 1e-10);
      for (int k = 0; k < 30; ++k) {
        const auto x = testing::random_point(4, 2.5);
        const double mx[4] = {-x[0], x[1], -x[2], x[3]};
        CHECK(std::abs(evaluate(st.chi, mx) - std::conj(evaluate(st.chi, x))) < 1e-10);
      }
    }
  }
}

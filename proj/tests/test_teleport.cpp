#include "doctest.h"
#include "test_support.hpp"

#include "nongauss/errors.hpp"
#include "nongauss/fock_oracle.hpp"
#include "nongauss/optimize.hpp"
#include "nongauss/resources.hpp"
#include "nongauss/teleport.hpp"

#include <numbers>

using namespace nongauss;
using testing::cplx;

namespace {

SchemeConfig ideal_scheme(double r, double s) {
  SchemeConfig cfg;
  cfg.r = r;
  cfg.s = s;
  cfg.T1 = cfg.T2 = 0.99;
  cfg.T_loss = 1.0;
  return cfg;
}

// Independent 2-D quadrature of (1/pi) int d2l e^{-|l|^2} chi(-l^*, -l).
double brute_fidelity(const PolyGaussFunction& chi) {
  const cplx v = testing::integrate_2d_fixed(
      [&](double x, double y) {
        const double p[4] = {-x, y, -x, -y};
        return std::exp(-(x * x + y * y)) * evaluate(chi, p);
      },
      7.0, 14);
  return v.real() / std::numbers::pi;
}

}  // namespace

TEST_SUITE("teleport") {
  TEST_CASE("vacuum resource gives the classical limit") {
    const auto vac = theoretical_state(Family::twin_beam, 0.0);
    const auto f = fidelity(vac, FidelityMethod::both);
    CHECK(f.fidelity == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.residual < 1e-9);
    CHECK(brute_fidelity(vac.chi) == doctest::Approx(0.5).epsilon(1e-10));
  }

  TEST_CASE("twin beam") {
    const auto tb = theoretical_state(Family::twin_beam, 1.6);
    const double f = fidelity(tb).fidelity;
    CHECK(std::abs(f - 0.961) < 1e-3);
    double last = 0.0;
    for (int i = 0; i <= 25; ++i) {
      const double r = 0.1 * i;
      const double fr = fidelity(theoretical_state(Family::twin_beam, r)).fidelity;
      CHECK(fr == doctest::Approx(1.0 / (1.0 + std::exp(-2.0 * r))).epsilon(1e-9));
      if (i > 0) CHECK(fr > last);
      last = fr;
    }
    CHECK(fidelity(theoretical_state(Family::twin_beam, 8.0)).fidelity > 1.0 - 1e-6);
  }

  TEST_CASE("non-Gaussian resources at r = 1.6") {
    CHECK(std::abs(fidelity(theoretical_state(Family::photon_subtracted, 1.6)).fidelity - 0.965) < 2e-3);
    const auto opt = optimize_delta(1.6);
    CHECK(std::abs(opt.f_star - 0.977) < 2e-3);
    const auto scheme = scheme_state(ideal_scheme(1.6, 0.056), Detector::ideal);
    CHECK(std::abs(fidelity(scheme).fidelity - 0.974) < 1e-3);
  }

  TEST_CASE("closed form agrees with quadrature for every family") {
    for (double r : {0.5, 1.2, 2.0}) {
      std::vector<ResourceState> states;
      for (Family f : {Family::twin_beam, Family::photon_subtracted, Family::photon_added, Family::squeezed_number,
                       Family::squeezed_bell}) {
        states.push_back(theoretical_state(f, r, 0.4));
      }
      states.push_back(scheme_state(ideal_scheme(r, 0.03), Detector::ideal));
      SchemeConfig lossy = ideal_scheme(r, 0.03);
      lossy.T_loss = 0.85;
      states.push_back(scheme_state(lossy, Detector::on_off));
      for (const auto& st : states) {
        INFO("family " << to_string(st.family) << " r " << r);
        const auto f = fidelity(st, FidelityMethod::both);
        CHECK(f.residual <= 1e-6);
        CHECK(f.fidelity > 0.0);
        CHECK(f.fidelity <= 1.0);
      }
    }
    const auto ps = theoretical_state(Family::photon_subtracted, 1.0);
    CHECK(fidelity_closed_form(ps.chi) == doctest::Approx(brute_fidelity(ps.chi)).epsilon(1e-8));
  }

  TEST_CASE("fidelity does not depend on the input amplitude") {
    const auto tb = theoretical_state(Family::twin_beam, 0.5);
    const double f0 = fidelity(tb).fidelity;
    CHECK(fidelity_alpha_explicit(tb, 0.0) == doctest::Approx(f0).epsilon(1e-8));
    CHECK(fidelity_alpha_explicit(tb, cplx(1, 2)) == doctest::Approx(f0).epsilon(1e-8));

    std::vector<ResourceState> states = {theoretical_state(Family::squeezed_bell, 1.3, 0.4),
                                         scheme_state(ideal_scheme(1.0, 0.01), Detector::ideal)};
    for (const auto& st : states) {
      double lo = 2.0;
      double hi = -1.0;
      for (int k = 0; k < 5; ++k) {
        const cplx alpha(testing::uniform(-2, 2), testing::uniform(-2, 2));
        const double f = fidelity_alpha_explicit(st, alpha);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
      CHECK(hi - lo <= 1e-7);
    }
  }

  TEST_CASE("Fock-space route agrees with the phase-space route") {
    SchemeConfig cfg = ideal_scheme(0.7, 0.003);
    cfg.cutoff = 25;
    for (Detector d : {Detector::ideal, Detector::on_off}) {
      const auto oracle = fock::scheme_oracle(cfg, d);
      const double f_fock =
          fidelity_quadrature([&](cplx b1, cplx b2) { return fock::char_function(oracle.rho, b1, b2); });
      const double f_phase = fidelity(scheme_state(cfg, d)).fidelity;
      CHECK(std::abs(f_fock - f_phase) <= 1e-5);
    }
  }

  TEST_CASE("scheme endpoints") {
    // s = 0: photon subtraction from a twin beam attenuated to tanh r' = T tanh r.
    const double r = 1.6;
    const auto s0 = scheme_state(ideal_scheme(r, 0.0), Detector::ideal);
    const auto ps = theoretical_state(Family::photon_subtracted, std::atanh(0.99 * std::tanh(r)));
    for (int k = 0; k < 20; ++k) {
      const auto x = testing::random_point(4, 2.0);
      CHECK(std::abs(evaluate(s0.chi, x) - evaluate(ps.chi, x)) < 1e-10);
    }
    // s = r: the twin-beam fidelity.
    const auto sr = scheme_state(ideal_scheme(r, r), Detector::ideal);
    CHECK(fidelity(sr).fidelity == doctest::Approx(1.0 / (1.0 + std::exp(-2.0 * r))).epsilon(1e-6));
  }

  TEST_CASE("resources with point masses are rejected") {
    ResourceState bad;
    bad.chi = PolyGaussFunction::point_mass(4, 0);
    CHECK_THROWS_AS(fidelity(bad), UnsupportedEvaluation);
    ResourceState wrong;
    wrong.chi = PolyGaussFunction::constant(2, 1.0);
    CHECK_THROWS_AS(fidelity(wrong), InvalidArgument);
  }
}

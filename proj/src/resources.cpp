#include "nongauss/resources.hpp"

#include "nongauss/conditioning.hpp"
#include "nongauss/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace nongauss {

namespace {

// beta and beta^* of one mode as polynomials in the real coordinates.
Polynomial beta_poly(std::size_t n_vars, std::size_t mode, bool conjugate) {
  return Polynomial::variable(n_vars, 2 * mode) +
         Polynomial::variable(n_vars, 2 * mode + 1, conjugate ? cplx(0, -1) : cplx(0, 1));
}

// d/dbeta (conjugate = false) or d/dbeta^* (conjugate = true).
PolyGaussFunction wirtinger(const PolyGaussFunction& f, std::size_t mode, bool conjugate) {
  const PolyGaussFunction dx = differentiate(f, 2 * mode);
  const PolyGaussFunction dy = differentiate(f, 2 * mode + 1);
  return scale(add(dx, scale(dy, conjugate ? cplx(0, 1) : cplx(0, -1))), 0.5);
}

// The ladder rules share one shape: sign_d * d f + sign_b/2 * beta-ish * f.
PolyGaussFunction ladder_rule(const PolyGaussFunction& chi, Ladder o, bool left) {
  if (o.mode >= chi.n_modes()) throw InvalidArgument("ladder operator mode out of range");
  const double half = left ? -0.5 : 0.5;
  PolyGaussFunction out(chi.n_vars());
  if (o.dagger) {
    out = add(wirtinger(chi, o.mode, false),
              multiply_polynomial(chi, beta_poly(chi.n_vars(), o.mode, true) * cplx(half)));
  } else {
    out = add(scale(wirtinger(chi, o.mode, true), -1.0),
              multiply_polynomial(chi, beta_poly(chi.n_vars(), o.mode, false) * cplx(half)));
  }
  return canonicalize(out);
}

cplx value_at_origin(const PolyGaussFunction& chi) {
  const std::vector<double> zero(chi.n_vars(), 0.0);
  return evaluate(chi, zero);
}

LadderWord word(std::initializer_list<Ladder> ops) { return LadderWord(ops); }

}  // namespace

// Tr[o X D] = Tr[X D o] and Tr[X o D] on D(beta) = exp(beta a^dag - beta^* a):
//   left:  a -> -d/dbeta^* - beta/2,   a^dag -> d/dbeta - beta^*/2
//   right: a -> -d/dbeta^* + beta/2,   a^dag -> d/dbeta + beta^*/2
PolyGaussFunction ladder_left(const PolyGaussFunction& chi, Ladder o) { return ladder_rule(chi, o, true); }
PolyGaussFunction ladder_right(const PolyGaussFunction& chi, Ladder o) { return ladder_rule(chi, o, false); }

PolyGaussFunction apply_operator(const PolyGaussFunction& chi,
                                 const std::vector<std::pair<cplx, LadderWord>>& op) {
  PolyGaussFunction total(chi.n_vars());
  for (const auto& [cj, wj] : op) {
    // X -> X word_j^dag: the daggered letters act from the right, last letter first.
    PolyGaussFunction right = chi;
    for (auto it = wj.rbegin(); it != wj.rend(); ++it) right = ladder_right(right, {it->mode, !it->dagger});
    for (const auto& [ci, wi] : op) {
      PolyGaussFunction f = right;
      for (auto it = wi.rbegin(); it != wi.rend(); ++it) f = ladder_left(f, *it);
      total = add(total, scale(f, ci * std::conj(cj)));
    }
  }
  return canonicalize(total, 0.0);
}

PolyGaussFunction normalize_chi(const PolyGaussFunction& chi) {
  const cplx n = value_at_origin(chi);
  const double scale_ref = std::max(1e-300, std::abs(n));
  if (!(std::abs(n) > 1e-14) || std::abs(n.imag()) > 1e-9 * scale_ref || n.real() <= 0.0) {
    throw PhysicalityError(fmt::format("state has zero or invalid norm ({:.3g}{:+.3g}i)", n.real(), n.imag()));
  }
  return canonicalize(scale(chi, 1.0 / n.real()));
}

double mixing_angle(double T) {
  if (!(T > 0.0 && T <= 1.0)) throw InvalidArgument(fmt::format("transmissivity {} outside (0,1]", T));
  return std::atan(std::sqrt((1.0 - T) / T));
}

double delta_photon_subtracted(double r) { return std::atan(std::tanh(r)); }
double delta_photon_added(double r) { return std::atan2(std::cosh(r), std::sinh(r)); }

double delta_equivalent(const SchemeConfig& cfg) {
  cfg.validate();
  const double k2 = mixing_angle(cfg.T1) * mixing_angle(cfg.T2);
  const double sh = std::sinh(cfg.r);
  return std::atan2(k2 * sh * sh, cfg.s + k2 * sh * std::cosh(cfg.r));
}

double effective_squeezing(double r, double T_loss) {
  if (!(r >= 0.0)) throw InvalidArgument("effective_squeezing: r must be >= 0");
  if (!(T_loss > 0.0 && T_loss <= 1.0)) throw InvalidArgument("effective_squeezing: T_loss outside (0,1]");
  return -0.5 * std::log1p(-T_loss * (-std::expm1(-2.0 * r)));
}

double squeezing_db(double r) { return 20.0 * r / std::log(10.0); }

ResourceState theoretical_state(Family family, double r, std::optional<double> delta) {
  if (is_scheme(family)) throw InvalidArgument("theoretical_state: scheme families need scheme_state");
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument(fmt::format("r = {} outside [0, inf)", r));
  const PolyGaussFunction tmsv = two_mode_squeezed_char({r, kDefaultPhase}, {0, 1}, 2).to_poly_gauss();

  ResourceState st;
  st.family = family;
  st.r = r;
  const Ladder a1{0, false}, a2{1, false}, a1d{0, true}, a2d{1, true};
  switch (family) {
    case Family::twin_beam:
      st.chi = tmsv;
      break;
    case Family::photon_subtracted:
      st.chi = normalize_chi(apply_operator(tmsv, {{1.0, word({a1, a2})}}));
      break;
    case Family::photon_added:
      st.chi = normalize_chi(apply_operator(tmsv, {{1.0, word({a1d, a2d})}}));
      break;
    case Family::squeezed_number:
    case Family::squeezed_bell: {
      const double d = family == Family::squeezed_number ? delta_squeezed_number() : delta.value_or(0.0);
      st.delta = d;
      // S cos d + sin d S a1^dag a2^dag = [cos d + sin d (c a1^dag - s a2)(c a2^dag - s a1)] S,
      // from S a_i S^dag = c a_i - s a_j^dag.
      const double c = std::cosh(r);
      const double s = std::sinh(r);
      const double sd = std::sin(d);
      std::vector<std::pair<cplx, LadderWord>> op{{std::cos(d), {}}};
      if (sd != 0.0) {
        op.push_back({sd * c * c, word({a1d, a2d})});
        op.push_back({-sd * c * s, word({a1d, a1})});
        op.push_back({-sd * s * c, word({a2, a2d})});
        op.push_back({sd * s * s, word({a2, a1})});
      }
      st.chi = op.size() == 1 ? tmsv : normalize_chi(apply_operator(tmsv, op));
      break;
    }
    default:
      break;
  }
  return st;
}

ResourceState scheme_state(const SchemeConfig& cfg, Detector detector) {
  cfg.validate();
  const GaussianChar chi4 = scheme_four_mode_char(cfg);
  const DetectorKernel k3 = detector == Detector::ideal ? DetectorKernel::ideal() : DetectorKernel::on_off(cfg.eta3);
  const DetectorKernel k4 = detector == Detector::ideal ? DetectorKernel::ideal() : DetectorKernel::on_off(cfg.eta4);
  ConditionedState cond = condition(chi4, k3, k4);

  ResourceState st;
  st.family = detector == Detector::ideal ? Family::scheme_ideal : Family::scheme_realistic;
  st.chi = std::move(cond.chi);
  st.success_prob = cond.success_prob;
  st.r = cfg.r;
  st.config = cfg;
  st.detector = detector;
  const bool lossy = cfg.T_loss < 1.0 || (cfg.T_thermal < 1.0);
  if (detector == Detector::ideal && lossy) {
    st.notes.push_back("ideal single-photon projection combined with loss lies outside the studied regimes");
  }
  return st;
}

}  // namespace nongauss

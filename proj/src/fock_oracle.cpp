#include "nongauss/fock_oracle.hpp"

#include "nongauss/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace nongauss::fock {

namespace {

template <class Build>
OracleResult escalate(int cutoff, int max_cutoff, Build build) {
  for (;;) {
    try {
      return build(cutoff);
    } catch (const CutoffTooSmall&) {
      if (cutoff >= max_cutoff) throw;
      cutoff = std::min(max_cutoff, cutoff + 5);
    }
  }
}

OracleResult scheme_at(const SchemeConfig& cfg, Detector detector, int c, double tol) {
  FockTensor psi = FockTensor::vacuum({c, c, c, c});
  psi = apply_two_mode_squeeze(psi, {0, 1}, {cfg.r, cfg.phi_zeta}, tol);
  psi = apply_two_mode_squeeze(psi, {2, 3}, {cfg.s, cfg.phi_xi}, tol);
  psi = apply_beam_splitter(psi, {0, 2}, cfg.T1);
  psi = apply_beam_splitter(psi, {1, 3}, cfg.T2);

  const double t_loss = cfg.T_loss * cfg.T_thermal;
  std::vector<double> w3 = detector == Detector::ideal ? single_photon_weights(c) : on_povm_weights(cfg.eta3, c);
  std::vector<double> w4 = detector == Detector::ideal ? single_photon_weights(c) : on_povm_weights(cfg.eta4, c);
  if (cfg.loss_on_ancilla && t_loss < 1.0) {
    w3 = lossy_povm_weights(w3, t_loss);
    w4 = lossy_povm_weights(w4, t_loss);
  }
  Conditioned cond = povm_condition(psi, w3, w4);
  FockDensity rho = cond.rho;
  if (t_loss < 1.0) rho = loss_kraus(loss_kraus(rho, 0, t_loss), 1, t_loss);
  const double leak = rho.leak;
  return {std::move(rho), cond.success_prob, c, leak};
}

}  // namespace

int default_cutoff(double r) {
  if (r <= 1.0) return 20;
  if (r <= 1.6) return 30;
  return 30 + static_cast<int>(std::ceil(25.0 * (r - 1.6)));
}

OracleResult scheme_oracle(const SchemeConfig& cfg, Detector detector, double leak_tol, int max_cutoff) {
  cfg.validate();
  if (!cfg.loss_on_ancilla && cfg.T_loss * cfg.T_thermal < 1.0) {
    throw UnsupportedEvaluation("scheme_oracle: loss restricted to modes 0,1 does not commute with the mixers");
  }
  if (cfg.n_thermal > 0.0 && cfg.T_thermal < 1.0) {
    throw UnsupportedEvaluation("scheme_oracle: thermal environments are not modelled");
  }
  return escalate(cfg.cutoff, max_cutoff, [&](int c) { return scheme_at(cfg, detector, c, leak_tol); });
}

OracleResult theoretical_oracle(Family family, double r, double delta, int cutoff, double leak_tol,
                                int max_cutoff) {
  if (is_scheme(family)) throw InvalidArgument("theoretical_oracle: scheme families need scheme_oracle");
  if (!(r >= 0.0)) throw InvalidArgument("theoretical_oracle: r must be >= 0");
  const SqueezeParam sq{r, kDefaultPhase};
  return escalate(cutoff, max_cutoff, [&](int c) {
    const std::vector<int> cuts{c, c};
    FockTensor psi(cuts);
    switch (family) {
      case Family::twin_beam:
        psi = apply_two_mode_squeeze(FockTensor::vacuum(cuts), {0, 1}, sq, leak_tol);
        break;
      case Family::photon_subtracted:
        psi = apply_two_mode_squeeze(FockTensor::vacuum(cuts), {0, 1}, sq, leak_tol);
        psi = apply_ladder(apply_ladder(psi, 0, false), 1, false);
        break;
      case Family::photon_added:
        psi = apply_two_mode_squeeze(FockTensor::vacuum(cuts), {0, 1}, sq, leak_tol);
        psi = apply_ladder(apply_ladder(psi, 0, true), 1, true);
        break;
      case Family::squeezed_number:
        psi = apply_two_mode_squeeze(FockTensor::basis(cuts, {1, 1}), {0, 1}, sq, leak_tol);
        break;
      case Family::squeezed_bell:
        psi = add(FockTensor::vacuum(cuts), FockTensor::basis(cuts, {1, 1}), std::cos(delta), std::sin(delta));
        psi = apply_two_mode_squeeze(psi, {0, 1}, sq, leak_tol);
        break;
      default:
        break;
    }
    const double n2 = psi.norm2();
    if (!(n2 > 1e-300)) throw PhysicalityError(fmt::format("{}: zero-norm state", to_string(family)));
    if (psi.leak() / n2 > leak_tol) {
      throw CutoffTooSmall(fmt::format("{}: ladder leak {:.3g}", to_string(family), psi.leak() / n2),
                           psi.leak() / n2);
    }
    FockDensity rho = FockDensity::from_pure(psi).normalized();
    rho.leak = psi.leak() / n2;
    const double leak = rho.leak;
    return OracleResult{std::move(rho), 1.0, c, leak};
  });
}

}  // namespace nongauss::fock

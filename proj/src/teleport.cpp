#include "nongauss/teleport.hpp"

#include "nongauss/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace nongauss {

namespace {

constexpr double kPi = std::numbers::pi;

void check_resource(const PolyGaussFunction& chi) {
  if (chi.n_vars() != 4) throw InvalidArgument("fidelity: resource chi must have two modes");
  if (chi.has_point_masses()) throw UnsupportedEvaluation("fidelity: resource chi carries point masses");
}

cplx evaluate_at(const PolyGaussFunction& chi, cplx b1, cplx b2) {
  const double x[4] = {b1.real(), b1.imag(), b2.real(), b2.imag()};
  return evaluate(chi, x);
}

// (1/pi) int d2l g(l) on |l| <= lambda_max with panels x angles points.
double polar_rule(const std::function<cplx(cplx)>& g, double lambda_max, int panels, int angles) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const double width = lambda_max / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = p * width;
    auto radial = [&](double rho) {
      double ring = 0.0;
      for (int k = 0; k < angles; ++k) {
        const double theta = 2.0 * kPi * (k + 0.5) / angles;
        ring += g(std::polar(rho, theta)).real();
      }
      return rho * ring * (2.0 * kPi / angles);
    };
    total += Rule::integrate(radial, a, a + width);
  }
  return total / kPi;
}

double refine(const std::function<cplx(cplx)>& g, const QuadratureOptions& opts) {
  int panels = 3;
  int angles = 8;
  double prev = polar_rule(g, opts.lambda_max, panels, angles);
  for (int level = 0; level < opts.max_levels; ++level) {
    panels *= 2;
    angles *= 2;
    const double next = polar_rule(g, opts.lambda_max, panels, angles);
    if (std::abs(next - prev) <= opts.tol) return next;
    prev = next;
  }
  throw PhysicalityError(fmt::format("fidelity quadrature did not reach tolerance {:.1e}", opts.tol));
}

}  // namespace

Eigen::MatrixXd fidelity_substitution() {
  Eigen::MatrixXd map(4, 2);
  map << -1, 0,
          0, 1,
         -1, 0,
          0, -1;
  return map;
}

double fidelity_closed_form(const PolyGaussFunction& chi) {
  check_resource(chi);
  const PolyGaussFunction reduced = linear_substitute(chi, fidelity_substitution());
  const PolyGaussFunction integrand =
      multiply(reduced, PolyGaussFunction::gaussian(2.0 * Eigen::Matrix2d::Identity()));
  const std::size_t all[1] = {0};
  const cplx f = integrate_out(integrand, all).scalar() / kPi;
  return f.real();
}

double fidelity_quadrature(const std::function<cplx(cplx, cplx)>& chi, const QuadratureOptions& opts) {
  return refine([&](cplx l) { return std::exp(-std::norm(l)) * chi(-std::conj(l), -l); }, opts);
}

double fidelity_quadrature(const PolyGaussFunction& chi, const QuadratureOptions& opts) {
  check_resource(chi);
  return fidelity_quadrature([&](cplx b1, cplx b2) { return evaluate_at(chi, b1, b2); }, opts);
}

FidelityResult fidelity(const ResourceState& res, FidelityMethod method) {
  FidelityResult out;
  out.method = method;
  const QuadratureOptions opts;
  if (method == FidelityMethod::quadrature) {
    out.fidelity = fidelity_quadrature(res.chi, opts);
    out.tail_bound = std::exp(-opts.lambda_max * opts.lambda_max);
  } else {
    out.fidelity = fidelity_closed_form(res.chi);
    if (method == FidelityMethod::both) {
      out.residual = std::abs(out.fidelity - fidelity_quadrature(res.chi, opts));
      out.tail_bound = std::exp(-opts.lambda_max * opts.lambda_max);
    }
  }
  if (!(out.fidelity > 0.0 && out.fidelity <= 1.0 + 1e-9)) {
    throw PhysicalityError(fmt::format("fidelity {} outside (0,1]", out.fidelity));
  }
  return out;
}

double fidelity_alpha_explicit(const ResourceState& res, cplx alpha, const QuadratureOptions& opts) {
  check_resource(res.chi);
  auto coh = [alpha](cplx l) { return std::exp(-0.5 * std::norm(l) + cplx(0, 2.0 * std::imag(l * std::conj(alpha)))); };
  return refine(
      [&](cplx l) {
        const cplx m = -l;
        const cplx chi_out = coh(m) * evaluate_at(res.chi, std::conj(m), m);
        return coh(l) * chi_out;
      },
      opts);
}

std::string to_string(FidelityMethod m) {
  switch (m) {
    case FidelityMethod::closed_form:
      return "closed-form";
    case FidelityMethod::quadrature:
      return "quadrature";
    case FidelityMethod::both:
      return "closed-form+quadrature";
  }
  return "unknown";
}

}  // namespace nongauss

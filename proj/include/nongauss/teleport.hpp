#pragma once

// Coherent-state teleportation fidelity of a two-mode resource,
// F = (1/pi) int d2l exp(-|l|^2) chi_res(-l^*, -l).

#include "nongauss/gauss_poly.hpp"
#include "nongauss/resources.hpp"

#include <functional>
#include <string>

namespace nongauss {

enum class FidelityMethod { closed_form, quadrature, both };

struct FidelityResult {
  double fidelity{0.0};
  FidelityMethod method{FidelityMethod::closed_form};
  double residual{0.0};    // |closed form - quadrature| when both ran
  double tail_bound{0.0};  // exp(-lambda_max^2) when quadrature ran
};

struct QuadratureOptions {
  double lambda_max{6.0};
  double tol{1e-9};
  int max_levels{6};
};

// The (Re l, Im l) -> (b1, b2) identification b1 = -l^*, b2 = -l, as a 4x2 map.
Eigen::MatrixXd fidelity_substitution();

double fidelity_closed_form(const PolyGaussFunction& chi);
// Polar product rule (Gauss-Legendre panels in |l|, trapezoid in arg l),
// doubled until two levels agree to opts.tol.
double fidelity_quadrature(const std::function<cplx(cplx, cplx)>& chi, const QuadratureOptions& opts = {});
double fidelity_quadrature(const PolyGaussFunction& chi, const QuadratureOptions& opts = {});

FidelityResult fidelity(const ResourceState& res, FidelityMethod method = FidelityMethod::closed_form);

// The unsimplified integrand chi_in(l) chi_out(-l) for input |alpha>, by quadrature.
double fidelity_alpha_explicit(const ResourceState& res, cplx alpha, const QuadratureOptions& opts = {});

std::string to_string(FidelityMethod m);

}  // namespace nongauss

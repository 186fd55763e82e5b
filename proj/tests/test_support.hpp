#pragma once

#include "nongauss/gauss_poly.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace testing {

using cplx = std::complex<double>;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline std::vector<double> random_point(std::size_t n, double scale = 1.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform(-scale, scale);
  return x;
}

// Symmetric positive definite n x n matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(int n, double lo = 0.5, double hi = 2.0) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = uniform(-1, 1);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = uniform(lo, hi);
  return q * d.asDiagonal() * q.transpose();
}

// Adaptive 1-D integral of a complex integrand over [a, b].
inline cplx integrate_1d(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-13) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double re = GK::integrate([&](double x) { return f(x).real(); }, a, b, 15, tol);
  const double im = GK::integrate([&](double x) { return f(x).imag(); }, a, b, 15, tol);
  return {re, im};
}

// Nested adaptive quadrature over the square [-L, L]^2.
inline cplx integrate_2d(const std::function<cplx(double, double)>& f, double L = 10.0, double tol = 1e-13) {
  return integrate_1d([&](double x) { return integrate_1d([&](double y) { return f(x, y); }, -L, L, tol); }, -L, L,
                      tol);
}

// Tensor Gauss-Legendre rule on [-L, L]^2 with equal panels; for smooth
// integrands whose cancellations defeat adaptive relative tolerances.
inline cplx integrate_2d_fixed(const std::function<cplx(double, double)>& f, double L, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const double w = 2.0 * L / panels;
  cplx total = 0.0;
  for (int i = 0; i < panels; ++i) {
    for (int j = 0; j < panels; ++j) {
      const double x0 = -L + i * w;
      const double y0 = -L + j * w;
      for (std::size_t a = 0; a < Rule::abscissa().size(); ++a) {
        for (std::size_t b = 0; b < Rule::abscissa().size(); ++b) {
          // Rule stores nonnegative abscissae; the zero node appears once.
          for (int sa : {1, -1}) {
            if (sa < 0 && Rule::abscissa()[a] == 0.0) continue;
            for (int sb : {1, -1}) {
              if (sb < 0 && Rule::abscissa()[b] == 0.0) continue;
              const double x = x0 + 0.5 * w * (1.0 + sa * Rule::abscissa()[a]);
              const double y = y0 + 0.5 * w * (1.0 + sb * Rule::abscissa()[b]);
              total += Rule::weights()[a] * Rule::weights()[b] * f(x, y);
            }
          }
        }
      }
    }
  }
  return total * (0.25 * w * w);
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace testing

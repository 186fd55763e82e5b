#pragma once

// Polynomial x Gaussian functions over real phase-space coordinates.
//
// Coordinates are interleaved per mode: (Re b1, Im b1, Re b2, Im b2, ...).
// A term is coeff * poly(x) * exp(-1/2 x^T A x + b^T x), optionally carrying
// pi*delta2(b_k) factors on some complex modes. All values are immutable once
// built; every operation below returns a new object.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace nongauss {

using cplx = std::complex<double>;

inline constexpr int kMaxPolyDegree = 16;

// Exponent vector, one entry per real variable.
using Monomial = std::vector<std::uint8_t>;

class Polynomial {
 public:
  explicit Polynomial(std::size_t n_vars = 0) : n_vars_(n_vars) {}

  static Polynomial constant(std::size_t n_vars, cplx c);
  static Polynomial variable(std::size_t n_vars, std::size_t index, cplx c = 1.0);

  std::size_t n_vars() const { return n_vars_; }
  const std::map<Monomial, cplx>& coefficients() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const;
  cplx constant_term() const;

  // Adds c to the coefficient of m; drops the monomial if it cancels exactly.
  void add(const Monomial& m, cplx c);

  cplx evaluate(std::span<const double> x) const;
  Polynomial derivative(std::size_t index) const;

  // Replaces variable i by images[i]; every image lives in a common space of
  // new_n_vars variables.
  Polynomial substitute(const std::vector<Polynomial>& images, std::size_t new_n_vars) const;

  // Sets the flagged variables to zero and removes them from the variable list.
  Polynomial drop_zeroed(const std::vector<bool>& zeroed) const;

  // Removes monomials with |c| <= tol.
  Polynomial pruned(double tol) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(cplx c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, cplx c) { return a *= c; }
  friend Polynomial operator*(cplx c, Polynomial a) { return a *= c; }

 private:
  std::size_t n_vars_;
  std::map<Monomial, cplx> coeffs_;
};

struct GaussPolyTerm {
  cplx coeff{1.0};
  Polynomial poly;
  Eigen::MatrixXd quad;  // A, symmetric
  Eigen::VectorXcd lin;  // b
  std::uint32_t delta_modes{0};  // bit k set: factor pi*delta2(beta_k)

  std::size_t n_vars() const { return poly.n_vars(); }
  bool has_delta(std::size_t mode) const { return (delta_modes >> mode) & 1u; }
};

class PolyGaussFunction {
 public:
  explicit PolyGaussFunction(std::size_t n_vars = 0) : n_vars_(n_vars) {}

  // exp(-1/2 x^T A x) scaled by coeff.
  static PolyGaussFunction gaussian(const Eigen::MatrixXd& quad, cplx coeff = 1.0);
  static PolyGaussFunction constant(std::size_t n_vars, cplx c);
  // pi * delta2(beta_mode), as a function of n_vars real variables.
  static PolyGaussFunction point_mass(std::size_t n_vars, std::size_t mode);

  std::size_t n_vars() const { return n_vars_; }
  std::size_t n_modes() const { return n_vars_ / 2; }
  const std::vector<GaussPolyTerm>& terms() const { return terms_; }
  bool has_point_masses() const;

  // Validates shape, symmetry (1e-12) and delta placement, then appends.
  void add_term(GaussPolyTerm term);

  // Value of a zero-variable function (e.g. the result of a full integration).
  cplx scalar() const;

 private:
  std::size_t n_vars_;
  std::vector<GaussPolyTerm> terms_;
};

// Pointwise product. Both operands must share n_vars.
PolyGaussFunction multiply(const PolyGaussFunction& f, const PolyGaussFunction& g);
PolyGaussFunction add(const PolyGaussFunction& f, const PolyGaussFunction& g);
PolyGaussFunction scale(const PolyGaussFunction& f, cplx c);
PolyGaussFunction multiply_polynomial(const PolyGaussFunction& f, const Polynomial& p);

// d/dx_coord, exact within the algebra.
PolyGaussFunction differentiate(const PolyGaussFunction& f, std::size_t coord);

// Integrates over the listed real coordinates with measure dx (no pi factors).
// Delta factors are only allowed when both coordinates of the mode are removed
// together; use integrate_out for that case.
PolyGaussFunction integrate_out_real(const PolyGaussFunction& f, std::span<const std::size_t> coords);

// Integrates over complex modes with measure d2beta = dRe dIm. A delta factor
// on an integrated mode contributes pi * (term at beta_mode = 0).
PolyGaussFunction integrate_out(const PolyGaussFunction& f, std::span<const std::size_t> modes);

// Sets the listed modes to zero and removes them. Terms carrying deltas on
// those modes are rejected.
PolyGaussFunction restrict_to_zero(const PolyGaussFunction& f, std::span<const std::size_t> modes);

// g(y) = f(L y) for an n_old x n_new real matrix L. Delta factors unsupported.
PolyGaussFunction linear_substitute(const PolyGaussFunction& f, const Eigen::MatrixXd& map);

// Places f's modes at target_modes of an n_modes_total-mode space; the other
// modes are spectators (factor 1).
PolyGaussFunction embed_modes(const PolyGaussFunction& f, std::size_t n_modes_total,
                              std::span<const std::size_t> target_modes);

// Merges terms with equal (A, b, deltas); A and b compared at 1e-12 absolute.
PolyGaussFunction canonicalize(const PolyGaussFunction& f, double prune_tol = 0.0);

cplx evaluate(const PolyGaussFunction& f, std::span<const double> x);

// Integral of x^exponents exp(-1/2 x^T A x + b^T x) over R^n, closed form.
cplx gaussian_moment(const Eigen::MatrixXd& quad, const Eigen::VectorXcd& lin,
                     std::span<const int> exponents);

// E[z^exponents] for z ~ N(0, cov).
double central_gaussian_moment(const Eigen::MatrixXd& cov, const Monomial& exponents);

}  // namespace nongauss

#include "nongauss/gauss_poly.hpp"

#include "nongauss/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nongauss {

namespace {

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

void check_degree(int degree) {
  if (degree > kMaxPolyDegree) {
    throw InvalidArgument(fmt::format("polynomial degree {} exceeds cap {}", degree, kMaxPolyDegree));
  }
}

void check_same_vars(std::size_t a, std::size_t b, const char* op) {
  if (a != b) throw InvalidArgument(fmt::format("{}: variable count mismatch ({} vs {})", op, a, b));
}

}  // namespace

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(std::size_t n_vars, cplx c) {
  Polynomial p(n_vars);
  p.add(Monomial(n_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n_vars, std::size_t index, cplx c) {
  if (index >= n_vars) throw InvalidArgument("Polynomial::variable: index out of range");
  Polynomial p(n_vars);
  Monomial m(n_vars, 0);
  m[index] = 1;
  p.add(m, c);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : coeffs_) d = std::max(d, monomial_degree(m));
  return d;
}

cplx Polynomial::constant_term() const {
  auto it = coeffs_.find(Monomial(n_vars_, 0));
  return it == coeffs_.end() ? cplx{0.0} : it->second;
}

void Polynomial::add(const Monomial& m, cplx c) {
  if (m.size() != n_vars_) throw InvalidArgument("Polynomial::add: monomial size mismatch");
  if (c == cplx{0.0}) return;
  auto [it, inserted] = coeffs_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{0.0}) coeffs_.erase(it);
  }
}

cplx Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != n_vars_) throw InvalidArgument("Polynomial::evaluate: point size mismatch");
  cplx sum{0.0};
  for (const auto& [m, c] : coeffs_) {
    double v = 1.0;
    for (std::size_t i = 0; i < n_vars_; ++i) {
      for (int e = 0; e < m[i]; ++e) v *= x[i];
    }
    sum += c * v;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t index) const {
  if (index >= n_vars_) throw InvalidArgument("Polynomial::derivative: index out of range");
  Polynomial out(n_vars_);
  for (const auto& [m, c] : coeffs_) {
    if (m[index] == 0) continue;
    Monomial d = m;
    d[index] -= 1;
    out.add(d, c * static_cast<double>(m[index]));
  }
  return out;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images, std::size_t new_n_vars) const {
  if (images.size() != n_vars_) throw InvalidArgument("Polynomial::substitute: image count mismatch");
  for (const auto& img : images) check_same_vars(img.n_vars(), new_n_vars, "Polynomial::substitute");

  // powers[i][e] = images[i]^e, built lazily
  std::vector<std::vector<Polynomial>> powers(n_vars_);
  auto power = [&](std::size_t i, int e) -> const Polynomial& {
    auto& row = powers[i];
    if (row.empty()) row.push_back(Polynomial::constant(new_n_vars, 1.0));
    while (static_cast<int>(row.size()) <= e) row.push_back(row.back() * images[i]);
    return row[e];
  };

  Polynomial out(new_n_vars);
  for (const auto& [m, c] : coeffs_) {
    Polynomial prod = Polynomial::constant(new_n_vars, c);
    for (std::size_t i = 0; i < n_vars_; ++i) {
      if (m[i] > 0) prod = prod * power(i, m[i]);
    }
    out += prod;
  }
  return out;
}

Polynomial Polynomial::drop_zeroed(const std::vector<bool>& zeroed) const {
  if (zeroed.size() != n_vars_) throw InvalidArgument("Polynomial::drop_zeroed: mask size mismatch");
  std::size_t kept = std::count(zeroed.begin(), zeroed.end(), false);
  Polynomial out(kept);
  for (const auto& [m, c] : coeffs_) {
    bool vanishes = false;
    Monomial r;
    r.reserve(kept);
    for (std::size_t i = 0; i < n_vars_; ++i) {
      if (zeroed[i]) {
        if (m[i] > 0) {
          vanishes = true;
          break;
        }
      } else {
        r.push_back(m[i]);
      }
    }
    if (!vanishes) out.add(r, c);
  }
  return out;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial out(n_vars_);
  for (const auto& [m, c] : coeffs_) {
    if (std::abs(c) > tol) out.coeffs_.emplace(m, c);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_vars(n_vars_, o.n_vars_, "Polynomial::+");
  for (const auto& [m, c] : o.coeffs_) add(m, c);
  return *this;
}

Polynomial& Polynomial::operator*=(cplx c) {
  if (c == cplx{0.0}) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [m, v] : coeffs_) v *= c;
  return *this;
}

Polynomial operator-(Polynomial a, const Polynomial& b) {
  check_same_vars(a.n_vars_, b.n_vars_, "Polynomial::-");
  for (const auto& [m, c] : b.coeffs_) a.add(m, -c);
  return a;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  check_same_vars(a.n_vars_, b.n_vars_, "Polynomial::*");
  Polynomial out(a.n_vars_);
  Monomial m(a.n_vars_);
  for (const auto& [ma, ca] : a.coeffs_) {
    for (const auto& [mb, cb] : b.coeffs_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      check_degree(monomial_degree(m));
      out.add(m, ca * cb);
    }
  }
  return out;
}

// --------------------------------------------------------- PolyGaussFunction

PolyGaussFunction PolyGaussFunction::gaussian(const Eigen::MatrixXd& quad, cplx coeff) {
  if (quad.rows() != quad.cols()) throw InvalidArgument("gaussian: exponent matrix must be square");
  const auto n = static_cast<std::size_t>(quad.rows());
  PolyGaussFunction f(n);
  f.add_term({coeff, Polynomial::constant(n, 1.0), quad, Eigen::VectorXcd::Zero(quad.rows()), 0});
  return f;
}

PolyGaussFunction PolyGaussFunction::constant(std::size_t n_vars, cplx c) {
  const auto n = static_cast<Eigen::Index>(n_vars);
  PolyGaussFunction f(n_vars);
  f.add_term({c, Polynomial::constant(n_vars, 1.0), Eigen::MatrixXd::Zero(n, n), Eigen::VectorXcd::Zero(n), 0});
  return f;
}

PolyGaussFunction PolyGaussFunction::point_mass(std::size_t n_vars, std::size_t mode) {
  PolyGaussFunction f(n_vars);
  const auto n = static_cast<Eigen::Index>(n_vars);
  f.add_term({1.0, Polynomial::constant(n_vars, 1.0), Eigen::MatrixXd::Zero(n, n), Eigen::VectorXcd::Zero(n),
              std::uint32_t{1} << mode});
  return f;
}

bool PolyGaussFunction::has_point_masses() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.delta_modes != 0; });
}

void PolyGaussFunction::add_term(GaussPolyTerm term) {
  const auto n = static_cast<Eigen::Index>(n_vars_);
  if (term.poly.n_vars() != n_vars_ || term.quad.rows() != n || term.quad.cols() != n || term.lin.size() != n) {
    throw InvalidArgument(fmt::format("add_term: term shape does not match {} variables", n_vars_));
  }
  if (n > 0 && (term.quad - term.quad.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("add_term: exponent matrix is not symmetric");
  }
  if (term.delta_modes != 0) {
    if (n_vars_ % 2 != 0 || (term.delta_modes >> (n_vars_ / 2)) != 0) {
      throw InvalidArgument("add_term: point mass refers to an invalid mode");
    }
  }
  check_degree(term.poly.degree());
  terms_.push_back(std::move(term));
}

cplx PolyGaussFunction::scalar() const {
  if (n_vars_ != 0) throw InvalidArgument("scalar: function still has free variables");
  if (has_point_masses()) throw UnsupportedEvaluation("scalar: point masses present");
  cplx sum{0.0};
  for (const auto& t : terms_) sum += t.coeff * t.poly.constant_term();
  return sum;
}

// ---------------------------------------------------------------- operations

PolyGaussFunction multiply(const PolyGaussFunction& f, const PolyGaussFunction& g) {
  check_same_vars(f.n_vars(), g.n_vars(), "multiply");
  PolyGaussFunction out(f.n_vars());
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      if (a.delta_modes & b.delta_modes) {
        throw InvalidArgument("multiply: product of two point masses on the same mode");
      }
      out.add_term({a.coeff * b.coeff, a.poly * b.poly, a.quad + b.quad, a.lin + b.lin,
                    a.delta_modes | b.delta_modes});
    }
  }
  return canonicalize(out);
}

PolyGaussFunction add(const PolyGaussFunction& f, const PolyGaussFunction& g) {
  check_same_vars(f.n_vars(), g.n_vars(), "add");
  PolyGaussFunction out = f;
  for (const auto& t : g.terms()) out.add_term(t);
  return canonicalize(out);
}

PolyGaussFunction scale(const PolyGaussFunction& f, cplx c) {
  PolyGaussFunction out(f.n_vars());
  for (auto t : f.terms()) {
    t.coeff *= c;
    out.add_term(std::move(t));
  }
  return out;
}

PolyGaussFunction multiply_polynomial(const PolyGaussFunction& f, const Polynomial& p) {
  check_same_vars(f.n_vars(), p.n_vars(), "multiply_polynomial");
  PolyGaussFunction out(f.n_vars());
  for (auto t : f.terms()) {
    t.poly = t.poly * p;
    out.add_term(std::move(t));
  }
  return out;
}

PolyGaussFunction differentiate(const PolyGaussFunction& f, std::size_t coord) {
  const std::size_t n = f.n_vars();
  if (coord >= n) throw InvalidArgument("differentiate: coordinate out of range");
  PolyGaussFunction out(n);
  for (const auto& t : f.terms()) {
    if (t.has_delta(coord / 2)) throw UnsupportedEvaluation("differentiate: point mass on that mode");
    // d/dx_i [p e^{-x'Ax/2 + b'x}] = (dp/dx_i + p (b_i - (Ax)_i)) e^{...}
    Polynomial slope = Polynomial::constant(n, t.lin(static_cast<Eigen::Index>(coord)));
    for (std::size_t j = 0; j < n; ++j) {
      const double a = t.quad(static_cast<Eigen::Index>(coord), static_cast<Eigen::Index>(j));
      if (a != 0.0) slope += Polynomial::variable(n, j, -a);
    }
    GaussPolyTerm d = t;
    d.poly = t.poly.derivative(coord) + t.poly * slope;
    out.add_term(std::move(d));
  }
  return canonicalize(out);
}

namespace {

std::vector<Eigen::Index> complement(std::size_t n, const std::vector<bool>& mask, bool value) {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i] == value) idx.push_back(static_cast<Eigen::Index>(i));
  }
  return idx;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows,
                          const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  }
  return out;
}

Eigen::VectorXcd subvector(const Eigen::VectorXcd& v, const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXcd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

// Removes the masked coordinates from a term by setting them to zero.
GaussPolyTerm drop_coordinates(const GaussPolyTerm& t, const std::vector<bool>& zeroed) {
  const auto keep = complement(zeroed.size(), zeroed, false);
  GaussPolyTerm out;
  out.coeff = t.coeff;
  out.poly = t.poly.drop_zeroed(zeroed);
  out.quad = submatrix(t.quad, keep, keep);
  out.lin = subvector(t.lin, keep);
  return out;
}

// Mode bitmask after removing the flagged modes.
std::uint32_t compact_modes(std::uint32_t modes, const std::vector<bool>& removed_modes) {
  std::uint32_t out = 0;
  int pos = 0;
  for (std::size_t k = 0; k < removed_modes.size(); ++k) {
    if (removed_modes[k]) continue;
    if ((modes >> k) & 1u) out |= std::uint32_t{1} << pos;
    ++pos;
  }
  return out;
}

// Gaussian integral over the masked coordinates of a delta-free term.
GaussPolyTerm integrate_term(const GaussPolyTerm& t, const std::vector<bool>& integrate, std::size_t term_index) {
  const std::size_t n = t.n_vars();
  const auto w = complement(n, integrate, true);
  const auto u = complement(n, integrate, false);
  if (w.empty()) return drop_coordinates(t, std::vector<bool>(n, false));
  const std::size_t k = w.size();
  const std::size_t m = u.size();

  const Eigen::MatrixXd a_ww = submatrix(t.quad, w, w);
  const Eigen::MatrixXd a_wu = submatrix(t.quad, w, u);
  const Eigen::MatrixXd a_uu = submatrix(t.quad, u, u);
  const Eigen::VectorXcd b_w = subvector(t.lin, w);
  const Eigen::VectorXcd b_u = subvector(t.lin, u);

  Eigen::LLT<Eigen::MatrixXd> llt(a_ww);
  bool pd = llt.info() == Eigen::Success;
  if (pd) {
    pd = llt.matrixLLT().diagonal().minCoeff() > 1e-12 * std::max(1.0, a_ww.cwiseAbs().maxCoeff());
  }
  if (!pd) {
    throw DivergentIntegral(fmt::format("integrate_out: integrated block of term {} is not positive definite",
                                        term_index),
                            term_index);
  }
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd gain = cov * a_wu;             // k x m
  const Eigen::VectorXcd shift = cov * b_w;            // k
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i) {
    log_det += 2.0 * std::log(llt.matrixLLT()(i, i));
  }

  GaussPolyTerm out;
  const cplx exponent = 0.5 * (b_w.transpose() * shift)(0);
  out.coeff = t.coeff * std::pow(2.0 * std::numbers::pi, 0.5 * static_cast<double>(k)) *
              std::exp(-0.5 * log_det) * std::exp(exponent);
  out.quad = a_uu - a_wu.transpose() * gain;
  out.quad = 0.5 * (out.quad + out.quad.transpose()).eval();
  out.lin = b_u - a_wu.transpose().cast<cplx>() * shift;

  // Polynomial: w = shift - gain*u + z, with z ~ N(0, cov). Variables of the
  // substituted polynomial are (u_0..u_{m-1}, z_0..z_{k-1}).
  const std::size_t nn = m + k;
  std::vector<Polynomial> images(n, Polynomial(nn));
  for (std::size_t i = 0; i < m; ++i) images[u[i]] = Polynomial::variable(nn, i);
  for (std::size_t j = 0; j < k; ++j) {
    Polynomial img = Polynomial::variable(nn, m + j);
    img += Polynomial::constant(nn, shift(static_cast<Eigen::Index>(j)));
    for (std::size_t i = 0; i < m; ++i) {
      const double g = gain(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (g != 0.0) img += Polynomial::variable(nn, i, -g);
    }
    images[w[j]] = std::move(img);
  }
  const Polynomial expanded = t.poly.substitute(images, nn);

  std::map<Monomial, double> memo;
  Polynomial reduced(m);
  for (const auto& [mono, c] : expanded.coefficients()) {
    Monomial zpart(mono.begin() + static_cast<std::ptrdiff_t>(m), mono.end());
    if (monomial_degree(zpart) % 2 != 0) continue;
    auto it = memo.find(zpart);
    if (it == memo.end()) it = memo.emplace(zpart, central_gaussian_moment(cov, zpart)).first;
    if (it->second == 0.0) continue;
    reduced.add(Monomial(mono.begin(), mono.begin() + static_cast<std::ptrdiff_t>(m)), c * it->second);
  }
  out.poly = std::move(reduced);
  return out;
}

}  // namespace

PolyGaussFunction integrate_out_real(const PolyGaussFunction& f, std::span<const std::size_t> coords) {
  const std::size_t n = f.n_vars();
  std::vector<bool> mask(n, false);
  for (auto c : coords) {
    if (c >= n) throw InvalidArgument("integrate_out_real: coordinate out of range");
    mask[c] = true;
  }
  const std::size_t remaining = n - static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  if (f.has_point_masses()) {
    // Only whole modes may be removed when delta factors are present.
    for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
      if (mask[2 * k] != mask[2 * k + 1]) {
        throw InvalidArgument("integrate_out_real: partial mode removal with point masses present");
      }
    }
    std::vector<std::size_t> modes;
    for (std::size_t k = 0; 2 * k < n; ++k) {
      if (mask[2 * k]) modes.push_back(k);
    }
    return integrate_out(f, modes);
  }
  PolyGaussFunction out(remaining);
  for (std::size_t i = 0; i < f.terms().size(); ++i) out.add_term(integrate_term(f.terms()[i], mask, i));
  return canonicalize(out);
}

PolyGaussFunction integrate_out(const PolyGaussFunction& f, std::span<const std::size_t> modes) {
  const std::size_t n = f.n_vars();
  if (n % 2 != 0) throw InvalidArgument("integrate_out: variable count is not even");
  const std::size_t n_modes = n / 2;
  std::vector<bool> mode_mask(n_modes, false);
  for (auto k : modes) {
    if (k >= n_modes) throw InvalidArgument("integrate_out: mode out of range");
    mode_mask[k] = true;
  }
  const std::size_t removed = static_cast<std::size_t>(std::count(mode_mask.begin(), mode_mask.end(), true));
  PolyGaussFunction out(n - 2 * removed);

  for (std::size_t ti = 0; ti < f.terms().size(); ++ti) {
    const auto& t = f.terms()[ti];
    // Resolve deltas on integrated modes: pi * term|_{beta_k = 0}.
    std::vector<bool> zeroed(n, false);
    std::vector<bool> zeroed_modes(n_modes, false);
    double weight = 1.0;
    for (std::size_t k = 0; k < n_modes; ++k) {
      if (mode_mask[k] && t.has_delta(k)) {
        zeroed[2 * k] = zeroed[2 * k + 1] = true;
        zeroed_modes[k] = true;
        weight *= std::numbers::pi;
      }
    }
    GaussPolyTerm reduced = drop_coordinates(t, zeroed);
    reduced.coeff *= weight;
    const std::uint32_t deltas = compact_modes(t.delta_modes, zeroed_modes);

    // Remaining integration coordinates, in the reduced variable list.
    std::vector<bool> reduced_mode_mask;
    for (std::size_t k = 0; k < n_modes; ++k) {
      if (!zeroed_modes[k]) reduced_mode_mask.push_back(mode_mask[k] && !t.has_delta(k));
    }
    std::vector<bool> integrate(reduced.n_vars(), false);
    for (std::size_t k = 0; k < reduced_mode_mask.size(); ++k) {
      integrate[2 * k] = integrate[2 * k + 1] = reduced_mode_mask[k];
    }
    GaussPolyTerm done = integrate_term(reduced, integrate, ti);
    done.delta_modes = compact_modes(deltas, reduced_mode_mask);
    out.add_term(std::move(done));
  }
  return canonicalize(out);
}

PolyGaussFunction restrict_to_zero(const PolyGaussFunction& f, std::span<const std::size_t> modes) {
  const std::size_t n = f.n_vars();
  const std::size_t n_modes = n / 2;
  std::vector<bool> zeroed(n, false);
  std::vector<bool> zeroed_modes(n_modes, false);
  for (auto k : modes) {
    if (k >= n_modes) throw InvalidArgument("restrict_to_zero: mode out of range");
    zeroed[2 * k] = zeroed[2 * k + 1] = true;
    zeroed_modes[k] = true;
  }
  const std::size_t removed = static_cast<std::size_t>(std::count(zeroed_modes.begin(), zeroed_modes.end(), true));
  PolyGaussFunction out(n - 2 * removed);
  for (const auto& t : f.terms()) {
    for (auto k : modes) {
      if (t.has_delta(k)) throw UnsupportedEvaluation("restrict_to_zero: point mass on a restricted mode");
    }
    GaussPolyTerm r = drop_coordinates(t, zeroed);
    r.delta_modes = compact_modes(t.delta_modes, zeroed_modes);
    out.add_term(std::move(r));
  }
  return canonicalize(out);
}

PolyGaussFunction linear_substitute(const PolyGaussFunction& f, const Eigen::MatrixXd& map) {
  if (static_cast<std::size_t>(map.rows()) != f.n_vars()) {
    throw InvalidArgument("linear_substitute: map rows must equal the variable count");
  }
  const auto n_new = static_cast<std::size_t>(map.cols());
  std::vector<Polynomial> images(f.n_vars(), Polynomial(n_new));
  for (Eigen::Index i = 0; i < map.rows(); ++i) {
    for (Eigen::Index j = 0; j < map.cols(); ++j) {
      if (map(i, j) != 0.0) images[i] += Polynomial::variable(n_new, static_cast<std::size_t>(j), map(i, j));
    }
  }
  PolyGaussFunction out(n_new);
  for (const auto& t : f.terms()) {
    if (t.delta_modes != 0) throw UnsupportedEvaluation("linear_substitute: point masses present");
    GaussPolyTerm s;
    s.coeff = t.coeff;
    s.poly = t.poly.substitute(images, n_new);
    s.quad = map.transpose() * t.quad * map;
    s.quad = 0.5 * (s.quad + s.quad.transpose()).eval();
    s.lin = map.transpose().cast<cplx>() * t.lin;
    out.add_term(std::move(s));
  }
  return canonicalize(out);
}

PolyGaussFunction embed_modes(const PolyGaussFunction& f, std::size_t n_modes_total,
                              std::span<const std::size_t> target_modes) {
  if (f.n_vars() != 2 * target_modes.size()) throw InvalidArgument("embed_modes: mode count mismatch");
  const std::size_t n = 2 * n_modes_total;
  std::vector<std::size_t> coord(f.n_vars());
  for (std::size_t k = 0; k < target_modes.size(); ++k) {
    if (target_modes[k] >= n_modes_total) throw InvalidArgument("embed_modes: target mode out of range");
    coord[2 * k] = 2 * target_modes[k];
    coord[2 * k + 1] = 2 * target_modes[k] + 1;
  }
  std::vector<Polynomial> images;
  for (auto c : coord) images.push_back(Polynomial::variable(n, c));
  PolyGaussFunction out(n);
  for (const auto& t : f.terms()) {
    GaussPolyTerm e;
    e.coeff = t.coeff;
    e.poly = t.poly.substitute(images, n);
    e.quad = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    e.lin = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < coord.size(); ++i) {
      e.lin(static_cast<Eigen::Index>(coord[i])) = t.lin(static_cast<Eigen::Index>(i));
      for (std::size_t j = 0; j < coord.size(); ++j) {
        e.quad(static_cast<Eigen::Index>(coord[i]), static_cast<Eigen::Index>(coord[j])) =
            t.quad(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
    for (std::size_t k = 0; k < target_modes.size(); ++k) {
      if (t.has_delta(k)) e.delta_modes |= std::uint32_t{1} << target_modes[k];
    }
    out.add_term(std::move(e));
  }
  return out;
}

PolyGaussFunction canonicalize(const PolyGaussFunction& f, double prune_tol) {
  std::vector<GaussPolyTerm> merged;
  for (const auto& t : f.terms()) {
    auto same = [&](const GaussPolyTerm& m) {
      if (m.delta_modes != t.delta_modes) return false;
      if (m.quad.size() > 0 && (m.quad - t.quad).cwiseAbs().maxCoeff() > 1e-12) return false;
      if (m.lin.size() > 0 && (m.lin - t.lin).cwiseAbs().maxCoeff() > 1e-12) return false;
      return true;
    };
    auto it = std::find_if(merged.begin(), merged.end(), same);
    if (it == merged.end()) {
      GaussPolyTerm c = t;
      c.poly = t.poly * t.coeff;
      c.coeff = 1.0;
      merged.push_back(std::move(c));
    } else {
      it->poly += t.poly * t.coeff;
    }
  }
  PolyGaussFunction out(f.n_vars());
  for (auto& t : merged) {
    if (prune_tol > 0.0) t.poly = t.poly.pruned(prune_tol);
    if (t.poly.is_zero()) continue;
    out.add_term(std::move(t));
  }
  return out;
}

cplx evaluate(const PolyGaussFunction& f, std::span<const double> x) {
  if (x.size() != f.n_vars()) throw InvalidArgument("evaluate: point size mismatch");
  if (f.has_point_masses()) throw UnsupportedEvaluation("evaluate: point masses cannot be evaluated pointwise");
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  cplx sum{0.0};
  for (const auto& t : f.terms()) {
    const double quad = f.n_vars() > 0 ? v.dot(t.quad * v) : 0.0;
    const cplx lin = f.n_vars() > 0 ? (t.lin.transpose() * v.cast<cplx>())(0) : cplx{0.0};
    sum += t.coeff * t.poly.evaluate(x) * std::exp(-0.5 * quad + lin);
  }
  return sum;
}

double central_gaussian_moment(const Eigen::MatrixXd& cov, const Monomial& exponents) {
  std::map<Monomial, double> memo;
  auto rec = [&](auto&& self, const Monomial& e) -> double {
    const int deg = monomial_degree(e);
    if (deg == 0) return 1.0;
    if (deg % 2 != 0) return 0.0;
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    // Isserlis: E[z_i z^r] = sum_j cov_ij r_j E[z^{r - e_j}]
    std::size_t i = 0;
    while (e[i] == 0) ++i;
    Monomial rest = e;
    rest[i] -= 1;
    double sum = 0.0;
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (rest[j] == 0) continue;
      const double c = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (c == 0.0) continue;
      Monomial next = rest;
      next[j] -= 1;
      sum += c * rest[j] * self(self, next);
    }
    memo.emplace(e, sum);
    return sum;
  };
  if (static_cast<Eigen::Index>(exponents.size()) != cov.rows()) {
    throw InvalidArgument("central_gaussian_moment: exponent size mismatch");
  }
  return rec(rec, exponents);
}

cplx gaussian_moment(const Eigen::MatrixXd& quad, const Eigen::VectorXcd& lin, std::span<const int> exponents) {
  const auto n = static_cast<std::size_t>(quad.rows());
  if (quad.cols() != quad.rows() || static_cast<std::size_t>(lin.size()) != n || exponents.size() != n) {
    throw InvalidArgument("gaussian_moment: shape mismatch");
  }
  Monomial m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (exponents[i] < 0) throw InvalidArgument("gaussian_moment: negative exponent");
    m[i] = static_cast<std::uint8_t>(exponents[i]);
  }
  PolyGaussFunction f(n);
  Polynomial p(n);
  p.add(m, 1.0);
  f.add_term({1.0, p, quad, lin, 0});
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  try {
    return integrate_out_real(f, all).scalar();
  } catch (const DivergentIntegral&) {
    throw DivergentIntegral("gaussian_moment: exponent matrix is not positive definite", 0);
  }
}

}  // namespace nongauss

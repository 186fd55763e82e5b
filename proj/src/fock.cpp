#include "nongauss/fock.hpp"

#include "nongauss/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

namespace nongauss::fock {

namespace {

using Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

std::vector<std::size_t> make_strides(const std::vector<int>& cutoffs) {
  std::vector<std::size_t> strides(cutoffs.size(), 1);
  for (std::size_t k = cutoffs.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * static_cast<std::size_t>(cutoffs[k] + 1);
  }
  return strides;
}

std::size_t total_size(const std::vector<int>& cutoffs) {
  std::size_t n = 1;
  for (int c : cutoffs) n *= static_cast<std::size_t>(c + 1);
  return n;
}

int occupation_of(std::size_t flat, std::size_t stride, int cutoff) {
  return static_cast<int>((flat / stride) % static_cast<std::size_t>(cutoff + 1));
}

void check_pair(const FockTensor& s, std::pair<std::size_t, std::size_t> modes) {
  if (modes.first == modes.second || modes.first >= s.n_modes() || modes.second >= s.n_modes()) {
    throw InvalidArgument(fmt::format("mode pair ({}, {}) invalid for {} modes", modes.first, modes.second,
                                      s.n_modes()));
  }
}

// Flat indices with zero occupation on both listed modes.
std::vector<std::size_t> pair_bases(const FockTensor& s, std::size_t i, std::size_t j) {
  std::vector<std::size_t> bases;
  for (std::size_t f = 0; f < s.size(); ++f) {
    if (occupation_of(f, s.stride(i), s.cutoffs()[i]) == 0 && occupation_of(f, s.stride(j), s.cutoffs()[j]) == 0) {
      bases.push_back(f);
    }
  }
  return bases;
}

double sum_norm2(const std::vector<cplx>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0, [](double acc, cplx z) { return acc + std::norm(z); });
}

// C(n,j) T^(n-j) (1-T)^j, the squared Kraus amplitude of losing j of n photons.
double loss_weight(int n, int j, double T) {
  if (j < 0 || j > n) return 0.0;
  const double R = 1.0 - T;
  if (j > 0 && R == 0.0) return 0.0;
  if (n - j > 0 && T == 0.0) return 0.0;
  const double log_binom = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
  double w = std::exp(log_binom);
  if (n - j > 0) w *= std::pow(T, n - j);
  if (j > 0) w *= std::pow(R, j);
  return w;
}

cplx int_pow(cplx z, int k) {
  cplx out = 1.0;
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

// Columns 0..length-1 of exp(G) for the tridiagonal chain generator, by
// Taylor steps applied to the unit vectors.
Eigen::MatrixXcd squeeze_block(cplx zeta, int delta, int kmin, int length, int padded) {
  std::vector<cplx> lower(static_cast<std::size_t>(padded), 0.0);  // G(t+1, t)
  std::vector<cplx> upper(static_cast<std::size_t>(padded), 0.0);  // G(t-1, t)
  double norm = 0.0;
  for (int t = 0; t < padded; ++t) {
    const double k = kmin + t;
    const auto ut = static_cast<std::size_t>(t);
    if (t + 1 < padded) lower[ut] = -zeta * std::sqrt((k + delta + 1.0) * (k + 1.0));
    if (t > 0) upper[ut] = std::conj(zeta) * std::sqrt((k + delta) * k);
    norm = std::max(norm, std::abs(lower[ut]) + std::abs(upper[ut]));
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(norm / 4.0)));
  const double h = 1.0 / steps;
  for (auto& c : lower) c *= h;
  for (auto& c : upper) c *= h;

  auto apply = [&](const Eigen::MatrixXcd& y) {
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(y.rows(), y.cols());
    for (Index c = 0; c < y.cols(); ++c) {
      for (Index t = 0; t < y.rows(); ++t) {
        const cplx v = y(t, c);
        if (v == 0.0) continue;
        const auto ut = static_cast<std::size_t>(t);
        if (t + 1 < y.rows()) z(t + 1, c) += lower[ut] * v;
        if (t > 0) z(t - 1, c) += upper[ut] * v;
      }
    }
    return z;
  };

  Eigen::MatrixXcd x = Eigen::MatrixXcd::Identity(padded, length);
  for (int step = 0; step < steps; ++step) {
    Eigen::MatrixXcd sum = x;
    Eigen::MatrixXcd term = x;
    const double scale = x.cwiseAbs().maxCoeff();
    for (int k = 1; k < 100; ++k) {
      term = apply(term) / static_cast<double>(k);
      sum += term;
      if (term.cwiseAbs().maxCoeff() < 1e-18 * scale) break;
    }
    x = std::move(sum);
  }
  return x.topRows(length);
}

// Chain padding past the cutoff: couplings decay like tanh(r)^m.
int squeeze_padding(double r, int length) {
  const double decay = -std::log(std::tanh(r));
  const double need = decay > 0.0 ? std::ceil(40.0 / decay) : 4000.0;
  return std::max({20, length, static_cast<int>(std::min(need, 4000.0))});
}

}  // namespace

FockTensor::FockTensor(std::vector<int> cutoffs)
    : cutoffs_(std::move(cutoffs)), strides_(make_strides(cutoffs_)), amps_(total_size(cutoffs_), 0.0) {
  for (int c : cutoffs_) {
    if (c < 0) throw InvalidArgument("FockTensor: cutoffs must be >= 0");
  }
}

FockTensor FockTensor::vacuum(std::vector<int> cutoffs) {
  FockTensor t(std::move(cutoffs));
  t.amps_[0] = 1.0;
  return t;
}

FockTensor FockTensor::basis(std::vector<int> cutoffs, const std::vector<int>& occupation) {
  FockTensor t(std::move(cutoffs));
  t.amps_[t.index(occupation)] = 1.0;
  return t;
}

std::size_t FockTensor::index(const std::vector<int>& occupation) const {
  if (occupation.size() != cutoffs_.size()) throw InvalidArgument("FockTensor: occupation size mismatch");
  std::size_t f = 0;
  for (std::size_t k = 0; k < occupation.size(); ++k) {
    if (occupation[k] < 0 || occupation[k] > cutoffs_[k]) {
      throw InvalidArgument(fmt::format("FockTensor: occupation {} of mode {} beyond cutoff {}", occupation[k], k,
                                        cutoffs_[k]));
    }
    f += static_cast<std::size_t>(occupation[k]) * strides_[k];
  }
  return f;
}

double FockTensor::norm2() const { return sum_norm2(amps_); }

FockDensity::FockDensity(std::vector<int> cutoffs, Eigen::MatrixXcd matrix)
    : cutoffs_(std::move(cutoffs)), matrix_(std::move(matrix)) {
  const auto d = idx(total_size(cutoffs_));
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw InvalidArgument(fmt::format("FockDensity: matrix must be {}x{}", d, d));
  }
}

FockDensity FockDensity::from_pure(const FockTensor& psi) {
  const Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), idx(psi.size()));
  FockDensity rho(psi.cutoffs(), v * v.adjoint());
  rho.leak = psi.leak();
  return rho;
}

FockDensity FockDensity::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw DegeneratePostselection("FockDensity: zero trace");
  FockDensity out(cutoffs_, matrix_ / tr);
  out.leak = leak;
  return out;
}

bool FockDensity::is_physical() const {
  const double scale = std::max(1.0, std::abs(trace()));
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) return false;
  const Eigen::MatrixXcd h = 0.5 * (matrix_ + matrix_.adjoint());
  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  return min_eig >= -1e-9 * scale;
}

Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& m) {
  const Index n = m.rows();
  if (n == 0) return m;
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXcd a = m / std::ldexp(1.0, squarings);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k < 60; ++k) {
    term = (term * a) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) sum = (sum * sum).eval();
  return sum;
}

FockTensor apply_two_mode_squeeze(const FockTensor& state, std::pair<std::size_t, std::size_t> modes,
                                  const SqueezeParam& p, double tol) {
  check_pair(state, modes);
  if (!(p.amplitude >= 0.0)) throw InvalidArgument("apply_two_mode_squeeze: amplitude must be >= 0");
  if (p.amplitude == 0.0) return state;
  const auto [i, j] = modes;
  const int ci = state.cutoffs()[i];
  const int cj = state.cutoffs()[j];
  const cplx zeta = std::polar(p.amplitude, p.phase);
  const std::vector<std::size_t> bases = pair_bases(state, i, j);

  FockTensor out(state.cutoffs());
  out.add_leak(state.leak());
  for (int delta = -cj; delta <= ci; ++delta) {
    const int kmin = std::max(0, -delta);
    const int kmax = std::min(cj, ci - delta);
    const int length = kmax - kmin + 1;
    if (length <= 0) continue;
    const Eigen::MatrixXcd block =
        squeeze_block(zeta, delta, kmin, length, length + squeeze_padding(p.amplitude, length));
    Eigen::VectorXcd v(length);
    for (std::size_t base : bases) {
      for (int t = 0; t < length; ++t) {
        const int k = kmin + t;
        v(t) = state[base + static_cast<std::size_t>(k + delta) * state.stride(i) +
                     static_cast<std::size_t>(k) * state.stride(j)];
      }
      const Eigen::VectorXcd w = block * v;
      for (int t = 0; t < length; ++t) {
        const int k = kmin + t;
        out[base + static_cast<std::size_t>(k + delta) * state.stride(i) +
            static_cast<std::size_t>(k) * state.stride(j)] = w(t);
      }
    }
  }
  const double deficit = state.norm2() - out.norm2();
  if (deficit > tol) {
    throw CutoffTooSmall(fmt::format("apply_two_mode_squeeze: norm deficit {:.3g} exceeds {:.3g}", deficit, tol),
                         deficit);
  }
  out.add_leak(std::max(0.0, deficit));
  return out;
}

FockTensor apply_beam_splitter(const FockTensor& state, std::pair<std::size_t, std::size_t> modes, double T) {
  check_pair(state, modes);
  if (!(T >= 0.0 && T <= 1.0)) throw InvalidArgument(fmt::format("apply_beam_splitter: T = {} outside [0,1]", T));
  if (T == 1.0) return state;
  const auto [i, j] = modes;
  const int ci = state.cutoffs()[i];
  const int cj = state.cutoffs()[j];
  const double kappa = std::atan2(std::sqrt(1.0 - T), std::sqrt(T));
  const std::vector<std::size_t> bases = pair_bases(state, i, j);
  const std::size_t si = state.stride(i);
  const std::size_t sj = state.stride(j);

  FockTensor out(state.cutoffs());
  out.add_leak(state.leak());
  for (int total = 0; total <= ci + cj; ++total) {
    // Basis |m, total - m>, m = 0..total.
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(total + 1, total + 1);
    for (int m = 0; m <= total; ++m) {
      if (m < total) g(m + 1, m) = kappa * std::sqrt((m + 1.0) * (total - m));
      if (m > 0) g(m - 1, m) = -kappa * std::sqrt(m * (total - m + 1.0));
    }
    const Eigen::MatrixXcd u = expm_taylor(g);
    const int mlo = std::max(0, total - cj);
    const int mhi = std::min(ci, total);
    if (mlo > mhi) continue;
    for (std::size_t base : bases) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(total + 1);
      for (int m = mlo; m <= mhi; ++m) {
        v(m) = state[base + static_cast<std::size_t>(m) * si + static_cast<std::size_t>(total - m) * sj];
      }
      const Eigen::VectorXcd w = u * v;
      for (int m = mlo; m <= mhi; ++m) {
        out[base + static_cast<std::size_t>(m) * si + static_cast<std::size_t>(total - m) * sj] = w(m);
      }
    }
  }
  return out;
}

FockTensor apply_ladder(const FockTensor& state, std::size_t mode, bool dagger) {
  if (mode >= state.n_modes()) throw InvalidArgument("apply_ladder: mode out of range");
  const int c = state.cutoffs()[mode];
  const std::size_t st = state.stride(mode);
  FockTensor out(state.cutoffs());
  out.add_leak(state.leak());
  double lost = 0.0;
  for (std::size_t f = 0; f < state.size(); ++f) {
    const cplx a = state[f];
    if (a == 0.0) continue;
    const int n = occupation_of(f, st, c);
    if (dagger) {
      const cplx v = a * std::sqrt(n + 1.0);
      if (n == c) {
        lost += std::norm(v);
      } else {
        out[f + st] += v;
      }
    } else if (n > 0) {
      out[f - st] += a * std::sqrt(static_cast<double>(n));
    }
  }
  out.add_leak(lost);
  return out;
}

FockTensor add(const FockTensor& a, const FockTensor& b, cplx ca, cplx cb) {
  if (a.cutoffs() != b.cutoffs()) throw InvalidArgument("add: cutoff mismatch");
  FockTensor out(a.cutoffs());
  for (std::size_t f = 0; f < a.size(); ++f) out[f] = ca * a[f] + cb * b[f];
  out.add_leak(std::norm(ca) * a.leak() + std::norm(cb) * b.leak());
  return out;
}

FockDensity loss_kraus(const FockDensity& rho, std::size_t mode, double T_loss) {
  if (mode >= rho.n_modes()) throw InvalidArgument("loss_kraus: mode out of range");
  if (!(T_loss >= 0.0 && T_loss <= 1.0)) throw InvalidArgument("loss_kraus: T_loss outside [0,1]");
  if (T_loss == 1.0) return rho;
  const int c = rho.cutoffs()[mode];
  const std::size_t st = make_strides(rho.cutoffs())[mode];

  // amp(n, j) = <n-j|K_j|n>.
  Eigen::MatrixXd amp = Eigen::MatrixXd::Zero(c + 1, c + 1);
  for (int n = 0; n <= c; ++n) {
    for (int j = 0; j <= n; ++j) amp(n, j) = std::sqrt(loss_weight(n, j, T_loss));
  }
  const Eigen::MatrixXcd& in = rho.matrix();
  const Index d = in.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (Index col = 0; col < d; ++col) {
    const int m = occupation_of(static_cast<std::size_t>(col), st, c);
    for (Index row = 0; row < d; ++row) {
      const cplx v = in(row, col);
      if (v == 0.0) continue;
      const int n = occupation_of(static_cast<std::size_t>(row), st, c);
      for (int j = 0; j <= std::min(n, m); ++j) {
        out(row - idx(j * st), col - idx(j * st)) += amp(n, j) * amp(m, j) * v;
      }
    }
  }
  FockDensity result(rho.cutoffs(), std::move(out));
  result.leak = rho.leak;
  return result;
}

FockDensity trace_out_last(const FockTensor& psi) {
  if (psi.n_modes() < 2) throw InvalidArgument("trace_out_last: need at least two modes");
  std::vector<int> kept(psi.cutoffs().begin(), psi.cutoffs().end() - 1);
  const Index d_last = psi.cutoffs().back() + 1;
  const Index d_kept = idx(psi.size()) / d_last;
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> m(psi.amplitudes().data(), d_kept, d_last);
  FockDensity rho(std::move(kept), m * m.adjoint());
  rho.leak = psi.leak();
  return rho;
}

FockDensity loss_via_ancilla(const FockTensor& psi, std::size_t mode, double T_loss) {
  if (mode >= psi.n_modes()) throw InvalidArgument("loss_via_ancilla: mode out of range");
  std::vector<int> cutoffs = psi.cutoffs();
  cutoffs.push_back(psi.cutoffs()[mode]);
  FockTensor extended(cutoffs);
  const std::size_t d_anc = static_cast<std::size_t>(cutoffs.back() + 1);
  for (std::size_t f = 0; f < psi.size(); ++f) extended[f * d_anc] = psi[f];
  extended.add_leak(psi.leak());
  return trace_out_last(apply_beam_splitter(extended, {mode, psi.n_modes()}, T_loss));
}

Projection project_single_photon(const FockTensor& psi4) {
  if (psi4.n_modes() != 4) throw InvalidArgument("project_single_photon: need a four-mode state");
  if (psi4.cutoffs()[2] < 1 || psi4.cutoffs()[3] < 1) {
    throw InvalidArgument("project_single_photon: ancilla cutoffs must be >= 1");
  }
  FockTensor out({psi4.cutoffs()[0], psi4.cutoffs()[1]});
  out.add_leak(psi4.leak());
  const std::size_t offset = psi4.stride(2) + psi4.stride(3);
  for (int a = 0; a <= psi4.cutoffs()[0]; ++a) {
    for (int b = 0; b <= psi4.cutoffs()[1]; ++b) {
      out[out.index({a, b})] =
          psi4[static_cast<std::size_t>(a) * psi4.stride(0) + static_cast<std::size_t>(b) * psi4.stride(1) + offset];
    }
  }
  const double n2 = out.norm2();
  if (!(n2 > 1e-300)) throw DegeneratePostselection("project_single_photon: zero overlap with |1,1>");
  return {std::move(out), n2};
}

std::vector<double> on_povm_weights(double eta, int cutoff) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument(fmt::format("on_povm_weights: eta = {} outside (0,1]", eta));
  std::vector<double> w(static_cast<std::size_t>(cutoff + 1));
  for (int n = 0; n <= cutoff; ++n) w[static_cast<std::size_t>(n)] = 1.0 - std::pow(1.0 - eta, n);
  return w;
}

std::vector<double> single_photon_weights(int cutoff) {
  std::vector<double> w(static_cast<std::size_t>(cutoff + 1), 0.0);
  if (cutoff >= 1) w[1] = 1.0;
  return w;
}

std::vector<double> lossy_povm_weights(const std::vector<double>& weights, double T_loss) {
  if (!(T_loss >= 0.0 && T_loss <= 1.0)) throw InvalidArgument("lossy_povm_weights: T_loss outside [0,1]");
  std::vector<double> out(weights.size(), 0.0);
  for (std::size_t n = 0; n < weights.size(); ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      out[n] += loss_weight(static_cast<int>(n), static_cast<int>(k), T_loss) * weights[n - k];
    }
  }
  return out;
}

Conditioned povm_condition(const FockTensor& psi4, const std::vector<double>& w3, const std::vector<double>& w4) {
  if (psi4.n_modes() != 4) throw InvalidArgument("povm_condition: need a four-mode state");
  const auto& c = psi4.cutoffs();
  if (w3.size() != static_cast<std::size_t>(c[2] + 1) || w4.size() != static_cast<std::size_t>(c[3] + 1)) {
    throw InvalidArgument("povm_condition: weight length must match ancilla cutoffs");
  }
  const Index d_sig = (c[0] + 1) * (c[1] + 1);
  const Index d_anc = (c[2] + 1) * (c[3] + 1);
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> m(psi4.amplitudes().data(), d_sig, d_anc);

  std::vector<Index> cols;
  std::vector<double> scales;
  for (int n3 = 0; n3 <= c[2]; ++n3) {
    for (int n4 = 0; n4 <= c[3]; ++n4) {
      const double w = w3[static_cast<std::size_t>(n3)] * w4[static_cast<std::size_t>(n4)];
      if (w > 0.0) {
        cols.push_back(n3 * (c[3] + 1) + n4);
        scales.push_back(std::sqrt(w));
      }
    }
  }
  Eigen::MatrixXcd weighted(d_sig, idx(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) weighted.col(idx(k)) = m.col(cols[k]) * scales[k];
  FockDensity rho({c[0], c[1]}, weighted * weighted.adjoint());
  rho.leak = psi4.leak();
  const double p = rho.trace();
  if (!(p > 1e-300)) throw DegeneratePostselection("povm_condition: success probability vanishes");
  return {rho.normalized(), p};
}

Conditioned povm_condition(const FockDensity& rho4, const std::vector<double>& w3, const std::vector<double>& w4) {
  if (rho4.n_modes() != 4) throw InvalidArgument("povm_condition: need a four-mode density operator");
  const auto& c = rho4.cutoffs();
  if (w3.size() != static_cast<std::size_t>(c[2] + 1) || w4.size() != static_cast<std::size_t>(c[3] + 1)) {
    throw InvalidArgument("povm_condition: weight length must match ancilla cutoffs");
  }
  const Index d_sig = (c[0] + 1) * (c[1] + 1);
  const Index d_anc = (c[2] + 1) * (c[3] + 1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d_sig, d_sig);
  for (int n3 = 0; n3 <= c[2]; ++n3) {
    for (int n4 = 0; n4 <= c[3]; ++n4) {
      const double w = w3[static_cast<std::size_t>(n3)] * w4[static_cast<std::size_t>(n4)];
      if (w == 0.0) continue;
      const Index a = n3 * (c[3] + 1) + n4;
      for (Index row = 0; row < d_sig; ++row) {
        for (Index col = 0; col < d_sig; ++col) out(row, col) += w * rho4.matrix()(row * d_anc + a, col * d_anc + a);
      }
    }
  }
  FockDensity rho({c[0], c[1]}, std::move(out));
  rho.leak = rho4.leak;
  const double p = rho.trace();
  if (!(p > 1e-300)) throw DegeneratePostselection("povm_condition: success probability vanishes");
  return {rho.normalized(), p};
}

Conditioned povm_condition_on_off(const FockTensor& psi4, double eta3, double eta4) {
  return povm_condition(psi4, on_povm_weights(eta3, psi4.cutoffs()[2]), on_povm_weights(eta4, psi4.cutoffs()[3]));
}

Eigen::MatrixXcd displacement_matrix(cplx alpha, int cutoff) {
  if (cutoff < 0) throw InvalidArgument("displacement_matrix: cutoff must be >= 0");
  const double x = std::norm(alpha);
  const double damp = std::exp(-0.5 * x);
  Eigen::MatrixXcd d(cutoff + 1, cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) {
    for (int n = 0; n <= cutoff; ++n) {
      const int lo = std::min(m, n);
      const int k = std::abs(m - n);
      const double ratio = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)));
      const cplx base = m >= n ? alpha : -std::conj(alpha);
      d(m, n) = ratio * int_pow(base, k) * damp *
                std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(k), x);
    }
  }
  return d;
}

cplx char_function(const FockDensity& rho, cplx beta) {
  if (rho.n_modes() != 1) throw InvalidArgument("char_function: expected a one-mode density operator");
  const Eigen::MatrixXcd d = displacement_matrix(beta, rho.cutoffs()[0]);
  return (rho.matrix() * d).trace();
}

cplx char_function(const FockDensity& rho, cplx beta1, cplx beta2) {
  if (rho.n_modes() != 2) throw InvalidArgument("char_function: expected a two-mode density operator");
  const int c1 = rho.cutoffs()[0];
  const int c2 = rho.cutoffs()[1];
  const Eigen::MatrixXcd d1 = displacement_matrix(beta1, c1);
  const Eigen::MatrixXcd d2 = displacement_matrix(beta2, c2);
  const Index d2n = c2 + 1;
  const Eigen::MatrixXcd& m = rho.matrix();
  // Tr[rho D1 (x) D2] = sum rho[(m1 m2),(n1 n2)] D1[n1,m1] D2[n2,m2].
  cplx chi = 0.0;
  for (int m1 = 0; m1 <= c1; ++m1) {
    for (int n1 = 0; n1 <= c1; ++n1) {
      const cplx f = d1(n1, m1);
      if (f == 0.0) continue;
      const auto block = m.block(m1 * d2n, n1 * d2n, d2n, d2n);
      chi += f * (block.array() * d2.transpose().array()).sum();
    }
  }
  return chi;
}

}  // namespace nongauss::fock

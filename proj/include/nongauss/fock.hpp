#pragma once

// Truncated Fock-space simulation. This is the brute-force reference used to
// validate the phase-space pipeline on small instances; it shares no code
// with gauss_poly/symplectic/conditioning.

#include "nongauss/gauss_poly.hpp"
#include "nongauss/symplectic.hpp"

#include <Eigen/Dense>

#include <vector>

namespace nongauss::fock {

// Pure state on several bosonic modes. cutoffs are inclusive photon numbers;
// storage is row-major with mode 0 slowest.
class FockTensor {
 public:
  explicit FockTensor(std::vector<int> cutoffs);
  static FockTensor vacuum(std::vector<int> cutoffs);
  static FockTensor basis(std::vector<int> cutoffs, const std::vector<int>& occupation);

  const std::vector<int>& cutoffs() const { return cutoffs_; }
  std::size_t n_modes() const { return cutoffs_.size(); }
  std::size_t size() const { return amps_.size(); }
  std::size_t stride(std::size_t mode) const { return strides_[mode]; }
  std::size_t index(const std::vector<int>& occupation) const;

  cplx operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  cplx amplitude(const std::vector<int>& occupation) const { return amps_[index(occupation)]; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  std::vector<cplx>& amplitudes() { return amps_; }

  double norm2() const;
  // Total weight pushed past the truncation by the operations applied so far.
  double leak() const { return leak_; }
  void add_leak(double d) { leak_ += d; }

 private:
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::vector<cplx> amps_;
  double leak_{0.0};
};

// Density operator on the product Fock basis (same index layout as FockTensor).
class FockDensity {
 public:
  FockDensity(std::vector<int> cutoffs, Eigen::MatrixXcd matrix);
  static FockDensity from_pure(const FockTensor& psi);

  const std::vector<int>& cutoffs() const { return cutoffs_; }
  std::size_t n_modes() const { return cutoffs_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  double trace() const { return matrix_.trace().real(); }
  FockDensity normalized() const;
  // Hermitian to 1e-10, min eigenvalue >= -1e-9 (relative to the trace).
  bool is_physical() const;

  double leak{0.0};

 private:
  std::vector<int> cutoffs_;
  Eigen::MatrixXcd matrix_;
};

// exp(M) by scaling, Taylor series and repeated squaring.
Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& m);

// S_ij(zeta) = exp(-zeta a_i^dag a_j^dag + zeta^* a_i a_j). Throws
// CutoffTooSmall if the weight lost past the truncation exceeds tol.
FockTensor apply_two_mode_squeeze(const FockTensor& state, std::pair<std::size_t, std::size_t> modes,
                                  const SqueezeParam& p, double tol = 1e-8);

// U_ij = exp(kappa (a_i^dag a_j - a_i a_j^dag)), tan kappa = sqrt((1-T)/T).
FockTensor apply_beam_splitter(const FockTensor& state, std::pair<std::size_t, std::size_t> modes, double T);

// a or a^dag on one mode; amplitude pushed past the cutoff is counted as leak.
FockTensor apply_ladder(const FockTensor& state, std::size_t mode, bool dagger);

FockTensor add(const FockTensor& a, const FockTensor& b, cplx ca = 1.0, cplx cb = 1.0);

// Amplitude-damping channel via its Kraus operators.
FockDensity loss_kraus(const FockDensity& rho, std::size_t mode, double T_loss);
// Same channel via a vacuum ancilla, a beam splitter and a partial trace.
FockDensity loss_via_ancilla(const FockTensor& psi, std::size_t mode, double T_loss);

// Traces out the last mode of a pure state.
FockDensity trace_out_last(const FockTensor& psi);

struct Projection {
  FockTensor state;  // unnormalized two-mode state on modes 0,1
  double norm2;      // success probability
};

// Contracts modes 2,3 of a four-mode state against |1,1>.
Projection project_single_photon(const FockTensor& psi4);

// Diagonal POVM element on one mode, weights[n] = <n|Pi|n>.
std::vector<double> on_povm_weights(double eta, int cutoff);
std::vector<double> single_photon_weights(int cutoff);
// Heisenberg-picture image of a diagonal POVM under loss T: sum_k K_k^dag Pi K_k.
std::vector<double> lossy_povm_weights(const std::vector<double>& weights, double T_loss);

struct Conditioned {
  FockDensity rho;      // normalized two-mode state
  double success_prob;
};

// Applies diagonal POVM weights on modes 2,3 of a pure four-mode state and
// traces them out.
Conditioned povm_condition(const FockTensor& psi4, const std::vector<double>& w3, const std::vector<double>& w4);
// Same, on an explicit four-mode density operator (small cutoffs only).
Conditioned povm_condition(const FockDensity& rho4, const std::vector<double>& w3, const std::vector<double>& w4);
Conditioned povm_condition_on_off(const FockTensor& psi4, double eta3, double eta4);

// <m|D(alpha)|n>, D(alpha) = exp(alpha a^dag - alpha^* a), via associated Laguerre polynomials.
Eigen::MatrixXcd displacement_matrix(cplx alpha, int cutoff);

// Tr[rho D(beta)] for one mode; Tr[rho D_1(beta_1) D_2(beta_2)] for two.
cplx char_function(const FockDensity& rho, cplx beta);
cplx char_function(const FockDensity& rho, cplx beta1, cplx beta2);

}  // namespace nongauss::fock

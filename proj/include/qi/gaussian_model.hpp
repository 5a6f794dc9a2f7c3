#pragma once

// Two-mode Gaussian source, the return/idler states under each hypothesis,
// and Gaussian added-noise variants.
//
// Noise amplitudes are expressed in "nu units": eps adds eps/2 to each
// quadrature variance of the affected mode, i.e. omega -> omega + eps.

#include <utility>

#include "qi/symplectic.hpp"

namespace qi {

enum class Hypothesis { kTargetAbsent, kTargetPresent };  // H0, H1

struct SourceParams {
  double n_signal = 0.0;  // N_S
  double n_idler = 0.0;   // N_I
  double corr = 0.0;      // c

  double nu() const noexcept { return 2.0 * n_signal + 1.0; }
  double mu() const noexcept { return 2.0 * n_idler + 1.0; }

  // 0 <= c <= 2 sqrt(N_S (N_I + 1)) and c <= 2 sqrt(N_I (N_S + 1)) (the CM is
  // physical); throws InvalidArgument otherwise.
  void validate() const;
};

struct ChannelParams {
  double reflectivity = 0.0;  // kappa
  double n_background = 0.0;  // N_B

  double omega() const noexcept { return 2.0 * n_background + 1.0; }
  // gamma = 2 kappa N_S + omega
  double gamma(double n_signal) const noexcept { return 2.0 * reflectivity * n_signal + omega(); }

  void validate() const;
};

struct NoiseParams {
  double eps_return = 0.0;  // eps_R
  double eps_idler = 0.0;   // eps_I

  void validate() const;
};

struct GaussianState {
  Vector mean;
  CovMatrix cov;

  GaussianState(Vector mean_in, CovMatrix cov_in);
  static GaussianState zero_mean(CovMatrix cov_in);

  int n_modes() const noexcept { return cov.n_modes(); }
};

// (H0 state, H1 state)
using StatePair = std::pair<GaussianState, GaussianState>;

// Maximal (TMSV) correlation 2 sqrt(N_S (N_I + 1)).
double c_quantum(const SourceParams& src);
// Separability threshold 2 sqrt(N_S N_I).
double c_direct(const SourceParams& src);

// Source CM (1/2) [[nu 1, c Z], [c Z, mu 1]] in (q_S, p_S, q_I, p_I) order.
CovMatrix source_cm(const SourceParams& src);

// Return/idler states under H0 and H1 (modes ordered return, idler).
StatePair conditional_states(const SourceParams& src, const ChannelParams& ch);

// Adds eps_R/2 to the return-mode diagonal and eps_I/2 to the idler diagonal
// of both states.
StatePair apply_noise(const StatePair& states, const NoiseParams& noise);

// Single-mode coherent-state benchmark: H0 thermal (omega/2) 1, H1 the same
// CM displaced to (sqrt(2 kappa N_S), 0).
StatePair coherent_benchmark_states(double n_signal, const ChannelParams& ch);

}  // namespace qi

#pragma once

// Chernoff-type bounds on the error of discriminating two hypotheses:
// quantum Chernoff / Bhattacharyya bounds for multimode Gaussian states, the
// coherent-state closed form, and the classical Chernoff bound on heterodyne
// outcome distributions.

#include "qi/gaussian_model.hpp"

namespace qi {

struct SOverlapResult {
  double s_star = 0.5;
  double c_at_s_star = 1.0;  // C_{s*} (per copy)
  double log_c_at_s_star = 0.0;
  double bound = 0.5;        // min_s pi0^s pi1^(1-s) C_s^M
  double log_bound = 0.0;
  double prior_h0 = 0.5;

  // Per-copy Chernoff exponent -ln C_{s*}.
  double exponent() const;
};

// Tr[rho0^s rho1^(1-s)] for Gaussian states, in log form and plain form.
// Throws InvalidArgument for s outside [0, 1], mismatched mode counts or
// unphysical CMs; NumericFailure if Sigma_s is numerically singular.
double log_gaussian_s_overlap(const GaussianState& state0, const GaussianState& state1, double s);
double gaussian_s_overlap(const GaussianState& state0, const GaussianState& state1, double s);

// Quantum Chernoff bound over `copies` i.i.d. copies with prior P(H0) = prior_h0.
SOverlapResult qcb(const GaussianState& state0, const GaussianState& state1, double prior_h0 = 0.5,
                   long long copies = 1);

// (1/2) Tr[sqrt(rho0) sqrt(rho1)]
double qbb(const GaussianState& state0, const GaussianState& state1);

// (1/2) exp(-M kappa N_S (sqrt(N_B + 1) - sqrt(N_B))^2), plain and log.
double cs_qcb_closed(double n_signal, const ChannelParams& ch, long long m);
double log_cs_qcb_closed(double n_signal, const ChannelParams& ch, long long m);
// Per-mode exponent kappa N_S (sqrt(N_B + 1) - sqrt(N_B))^2.
double cs_qcb_exponent(double n_signal, const ChannelParams& ch);

struct ClassicalDistributionPair {
  Matrix cov_h0;
  Matrix cov_h1;
  Vector mean_h0;
  Vector mean_h1;
};

// Heterodyne outcome densities (Husimi functions): covariance V + (1/2) 1.
ClassicalDistributionPair heterodyne_distributions(const GaussianState& state0,
                                                   const GaussianState& state1);

// int p0^s p1^(1-s) dx for two Gaussian densities.
double log_classical_s_overlap(const ClassicalDistributionPair& pair, double s);
double classical_s_overlap(const ClassicalDistributionPair& pair, double s);

// Classical Chernoff bound with equal priors; exponent() = -ln min_s C_s.
SOverlapResult ccb(const ClassicalDistributionPair& pair);

// Closed-form per-copy overlap xi = 4(1 + N_B) / (4 + 4 N_B + kappa N_S) of the
// heterodyne outcome distributions at s = 1/2 (p <= xi^M / 2). Kept as a
// cross-check; ccb() is authoritative.
double ccb_closed_xi(double n_signal, const ChannelParams& ch);
// -ln of the same expression, ln(1 + kappa N_S / (4 (1 + N_B))), without the
// cancellation of taking the log of a number near 1.
double ccb_closed_xi_exponent(double n_signal, const ChannelParams& ch);

}  // namespace qi

#pragma once

// Seeded Gaussian sampling of the receiver chain. Every sample draws its
// randomness from a counter-based generator keyed by (seed, stream, index),
// and partial sums are merged in index order, so results are bit-identical
// for any worker count.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qi/gaussian_model.hpp"
#include "qi/pc_receiver.hpp"

namespace qi {

struct SamplerConfig {
  std::uint64_t seed = 42;
  long long n_samples = 1'000'000;
  long long n_pulses_m = 1;
  int n_threads = 0;  // 0: hardware concurrency

  void validate() const;
};

// SplitMix64 stream whose starting point is a hash of (seed, stream, index).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t state_;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EmpiricalStats {
  Estimate mean_h0;
  Estimate mean_h1;
  Estimate var_h0;
  Estimate var_h1;
  Estimate snr_hat;
  // Second moments of the beamsplitter outputs, averaged over q and p.
  Estimate alpha_plus;
  Estimate alpha_minus;
  Estimate beta_plus;
  Estimate beta_minus;
  Estimate gamma_star;
  long long n_samples = 0;
};

// n_samples x 2N matrix of quadrature draws. Throws NumericFailure if the CM
// cannot be Cholesky-factored.
Matrix sample_quadratures(const GaussianState& state, const SamplerConfig& cfg);

// Samples return/idler quadratures under each hypothesis, adds a vacuum draw
// for the conjugation, applies Z and the 50-50 mix, and forms N+ - N- per
// sample (n_samples draws per hypothesis).
EmpiricalStats simulate_pc_receiver(const SourceParams& src, const ChannelParams& ch,
                                    const NoiseParams& noise, const SamplerConfig& cfg);

struct ErrorRateEstimate {
  double rate = 0.0;
  double std_error = 0.0;  // binomial
  double threshold = 0.0;
  long long trials_per_hypothesis = 0;
};

// Each trial averages N over m pulses and thresholds at the midpoint of the
// two analytic conditional means; returns the equal-prior misclassification
// rate over cfg.n_samples trials per hypothesis.
ErrorRateEstimate empirical_error_rate(const SourceParams& src, const ChannelParams& ch,
                                       const NoiseParams& noise, long long m,
                                       const SamplerConfig& cfg);

struct MomentCheck {
  std::string label;
  double expected = 0.0;
  Estimate estimate;
  bool passed = false;
};

struct MomentIdentityReport {
  std::vector<MomentCheck> checks;
  bool all_passed = false;
};

// Samples correlated Gaussian pairs over a grid of covariances and checks
// <x^4> = 3 sigma^4 and <x^2 y^2> = <x^2><y^2> + 2 <xy>^2 at 5 standard errors.
MomentIdentityReport check_gaussian_moment_identities(const SamplerConfig& cfg);

}  // namespace qi

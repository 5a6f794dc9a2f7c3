#pragma once

// Phase-conjugating (PC) receiver: conjugation, 50-50 mixing with the idler,
// photon-count difference N = N+ - N-, its conditional moments and SNR, and
// the coherent-state homodyne benchmark.

#include <string_view>

#include "qi/gaussian_model.hpp"
#include "qi/numerics.hpp"

namespace qi {

// Entries of the conditional CMs of the two beamsplitter output modes:
//   H0: [[a+ 1, a- 1], [a- 1, a+ 1]],  H1: [[b+ 1, g* 1], [g* 1, b- 1]].
struct BeamsplitterMoments {
  double alpha_plus = 0.0;   // (omega + 1 + mu) / 4
  double alpha_minus = 0.0;  // (omega + 1 - mu) / 4
  double beta_plus = 0.0;    // (gamma + 1 + mu + 2 sqrt(kappa) c) / 4
  double beta_minus = 0.0;   // (gamma + 1 + mu - 2 sqrt(kappa) c) / 4
  double gamma_star = 0.0;   // (gamma + 1 - mu) / 4
};

// Conditional statistics of N = N+ - N- for a single mode pair.
struct ReceiverStats {
  double mean_h0 = 0.0;
  double mean_h1 = 0.0;
  double var_h0 = 0.0;
  double var_h1 = 0.0;
  double snr = 0.0;
};

struct ErrorProbabilities {
  double p_false_alarm = 0.0;
  double p_missed_detection = 0.0;
  double p_error = 0.0;  // equal priors
};

enum class ReceiverConfig { kQiPc, kQiCalPc, kQiHetPc, kCsHom };

std::string_view to_string(ReceiverConfig config);

// Added-noise preset for a QI configuration: QI+PC (0, 0), QI+Cal+PC (1, 0),
// QI+Het+PC (1, 1). Heterodyne-equivalent noise is eps = 1.
NoiseParams noise_for(ReceiverConfig config);

// SNR = (<N1> - <N0>)^2 / (2 (sd1 + sd0)^2).
double snr_from_moments(double mean_h0, double mean_h1, double var_h0, double var_h1);

// X_PC = X_v + Z X_R on the return mode (vacuum adds 1/2 to each quadrature
// variance), idler untouched. Expects two-mode (return, idler) states.
StatePair pc_transform(const StatePair& states);

// Two-mode state of the 50-50 outputs X+- = (X_PC +- X_I) / sqrt(2).
GaussianState beamsplitter_outputs(const GaussianState& pc_state);

// Mean and variance of (q+^2 + p+^2 - q-^2 - p-^2) / 2 for a Gaussian
// (+, -) two-mode state, using Isserlis' theorem.
struct PhotonDifferenceMoments {
  double mean = 0.0;
  double variance = 0.0;
};
PhotonDifferenceMoments photon_difference_moments(const GaussianState& plus_minus);

// Conditional moments via the full Gaussian chain (states -> PC -> mixing).
ReceiverStats receiver_stats_from_states(const StatePair& return_idler_states);

// Conditional moments from the five scalar beamsplitter moments.
ReceiverStats receiver_stats_from_moments(const BeamsplitterMoments& m);

BeamsplitterMoments beamsplitter_moments(const SourceParams& src, const ChannelParams& ch,
                                         const NoiseParams& noise);

// Closed-form PC SNR kappa c^2 / (sqrt(kappa c^2 + mu'(1+gamma')) + sqrt(mu'(1+omega')))^2
// with mu' = mu + eps_I, omega' = omega + eps_R, gamma' = gamma + eps_R.
double snr_pc_closed_form(const SourceParams& src, const ChannelParams& ch, const NoiseParams& noise);

// Closed-form statistics: means 0 and sqrt(kappa) c, variances mu'(1+omega')/2
// and (kappa c^2 + mu'(1+gamma'))/2.
ReceiverStats snr_pc(const SourceParams& src, const ChannelParams& ch, const NoiseParams& noise);

// (1/2) erfc(sqrt(M SNR)) and its logarithm.
double error_prob_pc(const ReceiverStats& stats, long long m);
double log_error_prob_pc(const ReceiverStats& stats, long long m);

// Coherent-state homodyne with coherent integration over M pulses and
// decision threshold x.
ErrorProbabilities homodyne_errors(double n_signal, const ChannelParams& ch, long long m,
                                   double threshold);

struct HomodyneMinimum {
  double p_error = 0.0;            // (1/2) erfc(sqrt(M kappa N_S / (4 N_B + 2)))
  double log_p_error = 0.0;
  double threshold = 0.0;          // M sqrt(2 kappa N_S) / 2
  double numeric_p_error = 0.0;    // golden-section minimum of (fa + md) / 2
  double numeric_threshold = 0.0;
};

// Throws NumericFailure if the numeric threshold scan disagrees with the
// closed form by more than 1e-12.
HomodyneMinimum homodyne_min_error(double n_signal, const ChannelParams& ch, long long m);

// kappa N_S / (4 N_B + 2): the SNR for which (1/2) erfc(sqrt(M SNR)) is the
// optimal homodyne error.
double snr_cs_hom(double n_signal, const ChannelParams& ch);

// Leading-order large-N_B SNR: (1 + N_I) kappa N_S / (2 N_B (1 + 2 N_I)) for
// QI+PC and QI+Cal+PC, kappa N_S / (4 N_B) for QI+Het+PC and CS+Hom. QI
// configurations require c = c_q.
double asymptotic_snr(ReceiverConfig config, const SourceParams& src, const ChannelParams& ch);

}  // namespace qi

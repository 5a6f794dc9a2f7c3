#include "qi/pc_receiver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qi/errors.hpp"

namespace qi {

namespace {

void require_positive_uses(long long m) {
  if (m < 1) throw InvalidArgument("number of uses M must be >= 1");
}

void require_two_mode(const GaussianState& s, const char* op) {
  if (s.n_modes() != 2) {
    std::ostringstream msg;
    msg << op << ": expected a two-mode (return, idler) state, got " << s.n_modes() << " modes";
    throw InvalidArgument(msg.str());
  }
}

struct PrimedParams {
  double mu;
  double omega;
  double gamma;
  double kappa_c2;
};

PrimedParams primed(const SourceParams& src, const ChannelParams& ch, const NoiseParams& noise) {
  src.validate();
  ch.validate();
  noise.validate();
  return {src.mu() + noise.eps_idler, ch.omega() + noise.eps_return,
          ch.gamma(src.n_signal) + noise.eps_return, ch.reflectivity * src.corr * src.corr};
}

}  // namespace

std::string_view to_string(ReceiverConfig config) {
  switch (config) {
    case ReceiverConfig::kQiPc: return "QI+PC";
    case ReceiverConfig::kQiCalPc: return "QI+Cal+PC";
    case ReceiverConfig::kQiHetPc: return "QI+Het+PC";
    case ReceiverConfig::kCsHom: return "CS+Hom";
  }
  return "?";
}

NoiseParams noise_for(ReceiverConfig config) {
  switch (config) {
    case ReceiverConfig::kQiPc: return {0.0, 0.0};
    case ReceiverConfig::kQiCalPc: return {1.0, 0.0};
    case ReceiverConfig::kQiHetPc: return {1.0, 1.0};
    case ReceiverConfig::kCsHom: break;
  }
  throw InvalidArgument("noise_for: CS+Hom is not a PC configuration");
}

double snr_from_moments(double mean_h0, double mean_h1, double var_h0, double var_h1) {
  const double diff = mean_h1 - mean_h0;
  const double spread = std::sqrt(var_h1) + std::sqrt(var_h0);
  if (spread == 0.0) return 0.0;
  return diff * diff / (2.0 * spread * spread);
}

StatePair pc_transform(const StatePair& states) {
  auto conjugate = [](const GaussianState& s) {
    require_two_mode(s, "pc_transform");
    Matrix t = Matrix::Identity(4, 4);
    t(1, 1) = -1.0;  // Z on the return mode
    Matrix v = t * s.cov.matrix() * t.transpose();
    v(0, 0) += 0.5;
    v(1, 1) += 0.5;
    return GaussianState(t * s.mean, CovMatrix(std::move(v)));
  };
  return {conjugate(states.first), conjugate(states.second)};
}

GaussianState beamsplitter_outputs(const GaussianState& pc_state) {
  require_two_mode(pc_state, "beamsplitter_outputs");
  const double h = 1.0 / std::sqrt(2.0);
  Matrix b(4, 4);
  b << h, 0, h, 0,
       0, h, 0, h,
       h, 0, -h, 0,
       0, h, 0, -h;
  Matrix v = b * pc_state.cov.matrix() * b.transpose();
  v = 0.5 * (v + v.transpose());
  return GaussianState(b * pc_state.mean, CovMatrix(std::move(v)));
}

PhotonDifferenceMoments photon_difference_moments(const GaussianState& plus_minus) {
  require_two_mode(plus_minus, "photon_difference_moments");
  const Vector w = (Vector(4) << 1.0, 1.0, -1.0, -1.0).finished();
  const Matrix wc = w.asDiagonal() * plus_minus.cov.matrix();
  const Vector& m = plus_minus.mean;
  const Vector wm = w.asDiagonal() * m;
  // N+ - N- = x^T W x / 2; the -1/2 offsets of the two number operators cancel.
  PhotonDifferenceMoments out;
  out.mean = 0.5 * (wc.trace() + m.dot(wm));
  out.variance = 0.25 * (2.0 * (wc * wc).trace() + 4.0 * wm.dot(plus_minus.cov.matrix() * wm));
  return out;
}

ReceiverStats receiver_stats_from_states(const StatePair& return_idler_states) {
  const auto pc = pc_transform(return_idler_states);
  const auto h0 = photon_difference_moments(beamsplitter_outputs(pc.first));
  const auto h1 = photon_difference_moments(beamsplitter_outputs(pc.second));
  return {h0.mean, h1.mean, h0.variance, h1.variance,
          snr_from_moments(h0.mean, h1.mean, h0.variance, h1.variance)};
}

ReceiverStats receiver_stats_from_moments(const BeamsplitterMoments& m) {
  ReceiverStats s;
  s.mean_h0 = 0.0;  // alpha+ - alpha+
  s.mean_h1 = m.beta_plus - m.beta_minus;
  s.var_h0 = 2.0 * (m.alpha_plus * m.alpha_plus - m.alpha_minus * m.alpha_minus);
  s.var_h1 = m.beta_plus * m.beta_plus + m.beta_minus * m.beta_minus -
             2.0 * m.gamma_star * m.gamma_star;
  s.snr = snr_from_moments(s.mean_h0, s.mean_h1, s.var_h0, s.var_h1);
  return s;
}

BeamsplitterMoments beamsplitter_moments(const SourceParams& src, const ChannelParams& ch,
                                         const NoiseParams& noise) {
  const auto p = primed(src, ch, noise);
  const double cross = std::sqrt(ch.reflectivity) * src.corr;
  return {(p.omega + 1.0 + p.mu) / 4.0, (p.omega + 1.0 - p.mu) / 4.0,
          (p.gamma + 1.0 + p.mu + 2.0 * cross) / 4.0, (p.gamma + 1.0 + p.mu - 2.0 * cross) / 4.0,
          (p.gamma + 1.0 - p.mu) / 4.0};
}

double snr_pc_closed_form(const SourceParams& src, const ChannelParams& ch, const NoiseParams& noise) {
  const auto p = primed(src, ch, noise);
  const double denom =
      std::sqrt(p.kappa_c2 + p.mu * (1.0 + p.gamma)) + std::sqrt(p.mu * (1.0 + p.omega));
  return p.kappa_c2 / (denom * denom);
}

ReceiverStats snr_pc(const SourceParams& src, const ChannelParams& ch, const NoiseParams& noise) {
  const auto p = primed(src, ch, noise);
  ReceiverStats s;
  s.mean_h0 = 0.0;
  s.mean_h1 = std::sqrt(ch.reflectivity) * src.corr;
  s.var_h0 = 0.5 * p.mu * (1.0 + p.omega);
  s.var_h1 = 0.5 * (p.kappa_c2 + p.mu * (1.0 + p.gamma));
  s.snr = snr_pc_closed_form(src, ch, noise);
  return s;
}

double error_prob_pc(const ReceiverStats& stats, long long m) {
  require_positive_uses(m);
  return 0.5 * qi::erfc(std::sqrt(static_cast<double>(m) * stats.snr));
}

double log_error_prob_pc(const ReceiverStats& stats, long long m) {
  require_positive_uses(m);
  return log_half_erfc_sqrt(static_cast<double>(m) * stats.snr);
}

ErrorProbabilities homodyne_errors(double n_signal, const ChannelParams& ch, long long m,
                                   double threshold) {
  require_positive_uses(m);
  ch.validate();
  if (!(n_signal >= 0.0)) throw InvalidArgument("N_S must be >= 0");
  const double md = static_cast<double>(m);
  const double width = std::sqrt(md * ch.omega());
  const double signal = md * std::sqrt(2.0 * ch.reflectivity * n_signal);
  ErrorProbabilities e;
  e.p_false_alarm = 0.5 * qi::erfc(threshold / width);
  e.p_missed_detection = 0.5 * qi::erfc((signal - threshold) / width);
  e.p_error = 0.5 * (e.p_false_alarm + e.p_missed_detection);
  return e;
}

HomodyneMinimum homodyne_min_error(double n_signal, const ChannelParams& ch, long long m) {
  require_positive_uses(m);
  ch.validate();
  if (!(n_signal >= 0.0)) throw InvalidArgument("N_S must be >= 0");
  const double md = static_cast<double>(m);
  const double snr = snr_cs_hom(n_signal, ch);
  HomodyneMinimum out;
  out.log_p_error = log_half_erfc_sqrt(md * snr);
  out.p_error = std::exp(out.log_p_error);
  out.threshold = 0.5 * md * std::sqrt(2.0 * ch.reflectivity * n_signal);

  const double hi = 2.0 * out.threshold;
  const auto numeric = golden_section_minimize(
      [&](double x) { return homodyne_errors(n_signal, ch, m, x).p_error; }, 0.0, hi,
      1e-10 * std::max(hi, 1e-300));
  out.numeric_threshold = numeric.x;
  out.numeric_p_error = numeric.value;
  const double gap = std::abs(out.numeric_p_error - out.p_error);
  if (gap > 1e-12) {
    throw NumericFailure("homodyne_min_error: threshold scan disagrees with closed form", gap);
  }
  return out;
}

double snr_cs_hom(double n_signal, const ChannelParams& ch) {
  ch.validate();
  return ch.reflectivity * n_signal / (4.0 * ch.n_background + 2.0);
}

double asymptotic_snr(ReceiverConfig config, const SourceParams& src, const ChannelParams& ch) {
  src.validate();
  ch.validate();
  if (!(ch.n_background > 0.0)) {
    throw InvalidArgument("asymptotic_snr: large-N_B expansion requires N_B > 0");
  }
  if (config != ReceiverConfig::kCsHom) {
    const double cq = c_quantum(src);
    if (std::abs(src.corr - cq) > 1e-12 * std::max(1.0, cq)) {
      throw InvalidArgument("asymptotic_snr: " + std::string(to_string(config)) +
                            " expansion assumes c = c_q = 2*sqrt(N_S*(N_I+1))");
    }
  }
  const double kappa_ns = ch.reflectivity * src.n_signal;
  switch (config) {
    case ReceiverConfig::kQiPc:
    case ReceiverConfig::kQiCalPc:
      return (1.0 + src.n_idler) * kappa_ns / (2.0 * ch.n_background * (1.0 + 2.0 * src.n_idler));
    case ReceiverConfig::kQiHetPc:
    case ReceiverConfig::kCsHom:
      return kappa_ns / (4.0 * ch.n_background);
  }
  return 0.0;
}

}  // namespace qi

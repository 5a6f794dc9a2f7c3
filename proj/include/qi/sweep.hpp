#pragma once

// Receiver comparison sweeps over the number of uses M, producing plot-ready
// CSV rows.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qi/gaussian_model.hpp"

namespace qi {

enum class CorrelationMode { kQuantum, kDirect, kExplicit };

// One full experiment configuration. The correlation is either c_q, c_d or
// an explicit value.
struct ScenarioParams {
  double n_signal = 0.01;
  double n_idler = 0.01;
  CorrelationMode c_mode = CorrelationMode::kQuantum;
  double c_value = 0.0;  // used when c_mode == kExplicit
  double kappa = 0.01;
  double n_background = 20.0;
  double eps_return = 0.0;
  double eps_idler = 0.0;

  double resolved_corr() const;
  SourceParams source() const;
  ChannelParams channel() const;
  NoiseParams noise() const;
  void validate() const;
};

std::string_view to_string(CorrelationMode mode);

enum class Receiver { kQiPc, kQiCalPc, kQiHetPc, kQiHetCcb, kCsQcb, kCsHom, kQiQcb, kQiQbb };

std::string_view to_string(Receiver r);
std::optional<Receiver> parse_receiver(std::string_view label);
// QI+PC, QI+Cal+PC, QI+Het+PC, QI+Het+CCB, CS-QCB, CS+Hom.
std::vector<Receiver> comparison_receivers();
std::vector<Receiver> all_receivers();

enum class RateKind { kSnr, kChernoff };
std::string_view to_string(RateKind kind);

struct SweepSpec {
  ScenarioParams scenario;
  std::vector<long long> m_values;
  std::vector<Receiver> receivers;

  // m_values strictly increasing and >= 1; receivers non-empty.
  void validate() const;
};

struct SweepRow {
  Receiver receiver = Receiver::kQiPc;
  long long m = 1;
  double p_error = 0.5;
  double exponent = 0.0;  // -ln p_error
  double per_mode_rate = 0.0;
  RateKind rate_kind = RateKind::kSnr;
};

// Per-mode rate of a receiver: SNR for erfc-type receivers, Chernoff
// exponent for bound-type ones. Heterodyne-equivalent noise (eps = 1) is
// added on top of the scenario's own eps for the Cal/Het variants.
struct ReceiverRate {
  double per_mode_rate = 0.0;
  RateKind kind = RateKind::kSnr;
};
ReceiverRate receiver_rate(Receiver r, const ScenarioParams& scenario);

// ln p_error after m uses for a receiver with the given per-mode rate.
double log_error_probability(Receiver r, const ReceiverRate& rate, const ScenarioParams& scenario,
                             long long m);

// Rows ordered by receiver (as given) then M ascending. Receivers are
// evaluated concurrently.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// round(10^x) for `count` exponents evenly spaced over [start, stop], with
// duplicates removed.
std::vector<long long> log_spaced_uses(double start_exponent, double stop_exponent, int count);

// 17 significant digits, lowercase exponent: "%.16e".
std::string format_double(double x);

inline constexpr std::string_view kSweepCsvHeader =
    "receiver,M,p_error,exponent,per_mode_rate,rate_kind";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace qi

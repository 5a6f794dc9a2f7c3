#include "qi/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qi/bounds.hpp"
#include "qi/errors.hpp"
#include "qi/pc_receiver.hpp"

namespace qi {

namespace {

struct ReceiverLabel {
  Receiver receiver;
  std::string_view label;
};

constexpr ReceiverLabel kLabels[] = {
    {Receiver::kQiPc, "QI+PC"},       {Receiver::kQiCalPc, "QI+Cal+PC"},
    {Receiver::kQiHetPc, "QI+Het+PC"}, {Receiver::kQiHetCcb, "QI+Het+CCB"},
    {Receiver::kCsQcb, "CS-QCB"},     {Receiver::kCsHom, "CS+Hom"},
    {Receiver::kQiQcb, "QI-QCB"},     {Receiver::kQiQbb, "QI-QBB"},
};

NoiseParams with_extra(const NoiseParams& base, double extra_return, double extra_idler) {
  return {base.eps_return + extra_return, base.eps_idler + extra_idler};
}

StatePair scenario_states(const ScenarioParams& s) {
  return apply_noise(conditional_states(s.source(), s.channel()), s.noise());
}

}  // namespace

double ScenarioParams::resolved_corr() const {
  SourceParams src{n_signal, n_idler, 0.0};
  switch (c_mode) {
    case CorrelationMode::kQuantum: return c_quantum(src);
    case CorrelationMode::kDirect: return c_direct(src);
    case CorrelationMode::kExplicit: return c_value;
  }
  return c_value;
}

SourceParams ScenarioParams::source() const { return {n_signal, n_idler, resolved_corr()}; }
ChannelParams ScenarioParams::channel() const { return {kappa, n_background}; }
NoiseParams ScenarioParams::noise() const { return {eps_return, eps_idler}; }

void ScenarioParams::validate() const {
  source().validate();
  channel().validate();
  noise().validate();
}

std::string_view to_string(CorrelationMode mode) {
  switch (mode) {
    case CorrelationMode::kQuantum: return "quantum";
    case CorrelationMode::kDirect: return "direct";
    case CorrelationMode::kExplicit: return "explicit";
  }
  return "?";
}

std::string_view to_string(Receiver r) {
  for (const auto& entry : kLabels) {
    if (entry.receiver == r) return entry.label;
  }
  return "?";
}

std::optional<Receiver> parse_receiver(std::string_view label) {
  for (const auto& entry : kLabels) {
    if (entry.label == label) return entry.receiver;
  }
  return std::nullopt;
}

std::vector<Receiver> comparison_receivers() {
  return {Receiver::kQiPc,     Receiver::kQiCalPc, Receiver::kQiHetPc,
          Receiver::kQiHetCcb, Receiver::kCsQcb,   Receiver::kCsHom};
}

std::vector<Receiver> all_receivers() {
  std::vector<Receiver> out;
  for (const auto& entry : kLabels) out.push_back(entry.receiver);
  return out;
}

std::string_view to_string(RateKind kind) {
  return kind == RateKind::kSnr ? "snr" : "chernoff";
}

void SweepSpec::validate() const {
  scenario.validate();
  if (receivers.empty()) throw InvalidArgument("sweep: receiver set must be non-empty");
  if (m_values.empty()) throw InvalidArgument("sweep: at least one M value is required");
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] < 1) throw InvalidArgument("sweep: M values must be >= 1");
    if (i > 0 && m_values[i] <= m_values[i - 1]) {
      throw InvalidArgument("sweep: M values must be strictly increasing");
    }
  }
}

namespace {

// min_s C_s <= 1 always (C_0 = C_1 = 1); only rounding can push the
// exponent below zero.
ReceiverRate chernoff_rate(double exponent) { return {std::max(exponent, 0.0), RateKind::kChernoff}; }

}  // namespace

ReceiverRate receiver_rate(Receiver r, const ScenarioParams& s) {
  const auto src = s.source();
  const auto ch = s.channel();
  const auto noise = s.noise();
  switch (r) {
    case Receiver::kQiPc: return {snr_pc_closed_form(src, ch, noise), RateKind::kSnr};
    case Receiver::kQiCalPc:
      return {snr_pc_closed_form(src, ch, with_extra(noise, 1.0, 0.0)), RateKind::kSnr};
    case Receiver::kQiHetPc:
      return {snr_pc_closed_form(src, ch, with_extra(noise, 1.0, 1.0)), RateKind::kSnr};
    case Receiver::kCsHom: return {snr_cs_hom(s.n_signal, ch), RateKind::kSnr};
    case Receiver::kCsQcb: return chernoff_rate(cs_qcb_exponent(s.n_signal, ch));
    case Receiver::kQiHetCcb: {
      const auto states = scenario_states(s);
      return chernoff_rate(ccb(heterodyne_distributions(states.first, states.second)).exponent());
    }
    case Receiver::kQiQcb: {
      const auto states = scenario_states(s);
      return chernoff_rate(qcb(states.first, states.second).exponent());
    }
    case Receiver::kQiQbb: {
      const auto states = scenario_states(s);
      return chernoff_rate(-log_gaussian_s_overlap(states.first, states.second, 0.5));
    }
  }
  throw InvalidArgument("unknown receiver");
}

double log_error_probability(Receiver r, const ReceiverRate& rate, const ScenarioParams& s,
                             long long m) {
  if (m < 1) throw InvalidArgument("number of uses M must be >= 1");
  if (r == Receiver::kCsHom) return homodyne_min_error(s.n_signal, s.channel(), m).log_p_error;
  if (rate.kind == RateKind::kSnr) {
    return log_half_erfc_sqrt(static_cast<double>(m) * rate.per_mode_rate);
  }
  // Chernoff-type: (1/2) C_{s*}^M with equal priors.
  return -std::numbers::ln2 - static_cast<double>(m) * rate.per_mode_rate;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::future<std::vector<SweepRow>>> jobs;
  jobs.reserve(spec.receivers.size());
  for (Receiver r : spec.receivers) {
    jobs.push_back(std::async(std::launch::async, [&spec, r] {
      const auto rate = receiver_rate(r, spec.scenario);
      std::vector<SweepRow> rows;
      rows.reserve(spec.m_values.size());
      for (long long m : spec.m_values) {
        const double log_p = log_error_probability(r, rate, spec.scenario, m);
        rows.push_back({r, m, std::exp(log_p), -log_p, rate.per_mode_rate, rate.kind});
      }
      return rows;
    }));
  }
  std::vector<SweepRow> rows;
  for (auto& job : jobs) {
    auto part = job.get();
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::vector<long long> log_spaced_uses(double start_exponent, double stop_exponent, int count) {
  if (count < 1) throw InvalidArgument("log-spaced M grid needs count >= 1");
  if (!(stop_exponent >= start_exponent) || start_exponent < 0.0 || stop_exponent > 18.0) {
    throw InvalidArgument("log-spaced M grid needs 0 <= start <= stop <= 18");
  }
  std::vector<long long> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const double e = start_exponent + t * (stop_exponent - start_exponent);
    const auto m = static_cast<long long>(std::llround(std::pow(10.0, e)));
    if (out.empty() || m > out.back()) out.push_back(m);
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x + 0.0);  // -0 prints as 0
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : rows) {
    out << to_string(row.receiver) << ',' << row.m << ',' << format_double(row.p_error) << ','
        << format_double(row.exponent) << ',' << format_double(row.per_mode_rate) << ','
        << to_string(row.rate_kind) << '\n';
  }
}

}  // namespace qi

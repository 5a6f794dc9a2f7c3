#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qi/bounds.hpp"
#include "qi/errors.hpp"
#include "qi/montecarlo.hpp"
#include "qi/pc_receiver.hpp"
#include "qi/sweep.hpp"

namespace qi::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kMcGateSigmas = 5.0;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fully resolved run settings: defaults, then config file, then flags.
struct Settings {
  ScenarioParams scenario;
  ReceiverConfig receiver = ReceiverConfig::kQiPc;
  std::vector<Receiver> receivers = comparison_receivers();
  std::vector<long long> m_values = log_spaced_uses(0.0, 8.0, 17);
  long long m = 1;
  double prior_h0 = 0.5;
  std::uint64_t seed = 42;
  long long samples = 1'000'000;
  int threads = 0;
};

// ---------------------------------------------------------------- parsing

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidArgument(what + ": expected a number, got '" + text + "'");
  }
  return v;
}

void set_correlation(ScenarioParams& s, const std::string& text) {
  if (text == "quantum") {
    s.c_mode = CorrelationMode::kQuantum;
  } else if (text == "direct") {
    s.c_mode = CorrelationMode::kDirect;
  } else {
    s.c_mode = CorrelationMode::kExplicit;
    s.c_value = parse_number(text, "c");
  }
}

ReceiverConfig parse_pc_receiver(const std::string& label) {
  for (auto cfg : {ReceiverConfig::kQiPc, ReceiverConfig::kQiCalPc, ReceiverConfig::kQiHetPc}) {
    if (to_string(cfg) == label) return cfg;
  }
  throw InvalidArgument("receiver must be one of QI+PC, QI+Cal+PC, QI+Het+PC (got '" + label + "')");
}

std::vector<Receiver> parse_receivers(const std::vector<std::string>& labels) {
  std::vector<Receiver> out;
  for (const auto& label : labels) {
    auto r = parse_receiver(label);
    if (!r) {
      std::string known;
      for (auto k : all_receivers()) known += (known.empty() ? "" : ", ") + std::string(to_string(k));
      throw InvalidArgument("unknown receiver '" + label + "' (known: " + known + ")");
    }
    if (std::find(out.begin(), out.end(), *r) != out.end()) {
      throw InvalidArgument("receiver '" + label + "' listed twice");
    }
    out.push_back(*r);
  }
  return out;
}

std::vector<long long> parse_m_log(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw InvalidArgument("m-log expects START:STOP:COUNT (got '" + text + "')");
  const double count = parse_number(parts[2], "m-log count");
  if (count != std::floor(count) || count < 1 || count > 1e6) {
    throw InvalidArgument("m-log count must be a positive integer");
  }
  return log_spaced_uses(parse_number(parts[0], "m-log start"), parse_number(parts[1], "m-log stop"),
                         static_cast<int>(count));
}

long long json_count(const Json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float() && v.get<double>() == std::floor(v.get<double>())) {
    return static_cast<long long>(v.get<double>());
  }
  throw InvalidArgument("config key '" + key + "' must be an integer");
}

double json_number(const Json& v, const std::string& key) {
  if (!v.is_number()) throw InvalidArgument("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::string json_string(const Json& v, const std::string& key) {
  if (!v.is_string()) throw InvalidArgument("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

void apply_config(const Json& cfg, Settings& st) {
  if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");
  for (const auto& [key, v] : cfg.items()) {
    if (key == "n_signal") st.scenario.n_signal = json_number(v, key);
    else if (key == "n_idler") st.scenario.n_idler = json_number(v, key);
    else if (key == "c") {
      if (v.is_string()) {
        set_correlation(st.scenario, v.get<std::string>());
      } else {
        st.scenario.c_mode = CorrelationMode::kExplicit;
        st.scenario.c_value = json_number(v, key);
      }
    }
    else if (key == "kappa") st.scenario.kappa = json_number(v, key);
    else if (key == "n_background") st.scenario.n_background = json_number(v, key);
    else if (key == "eps_return") st.scenario.eps_return = json_number(v, key);
    else if (key == "eps_idler") st.scenario.eps_idler = json_number(v, key);
    else if (key == "receiver") st.receiver = parse_pc_receiver(json_string(v, key));
    else if (key == "receivers") {
      if (!v.is_array()) throw InvalidArgument("config key 'receivers' must be an array");
      std::vector<std::string> labels;
      for (const auto& e : v) labels.push_back(json_string(e, key));
      st.receivers = parse_receivers(labels);
    } else if (key == "m_values") {
      if (!v.is_array()) throw InvalidArgument("config key 'm_values' must be an array");
      st.m_values.clear();
      for (const auto& e : v) st.m_values.push_back(json_count(e, key));
    } else if (key == "m_log") {
      if (!v.is_object() || !v.contains("start") || !v.contains("stop") || !v.contains("count")) {
        throw InvalidArgument("config key 'm_log' needs start, stop and count");
      }
      st.m_values = log_spaced_uses(json_number(v["start"], "m_log.start"),
                                    json_number(v["stop"], "m_log.stop"),
                                    static_cast<int>(json_count(v["count"], "m_log.count")));
    } else if (key == "m") st.m = json_count(v, key);
    else if (key == "prior_h0") st.prior_h0 = json_number(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned()) throw InvalidArgument("config key 'seed' must be a non-negative integer");
      st.seed = v.get<std::uint64_t>();
    } else if (key == "samples") st.samples = json_count(v, key);
    else if (key == "threads") st.threads = static_cast<int>(json_count(v, key));
    else throw InvalidArgument("unknown config key '" + key + "'");
  }
}

Json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------- reports

struct Report {
  Json params = Json::object();
  Json results = Json::array();
  std::vector<std::string> notes;
  bool tabular = false;  // render results as one aligned row each
};

std::string text_value(const Json& v) {
  if (v.is_null()) return "n/a";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + text_value(e);
    return s;
  }
  return v.dump();
}

void render_text(const Report& rep, std::ostream& os) {
  for (const auto& [key, v] : rep.params.items()) os << "# " << key << " = " << text_value(v) << '\n';
  if (rep.tabular && !rep.results.empty()) {
    std::vector<std::string> keys;
    for (const auto& [key, v] : rep.results.front().items()) keys.push_back(key);
    std::vector<std::vector<std::string>> cells{keys};
    for (const auto& row : rep.results) {
      std::vector<std::string> line;
      for (const auto& key : keys) line.push_back(row.contains(key) ? text_value(row[key]) : "");
      cells.push_back(line);
    }
    std::vector<std::size_t> width(keys.size(), 0);
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    }
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        os << line[i];
        if (i + 1 < line.size()) os << std::string(width[i] - line[i].size() + 2, ' ');
      }
      os << '\n';
    }
  } else {
    for (const auto& result : rep.results) {
      os << '[' << text_value(result.value("name", Json("result"))) << "]\n";
      for (const auto& [key, v] : result.items()) {
        if (key != "name") os << key << " = " << text_value(v) << '\n';
      }
    }
  }
  for (const auto& note : rep.notes) os << "note: " << note << '\n';
}

void render_json(const Report& rep, std::ostream& os) {
  Json doc = Json::object();
  doc["params"] = rep.params;
  doc["results"] = rep.results;
  doc["notes"] = rep.notes;
  os << doc.dump(2) << '\n';
}

void render(const Report& rep, bool json, std::ostream& os) {
  if (json) render_json(rep, os);
  else render_text(rep, os);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

Json scenario_params(const std::string& command, const Settings& st) {
  const auto& s = st.scenario;
  Json p = Json::object();
  p["command"] = command;
  p["n_signal"] = s.n_signal;
  p["n_idler"] = s.n_idler;
  p["c_mode"] = std::string(to_string(s.c_mode));
  p["c"] = s.resolved_corr();
  p["kappa"] = s.kappa;
  p["n_background"] = s.n_background;
  p["eps_return"] = s.eps_return;
  p["eps_idler"] = s.eps_idler;
  return p;
}

NoiseParams receiver_noise(const Settings& st) {
  const auto preset = noise_for(st.receiver);
  return {st.scenario.eps_return + preset.eps_return, st.scenario.eps_idler + preset.eps_idler};
}

Json null_if_nonfinite(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// ---------------------------------------------------------------- commands

Report cmd_snr(const Settings& st) {
  st.scenario.validate();
  if (st.m < 1) throw InvalidArgument("M must be >= 1");
  const auto src = st.scenario.source();
  const auto ch = st.scenario.channel();
  const auto noise = receiver_noise(st);

  Report rep;
  rep.params = scenario_params("snr", st);
  rep.params["receiver"] = std::string(to_string(st.receiver));
  rep.params["M"] = st.m;

  const auto closed = snr_pc(src, ch, noise);
  const auto chain = receiver_stats_from_states(apply_noise(conditional_states(src, ch), noise));
  const auto bm = beamsplitter_moments(src, ch, noise);
  const double hom = snr_cs_hom(src.n_signal, ch);

  Json r = Json::object();
  r["name"] = std::string(to_string(st.receiver));
  r["snr"] = closed.snr;
  r["snr_gaussian_chain"] = chain.snr;
  r["mean_h0"] = closed.mean_h0;
  r["mean_h1"] = closed.mean_h1;
  r["var_h0"] = closed.var_h0;
  r["var_h1"] = closed.var_h1;
  r["alpha_plus"] = bm.alpha_plus;
  r["alpha_minus"] = bm.alpha_minus;
  r["beta_plus"] = bm.beta_plus;
  r["beta_minus"] = bm.beta_minus;
  r["gamma_star"] = bm.gamma_star;
  const double log_p = log_error_prob_pc(closed, st.m);
  r["p_error"] = std::exp(log_p);
  r["exponent"] = -log_p;
  r["snr_cs_hom"] = hom;
  r["ratio_to_cs_hom"] = hom > 0.0 ? Json(closed.snr / hom) : Json(nullptr);
  const double ni = src.n_idler;
  r["asymptotic_ratio_to_cs_hom"] =
      st.receiver == ReceiverConfig::kQiHetPc ? 1.0 : 2.0 * (1.0 + ni) / (1.0 + 2.0 * ni);
  try {
    const double a = asymptotic_snr(st.receiver, src, ch);
    r["asymptotic_snr"] = a;
    r["snr_over_asymptotic"] = null_if_nonfinite(closed.snr / a);
    if (st.scenario.eps_return != 0.0 || st.scenario.eps_idler != 0.0) {
      rep.notes.push_back("asymptotic_snr covers the receiver preset only; scenario eps is not included");
    }
  } catch (const InvalidArgument& e) {
    r["asymptotic_snr"] = nullptr;
    r["snr_over_asymptotic"] = nullptr;
    rep.notes.push_back(std::string("asymptotic reference unavailable: ") + e.what());
  }
  rep.results.push_back(r);
  return rep;
}

Report cmd_bounds(const Settings& st) {
  st.scenario.validate();
  if (!(st.prior_h0 > 0.0 && st.prior_h0 < 1.0)) {
    throw InvalidArgument("prior-h0 must lie strictly between 0 and 1");
  }
  if (st.m < 1) throw InvalidArgument("M must be >= 1");
  const auto src = st.scenario.source();
  const auto ch = st.scenario.channel();
  const auto qi_states = apply_noise(conditional_states(src, ch), st.scenario.noise());
  const auto cs_states = coherent_benchmark_states(src.n_signal, ch);
  const double md = static_cast<double>(st.m);

  Report rep;
  rep.params = scenario_params("bounds", st);
  rep.params["prior_h0"] = st.prior_h0;
  rep.params["M"] = st.m;

  const auto q = qcb(qi_states.first, qi_states.second, st.prior_h0, st.m);
  Json r = Json::object();
  r["name"] = "QI-QCB";
  r["s_star"] = q.s_star;
  r["c_at_s_star"] = q.c_at_s_star;
  r["exponent"] = q.exponent();
  r["bound"] = q.bound;
  r["log_bound"] = q.log_bound;
  rep.results.push_back(r);

  const double log_c_half = log_gaussian_s_overlap(qi_states.first, qi_states.second, 0.5);
  const double log_qbb =
      0.5 * std::log(st.prior_h0) + 0.5 * std::log1p(-st.prior_h0) + md * log_c_half;
  r = Json::object();
  r["name"] = "QI-QBB";
  r["s_star"] = 0.5;
  r["c_at_s_star"] = std::exp(log_c_half);
  r["exponent"] = -log_c_half;
  r["bound"] = std::exp(log_qbb);
  r["log_bound"] = log_qbb;
  rep.results.push_back(r);

  const auto cs = qcb(cs_states.first, cs_states.second, st.prior_h0, st.m);
  const auto cs_equal = qcb(cs_states.first, cs_states.second, 0.5, st.m);
  const double log_closed = log_cs_qcb_closed(src.n_signal, ch, st.m);
  r = Json::object();
  r["name"] = "CS-QCB";
  r["s_star"] = cs.s_star;
  r["c_at_s_star"] = cs.c_at_s_star;
  r["exponent"] = cs.exponent();
  r["bound"] = cs.bound;
  r["log_bound"] = cs.log_bound;
  r["equal_prior_bound"] = cs_equal.bound;
  r["closed_form_bound"] = std::exp(log_closed);
  r["closed_form_exponent"] = cs_qcb_exponent(src.n_signal, ch);
  r["relative_difference"] = std::abs(std::expm1(cs_equal.log_bound - log_closed));
  rep.results.push_back(r);

  const auto c = ccb(heterodyne_distributions(qi_states.first, qi_states.second));
  const double closed_xi = ccb_closed_xi(src.n_signal, ch);
  const double xi_exponent = ccb_closed_xi_exponent(src.n_signal, ch);
  const double discrepancy =
      c.exponent() > 0.0 ? std::abs(xi_exponent / c.exponent() - 1.0) : std::abs(xi_exponent);
  r = Json::object();
  r["name"] = "QI+Het+CCB";
  r["s_star"] = c.s_star;
  r["c_at_s_star"] = c.c_at_s_star;
  r["exponent"] = c.exponent();
  r["bound"] = std::exp(-std::numbers::ln2 - md * c.exponent());
  r["closed_xi"] = closed_xi;
  r["closed_xi_exponent"] = xi_exponent;
  r["exponent_discrepancy"] = discrepancy;
  rep.results.push_back(r);

  std::ostringstream note;
  note << "QI+Het+CCB: numeric exponent " << format_double(c.exponent())
       << " vs -ln xi for the closed-form xi = 4(1+N_B)/(4+4N_B+kappa N_S): " << format_double(xi_exponent)
       << " (relative discrepancy " << format_double(discrepancy)
       << "); xi is the per-copy overlap, so p <= xi^M / 2 and xi -> 1 as kappa -> 0";
  rep.notes.push_back(note.str());
  if (st.prior_h0 != 0.5) {
    rep.notes.push_back(
        "closed_form_bound, equal_prior_bound and the QI+Het+CCB bound use equal priors");
  }
  return rep;
}

Json mc_row(const std::string& quantity, double analytic, const Estimate& e, bool& all_pass) {
  const double diff = std::abs(e.value - analytic);
  const bool pass = diff <= kMcGateSigmas * e.std_error + 1e-12 * std::max(1.0, std::abs(analytic));
  all_pass = all_pass && pass;
  Json r = Json::object();
  r["quantity"] = quantity;
  r["analytic"] = analytic;
  r["empirical"] = e.value;
  r["std_error"] = e.std_error;
  r["z"] = e.std_error > 0.0 ? Json((e.value - analytic) / e.std_error) : Json(nullptr);
  r["gate"] = pass ? "pass" : "FAIL";
  return r;
}

Report cmd_mc(const Settings& st, bool& all_pass) {
  st.scenario.validate();
  SamplerConfig cfg;
  cfg.seed = st.seed;
  cfg.n_samples = st.samples;
  cfg.n_threads = st.threads;
  cfg.validate();
  const auto src = st.scenario.source();
  const auto ch = st.scenario.channel();
  const auto noise = receiver_noise(st);

  Report rep;
  rep.tabular = true;
  rep.params = scenario_params("mc", st);
  rep.params["receiver"] = std::string(to_string(st.receiver));
  rep.params["seed"] = st.seed;
  rep.params["samples"] = st.samples;
  rep.params["gate_sigmas"] = kMcGateSigmas;

  const auto analytic = snr_pc(src, ch, noise);
  const auto bm = beamsplitter_moments(src, ch, noise);
  const auto emp = simulate_pc_receiver(src, ch, noise, cfg);

  all_pass = true;
  rep.results.push_back(mc_row("mean_h0", analytic.mean_h0, emp.mean_h0, all_pass));
  rep.results.push_back(mc_row("mean_h1", analytic.mean_h1, emp.mean_h1, all_pass));
  rep.results.push_back(mc_row("var_h0", analytic.var_h0, emp.var_h0, all_pass));
  rep.results.push_back(mc_row("var_h1", analytic.var_h1, emp.var_h1, all_pass));
  rep.results.push_back(mc_row("snr", analytic.snr, emp.snr_hat, all_pass));
  rep.results.push_back(mc_row("alpha_plus", bm.alpha_plus, emp.alpha_plus, all_pass));
  rep.results.push_back(mc_row("alpha_minus", bm.alpha_minus, emp.alpha_minus, all_pass));
  rep.results.push_back(mc_row("beta_plus", bm.beta_plus, emp.beta_plus, all_pass));
  rep.results.push_back(mc_row("beta_minus", bm.beta_minus, emp.beta_minus, all_pass));
  rep.results.push_back(mc_row("gamma_star", bm.gamma_star, emp.gamma_star, all_pass));

  const auto identities = check_gaussian_moment_identities(cfg);
  for (const auto& check : identities.checks) {
    rep.results.push_back(mc_row(check.label, check.expected, check.estimate, all_pass));
  }
  rep.notes.push_back(all_pass ? "all gates passed" : "one or more gates failed");
  return rep;
}

Report sweep_report(const Settings& st, const std::vector<SweepRow>& rows) {
  Report rep;
  rep.params = scenario_params("sweep", st);
  Json labels = Json::array();
  for (auto r : st.receivers) labels.push_back(std::string(to_string(r)));
  rep.params["receivers"] = labels;
  rep.params["m_values"] = st.m_values;
  for (const auto& row : rows) {
    Json r = Json::object();
    r["receiver"] = std::string(to_string(row.receiver));
    r["M"] = row.m;
    r["p_error"] = row.p_error;
    r["exponent"] = row.exponent;
    r["per_mode_rate"] = row.per_mode_rate;
    r["rate_kind"] = std::string(to_string(row.rate_kind));
    rep.results.push_back(r);
  }
  rep.notes.push_back(
      "per_mode_rate is the SNR for rate_kind=snr rows and the Chernoff exponent for rate_kind=chernoff rows");
  return rep;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-illumination receiver performance: SNR, error bounds, sweeps and Monte Carlo checks"};
  app.name("qi");
  app.require_subcommand(1);

  bool json = false;
  std::string config_path, out_path, c_text;
  std::uint64_t seed = 0;
  double ns = 0, ni = 0, kappa = 0, nb = 0, eps_r = 0, eps_i = 0;
  app.add_flag("--json", json, "Emit a JSON report {params, results, notes}");
  auto* opt_config = app.add_option("--config", config_path, "JSON config file (flags override it)");
  auto* opt_seed = app.add_option("--seed", seed, "Monte Carlo seed (u64)");
  auto* opt_out = app.add_option("--out", out_path, "Write the CSV (sweep) or report to this path");
  auto* opt_ns = app.add_option("--ns", ns, "Mean signal photons N_S");
  auto* opt_ni = app.add_option("--ni", ni, "Mean idler photons N_I");
  auto* opt_c = app.add_option("--c", c_text, "Correlation: quantum | direct | <value>");
  auto* opt_kappa = app.add_option("--kappa", kappa, "Target reflectivity");
  auto* opt_nb = app.add_option("--nb", nb, "Mean background photons N_B");
  auto* opt_eps_r = app.add_option("--eps-r", eps_r, "Added noise on the return mode");
  auto* opt_eps_i = app.add_option("--eps-i", eps_i, "Added noise on the idler mode");

  std::string receiver;
  std::vector<std::string> receivers;
  std::vector<long long> m_values;
  std::string m_log;
  long long m = 1, samples = 0;
  int threads = 0;
  double prior = 0.5;

  auto* snr = app.add_subcommand("snr", "PC receiver SNR, conditional moments and asymptotic references");
  auto* sweep = app.add_subcommand("sweep", "Error probability versus M for a set of receivers (CSV)");
  auto* bounds = app.add_subcommand("bounds", "Quantum and classical Chernoff bounds");
  auto* mc = app.add_subcommand("mc", "Monte Carlo check of the PC receiver statistics");
  for (auto* sub : {snr, sweep, bounds, mc}) sub->fallthrough();

  std::vector<CLI::Option*> opt_receiver{
      snr->add_option("--receiver", receiver, "QI+PC | QI+Cal+PC | QI+Het+PC"),
      mc->add_option("--receiver", receiver, "QI+PC | QI+Cal+PC | QI+Het+PC")};
  std::vector<CLI::Option*> opt_m{snr->add_option("--m", m, "Number of uses M"),
                                  bounds->add_option("--m", m, "Number of copies M")};
  auto* opt_receivers = sweep->add_option("--receivers", receivers, "Comma-separated receiver labels")
                            ->delimiter(',');
  auto* opt_m_values = sweep->add_option("--m-values", m_values, "Comma-separated M values")->delimiter(',');
  auto* opt_m_log = sweep->add_option("--m-log", m_log, "Log-spaced M grid START:STOP:COUNT (base 10)");
  opt_m_values->excludes(opt_m_log);
  auto* opt_prior = bounds->add_option("--prior-h0", prior, "Prior probability of H0 (target absent)");
  auto* opt_samples = mc->add_option("--samples", samples, "Samples per hypothesis");
  auto* opt_threads = mc->add_option("--threads", threads, "Worker threads (0: all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidParams;
  }

  auto given = [](const std::vector<CLI::Option*>& opts) {
    return std::any_of(opts.begin(), opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
  };

  try {
    Settings st;
    if (opt_config->count()) apply_config(load_config(config_path), st);
    auto& s = st.scenario;
    if (opt_ns->count()) s.n_signal = ns;
    if (opt_ni->count()) s.n_idler = ni;
    if (opt_c->count()) set_correlation(s, c_text);
    if (opt_kappa->count()) s.kappa = kappa;
    if (opt_nb->count()) s.n_background = nb;
    if (opt_eps_r->count()) s.eps_return = eps_r;
    if (opt_eps_i->count()) s.eps_idler = eps_i;
    if (opt_seed->count()) st.seed = seed;
    if (given(opt_receiver)) st.receiver = parse_pc_receiver(receiver);
    if (given(opt_m)) st.m = m;
    if (opt_receivers->count()) st.receivers = parse_receivers(receivers);
    if (opt_m_values->count()) st.m_values = m_values;
    if (opt_m_log->count()) st.m_values = parse_m_log(m_log);
    if (opt_prior->count()) st.prior_h0 = prior;
    if (opt_samples->count()) st.samples = samples;
    if (opt_threads->count()) st.threads = threads;

    const bool to_file = opt_out->count() > 0;
    std::ostringstream buf;

    if (*sweep) {
      SweepSpec spec{st.scenario, st.m_values, st.receivers};
      const auto rows = run_sweep(spec);
      const auto rep = sweep_report(st, rows);
      if (to_file) {
        std::ostringstream csv;
        write_sweep_csv(csv, rows);
        write_file(out_path, csv.str());
        if (json) {
          render_json(rep, out);
        } else {
          render_text(Report{rep.params, Json::array(), {}, false}, out);
          out << "# wrote " << rows.size() << " rows to " << out_path << '\n';
        }
      } else if (json) {
        render_json(rep, out);
      } else {
        render_text(Report{rep.params, Json::array(), {}, false}, out);
        write_sweep_csv(out, rows);
      }
      return kExitOk;
    }

    int code = kExitOk;
    Report rep;
    if (*snr) {
      rep = cmd_snr(st);
    } else if (*bounds) {
      rep = cmd_bounds(st);
    } else {
      bool all_pass = true;
      rep = cmd_mc(st, all_pass);
      if (!all_pass) code = kExitGateFailure;
    }
    render(rep, json, buf);
    if (to_file) write_file(out_path, buf.str());
    else out << buf.str();
    return code;
  } catch (const IoError& e) {
    err << "qi: I/O failure: " << e.what() << '\n';
    return kExitIoFailure;
  } catch (const InvalidArgument& e) {
    err << "qi: invalid parameters: " << e.what() << '\n';
    return kExitInvalidParams;
  } catch (const NumericFailure& e) {
    err << "qi: numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNumericFailure;
  }
}

}  // namespace qi::cli

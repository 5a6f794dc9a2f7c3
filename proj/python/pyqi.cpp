#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <variant>

#include "qi/bounds.hpp"
#include "qi/errors.hpp"
#include "qi/montecarlo.hpp"
#include "qi/numerics.hpp"
#include "qi/pc_receiver.hpp"
#include "qi/sweep.hpp"
#include "qi/symplectic.hpp"

namespace py = pybind11;
using namespace qi;

namespace {

// c may be "quantum", "direct" or a number.
ScenarioParams make_scenario(double n_signal, double n_idler, const std::variant<double, std::string>& c,
                             double kappa, double n_background, double eps_return, double eps_idler) {
  ScenarioParams sc;
  sc.n_signal = n_signal;
  sc.n_idler = n_idler;
  if (const auto* text = std::get_if<std::string>(&c)) {
    if (*text == "quantum") {
      sc.c_mode = CorrelationMode::kQuantum;
    } else if (*text == "direct") {
      sc.c_mode = CorrelationMode::kDirect;
    } else {
      throw InvalidArgument("c must be 'quantum', 'direct' or a number (got '" + *text + "')");
    }
  } else {
    sc.c_mode = CorrelationMode::kExplicit;
    sc.c_value = std::get<double>(c);
  }
  sc.kappa = kappa;
  sc.n_background = n_background;
  sc.eps_return = eps_return;
  sc.eps_idler = eps_idler;
  sc.validate();
  return sc;
}

Receiver receiver_from(const std::string& label) {
  const auto r = parse_receiver(label);
  if (!r) throw InvalidArgument("unknown receiver '" + label + "'");
  return *r;
}

ReceiverConfig pc_config(const std::string& label) {
  if (label == "QI+PC") return ReceiverConfig::kQiPc;
  if (label == "QI+Cal+PC") return ReceiverConfig::kQiCalPc;
  if (label == "QI+Het+PC") return ReceiverConfig::kQiHetPc;
  throw InvalidArgument("receiver must be one of QI+PC, QI+Cal+PC, QI+Het+PC (got '" + label + "')");
}

GaussianState state_from(const Vector& mean, const Matrix& cov) { return GaussianState(mean, CovMatrix(cov)); }

py::dict overlap_dict(const SOverlapResult& r) {
  py::dict d;
  d["s_star"] = r.s_star;
  d["c_at_s_star"] = r.c_at_s_star;
  d["bound"] = r.bound;
  d["log_bound"] = r.log_bound;
  d["exponent"] = r.exponent();
  return d;
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["std_error"] = e.std_error;
  return d;
}

#define SCENARIO_ARGS                                                                                    \
  py::arg("n_signal") = 0.01, py::arg("n_idler") = 0.01, py::arg("c") = "quantum", py::arg("kappa") = 0.01, \
      py::arg("n_background") = 20.0, py::arg("eps_return") = 0.0, py::arg("eps_idler") = 0.0

}  // namespace

PYBIND11_MODULE(pyqi, m) {
  m.doc() = "Gaussian quantum-illumination receivers: SNR, Chernoff bounds, sweeps and sampling checks";

  m.def("c_quantum", [](double ns, double ni) { return c_quantum({ns, ni, 0.0}); }, py::arg("n_signal"),
        py::arg("n_idler"));
  m.def("c_direct", [](double ns, double ni) { return c_direct({ns, ni, 0.0}); }, py::arg("n_signal"),
        py::arg("n_idler"));

  m.def(
      "source_cm",
      [](double ns, double ni, const std::variant<double, std::string>& c) {
        return source_cm(make_scenario(ns, ni, c, 0.0, 0.0, 0.0, 0.0).source()).matrix();
      },
      py::arg("n_signal") = 0.01, py::arg("n_idler") = 0.01, py::arg("c") = "quantum");

  m.def(
      "symplectic_eigenvalues", [](const Matrix& v) { return symplectic_eigenvalues(CovMatrix(v)); },
      py::arg("cov"));
  m.def(
      "williamson",
      [](const Matrix& v) {
        const auto w = williamson(CovMatrix(v));
        return py::make_tuple(w.s_matrix, w.spectrum);
      },
      py::arg("cov"), "Returns (S, spectrum) with cov = S diag(nu_1, nu_1, ...) S^T.");
  m.def(
      "is_physical", [](const Matrix& v) { return is_physical(CovMatrix(v)); }, py::arg("cov"));

  m.def(
      "snr",
      [](const std::string& receiver, double ns, double ni, const std::variant<double, std::string>& c,
         double kappa, double nb, double eps_r, double eps_i) {
        const auto sc = make_scenario(ns, ni, c, kappa, nb, eps_r, eps_i);
        const NoiseParams preset = noise_for(pc_config(receiver));
        const NoiseParams noise{preset.eps_return + sc.eps_return, preset.eps_idler + sc.eps_idler};
        const auto s = snr_pc(sc.source(), sc.channel(), noise);
        py::dict d;
        d["mean_h0"] = s.mean_h0;
        d["mean_h1"] = s.mean_h1;
        d["var_h0"] = s.var_h0;
        d["var_h1"] = s.var_h1;
        d["snr"] = s.snr;
        return d;
      },
      py::arg("receiver") = "QI+PC", SCENARIO_ARGS);

  m.def(
      "snr_cs_hom", [](double ns, double kappa, double nb) { return snr_cs_hom(ns, {kappa, nb}); },
      py::arg("n_signal") = 0.01, py::arg("kappa") = 0.01, py::arg("n_background") = 20.0);

  m.def(
      "error_probability",
      [](double snr, long long m) {
        ReceiverStats s;
        s.snr = snr;
        return error_prob_pc(s, m);
      },
      py::arg("snr"), py::arg("m"), "(1/2) erfc(sqrt(M SNR))");
  m.def("log_half_erfc_sqrt", &log_half_erfc_sqrt, py::arg("z"));

  m.def(
      "s_overlap",
      [](const Vector& m0, const Matrix& v0, const Vector& m1, const Matrix& v1, double s) {
        return gaussian_s_overlap(state_from(m0, v0), state_from(m1, v1), s);
      },
      py::arg("mean0"), py::arg("cov0"), py::arg("mean1"), py::arg("cov1"), py::arg("s"));
  m.def(
      "qcb",
      [](const Vector& m0, const Matrix& v0, const Vector& m1, const Matrix& v1, double prior_h0,
         long long copies) { return overlap_dict(qcb(state_from(m0, v0), state_from(m1, v1), prior_h0, copies)); },
      py::arg("mean0"), py::arg("cov0"), py::arg("mean1"), py::arg("cov1"), py::arg("prior_h0") = 0.5,
      py::arg("copies") = 1);
  m.def(
      "qbb",
      [](const Vector& m0, const Matrix& v0, const Vector& m1, const Matrix& v1) {
        return qbb(state_from(m0, v0), state_from(m1, v1));
      },
      py::arg("mean0"), py::arg("cov0"), py::arg("mean1"), py::arg("cov1"));
  m.def(
      "cs_qcb_closed", [](double ns, double kappa, double nb, long long m) { return cs_qcb_closed(ns, {kappa, nb}, m); },
      py::arg("n_signal"), py::arg("kappa"), py::arg("n_background"), py::arg("m") = 1);

  m.def(
      "receiver_rate",
      [](const std::string& receiver, double ns, double ni, const std::variant<double, std::string>& c,
         double kappa, double nb, double eps_r, double eps_i) {
        const auto rate = receiver_rate(receiver_from(receiver), make_scenario(ns, ni, c, kappa, nb, eps_r, eps_i));
        return py::make_tuple(rate.per_mode_rate, std::string(to_string(rate.kind)));
      },
      py::arg("receiver"), SCENARIO_ARGS, "Returns (per_mode_rate, rate_kind).");

  m.def(
      "sweep",
      [](const std::vector<std::string>& receivers, const std::vector<long long>& m_values, double ns, double ni,
         const std::variant<double, std::string>& c, double kappa, double nb, double eps_r, double eps_i) {
        SweepSpec spec;
        spec.scenario = make_scenario(ns, ni, c, kappa, nb, eps_r, eps_i);
        spec.m_values = m_values;
        for (const auto& r : receivers) spec.receivers.push_back(receiver_from(r));
        py::list rows;
        for (const auto& row : run_sweep(spec)) {
          py::dict d;
          d["receiver"] = std::string(to_string(row.receiver));
          d["M"] = row.m;
          d["p_error"] = row.p_error;
          d["exponent"] = row.exponent;
          d["per_mode_rate"] = row.per_mode_rate;
          d["rate_kind"] = std::string(to_string(row.rate_kind));
          rows.append(d);
        }
        return rows;
      },
      py::arg("receivers"), py::arg("m_values"), SCENARIO_ARGS);
  m.def("log_spaced_uses", &log_spaced_uses, py::arg("start_exponent"), py::arg("stop_exponent"),
        py::arg("count"));
  m.def("format_double", &format_double, py::arg("x"));

  m.def(
      "simulate_pc_receiver",
      [](const std::string& receiver, std::uint64_t seed, long long samples, int threads, double ns, double ni,
         const std::variant<double, std::string>& c, double kappa, double nb, double eps_r, double eps_i) {
        const auto sc = make_scenario(ns, ni, c, kappa, nb, eps_r, eps_i);
        const NoiseParams preset = noise_for(pc_config(receiver));
        SamplerConfig cfg;
        cfg.seed = seed;
        cfg.n_samples = samples;
        cfg.n_threads = threads;
        EmpiricalStats s;
        {
          py::gil_scoped_release release;
          s = simulate_pc_receiver(sc.source(), sc.channel(),
                                   {preset.eps_return + sc.eps_return, preset.eps_idler + sc.eps_idler}, cfg);
        }
        py::dict d;
        d["mean_h0"] = estimate_dict(s.mean_h0);
        d["mean_h1"] = estimate_dict(s.mean_h1);
        d["var_h0"] = estimate_dict(s.var_h0);
        d["var_h1"] = estimate_dict(s.var_h1);
        d["snr"] = estimate_dict(s.snr_hat);
        d["n_samples"] = s.n_samples;
        return d;
      },
      py::arg("receiver") = "QI+PC", py::arg("seed") = 42, py::arg("samples") = 100000, py::arg("threads") = 0,
      SCENARIO_ARGS);
}

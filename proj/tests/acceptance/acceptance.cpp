// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles/fock_oracle.hpp"
#include "qi/bounds.hpp"
#include "qi/montecarlo.hpp"
#include "qi/numerics.hpp"
#include "qi/pc_receiver.hpp"
#include "qi/sweep.hpp"
#include "qi/symplectic.hpp"
#include "test_support.hpp"

namespace {

using namespace qi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SourceParams quantum_source(double ns, double ni) {
  SourceParams s{ns, ni, 0.0};
  s.corr = c_quantum(s);
  return s;
}

void closed_form_grid(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double ns : {0.001, 0.01, 0.1, 1.0, 10.0}) {
    for (double nb : {0.0, 0.1, 1.0, 20.0, 100.0}) {
      for (double kappa : {0.001, 0.01, 0.1}) {
        const ChannelParams ch{kappa, nb};
        const auto st = coherent_benchmark_states(ns, ch);
        const double closed = cs_qcb_closed(ns, ch, 1);
        worst = std::max(worst, std::abs(qcb(st.first, st.second).bound - closed) / closed);
      }
    }
  }
  const double t = seconds_since(t0);
  o.check(worst < 1e-9, "relative error < 1e-9");
  o.check(t < 10.0, "runtime < 10 s");
  o.detail << "75 points, max relative error " << format_double(worst) << ", " << t << " s";
}

void fock_oracle(Outcome& o) {
  const oracle::FockSpace space(1, 200);
  const oracle::CMat vac = space.thermal({0.0});
  const oracle::CMat th = space.thermal({1.0});
  const double fock = oracle::s_overlap(vac, th, 0.5);
  const auto g = [](double nbar) {
    return GaussianState::zero_mean(CovMatrix((nbar + 0.5) * Matrix::Identity(2, 2)));
  };
  const double gaussian = gaussian_s_overlap(g(0.0), g(1.0), 0.5);
  o.check(std::abs(gaussian - 0.7071068) < 1e-6, "C_1/2 = 0.7071068 within 1e-6");
  o.check(std::abs(gaussian - fock) < 1e-6, "Gaussian formula matches Fock trace within 1e-6");
  o.detail << "C_1/2 Gaussian " << format_double(gaussian) << ", Fock cutoff 200 " << format_double(fock);
}

void snr_formula(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto src = testing::reference_source();
  const auto ch = testing::reference_channel();
  struct Case {
    ReceiverConfig config;
    double expected;
  };
  const Case cases[] = {{ReceiverConfig::kQiPc, 2.3576e-6},
                        {ReceiverConfig::kQiCalPc, 2.3028e-6},
                        {ReceiverConfig::kQiHetPc, 1.1628e-6}};
  SamplerConfig cfg;
  cfg.seed = 42;
  cfg.n_samples = 1'000'000;
  for (const auto& c : cases) {
    const auto noise = noise_for(c.config);
    const double snr = snr_pc(src, ch, noise).snr;
    const auto emp = simulate_pc_receiver(src, ch, noise, cfg);
    const double z = (emp.snr_hat.value - snr) / emp.snr_hat.std_error;
    const std::string label(to_string(c.config));
    o.check(std::abs(snr - c.expected) < 1e-10, label + " analytic within 1e-10");
    o.check(std::abs(z) <= 3.0, label + " Monte Carlo within 3 SE");
    o.detail << label << " " << format_double(snr) << " (MC z=" << z << "); ";
  }
  const double t = seconds_since(t0);
  o.check(t < 60.0, "runtime < 60 s");
  o.detail << t << " s";
}

void orderings(Outcome& o) {
  const ScenarioParams sc;
  auto rate = [&](Receiver r) { return receiver_rate(r, sc).per_mode_rate; };
  const double pc = rate(Receiver::kQiPc), cal = rate(Receiver::kQiCalPc), het = rate(Receiver::kQiHetPc);
  const double cs_qcb = rate(Receiver::kCsQcb), cs_hom = rate(Receiver::kCsHom);
  const double ccb = rate(Receiver::kQiHetCcb);
  o.check(pc > cal, "QI+PC > QI+Cal+PC");
  o.check(cal > cs_qcb, "QI+Cal+PC > CS-QCB");
  o.check(cs_qcb >= cs_hom, "CS-QCB >= CS+Hom");
  o.check(cs_hom > het, "CS+Hom > QI+Het+PC");
  o.check(ccb <= cs_qcb, "CCB exponent <= CS-QCB exponent");
  o.detail << "QI+PC " << format_double(pc) << " > QI+Cal+PC " << format_double(cal) << " > CS-QCB "
           << format_double(cs_qcb) << " >= CS+Hom " << format_double(cs_hom) << " > QI+Het+PC "
           << format_double(het) << "; CCB " << format_double(ccb);
}

void asymptotics(Outcome& o) {
  const auto src = quantum_source(0.01, 0.01);
  const ChannelParams ch{0.01, 1e6};
  const double pc = snr_pc(src, ch, noise_for(ReceiverConfig::kQiPc)).snr;
  const double het = snr_pc(src, ch, noise_for(ReceiverConfig::kQiHetPc)).snr;
  const double hom = snr_cs_hom(src.n_signal, ch);
  const double r_pc = pc * (2 * 1e6 * 1.02) / (1.01 * 0.01 * 0.01);
  const double r_het = het * (4 * 1e6) / (0.01 * 0.01);
  const double advantage = pc / hom;
  o.check(r_pc >= 0.999 && r_pc <= 1.001, "QI+PC normalized in [0.999, 1.001]");
  o.check(r_het >= 0.999 && r_het <= 1.001, "QI+Het+PC normalized in [0.999, 1.001]");
  o.check(std::abs(advantage - 2 * 1.01 / 1.02) < 1e-3, "QI+PC/CS+Hom within 1e-3 of 1.98039");
  o.detail << "QI+PC " << r_pc << ", QI+Het+PC " << r_het << ", QI+PC/CS+Hom " << advantage;
}

void advantage_limit(Outcome& o) {
  // c_q is physical only for N_S <= N_I, so the signal is taken as dim as the idler.
  const auto src = quantum_source(1e-6, 1e-6);
  const ChannelParams ch{0.01, 1e6};
  const double ratio = snr_pc(src, ch, noise_for(ReceiverConfig::kQiPc)).snr / snr_cs_hom(src.n_signal, ch);
  o.check(ratio >= 1.998 && ratio <= 2.001, "ratio in [1.998, 2.001]");
  o.detail << "N_S = N_I = 1e-6, N_B = 1e6: QI+PC/CS+Hom " << ratio;
}

void property_suites(Outcome& o) {
  std::mt19937_64 rng(20240101);
  double worst_symp = 0.0, worst_recon = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 3;
    const auto v = testing::random_physical_cm(n, rng);
    const auto w = williamson(v);
    const Matrix omega = symplectic_form(n).matrix();
    worst_symp = std::max(worst_symp, testing::max_abs(w.s_matrix * omega * w.s_matrix.transpose() - omega));
    worst_recon = std::max(worst_recon,
                           testing::max_abs(w.s_matrix * w.normal_form() * w.s_matrix.transpose() - v.matrix()));
  }
  o.check(worst_symp < 1e-10 && worst_recon < 1e-9, "Williamson round trip");

  double worst_swap = 0.0;
  bool ordered = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 2;
    const GaussianState a = GaussianState::zero_mean(testing::random_physical_cm(n, rng, 2.0));
    const GaussianState b = GaussianState::zero_mean(testing::random_physical_cm(n, rng, 2.0));
    for (double s : {0.2, 0.5, 0.7}) {
      worst_swap = std::max(worst_swap,
                            std::abs(gaussian_s_overlap(a, b, s) - gaussian_s_overlap(b, a, 1.0 - s)));
    }
    const double q = qcb(a, b).bound, bb = qbb(a, b);
    ordered = ordered && q <= bb + 1e-14 && bb <= 0.5 + 1e-14;
  }
  o.check(worst_swap < 1e-10, "QCB swap symmetry");
  o.check(ordered, "qcb <= qbb <= 1/2");

  const auto src = testing::reference_source();
  const auto none = conditional_states(src, {0.0, 20.0});
  const double ccb0 = std::abs(ccb(heterodyne_distributions(none.first, none.second)).exponent());
  double prev = HUGE_VAL;
  bool decreasing = true;
  for (double kappa : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto st = conditional_states(src, {kappa, 20.0});
    const double e = ccb(heterodyne_distributions(st.first, st.second)).exponent();
    decreasing = decreasing && e < prev;
    prev = e;
  }
  o.check(ccb0 <= 1e-9 && decreasing, "CCB exponent -> 0 as kappa -> 0");

  double s_lo = 1.0, s_hi = 0.0;
  for (double ns : {0.005, 0.01, 0.02}) {
    for (double kappa : {0.005, 0.01, 0.05}) {
      for (double nb : {10.0, 20.0, 40.0}) {
        const auto st = conditional_states(quantum_source(ns, ns), {kappa, nb});
        const double s = qcb(st.first, st.second).s_star;
        s_lo = std::min(s_lo, s);
        s_hi = std::max(s_hi, s);
      }
    }
  }
  o.check(s_lo >= 0.49 && s_hi <= 0.51, "s* in [0.49, 0.51]");

  SamplerConfig cfg;
  cfg.seed = 42;
  cfg.n_samples = 1'000'000;
  const auto identities = check_gaussian_moment_identities(cfg);
  o.check(identities.all_passed, "moment identities at 5 SE");

  o.detail << "Williamson max residuals " << worst_symp << "/" << worst_recon << "; swap " << worst_swap
           << "; CCB(kappa=0) " << ccb0 << "; s* in [" << s_lo << ", " << s_hi << "]; "
           << identities.checks.size() << " moment gates";
}

void error_probability(Outcome& o) {
  const auto ch = testing::reference_channel();
  const auto hom = homodyne_min_error(0.01, ch, 1'000'000);
  const double rel = std::abs(hom.numeric_p_error - hom.p_error) / hom.p_error;
  o.check(rel <= 1e-12, "homodyne numeric optimum matches closed form to 1e-12");

  const ReceiverStats stats = snr_pc(testing::reference_source(), ch, {});
  const long long m700 = std::llround(700.0 / stats.snr);
  const double at700 = log_error_prob_pc(stats, m700);
  o.check(std::isfinite(at700) && at700 < -700.0, "log-domain value finite at M*SNR = 700");
  double prev = 0.0;
  bool monotone = true;
  for (double e = 0.0; e <= std::log10(static_cast<double>(m700)); e += 0.05) {
    const double v = log_error_prob_pc(stats, std::llround(std::pow(10.0, e)));
    monotone = monotone && std::isfinite(v) && v <= prev;
    prev = v;
  }
  o.check(monotone, "ln p non-increasing in M");
  o.detail << "homodyne relative difference " << format_double(rel) << "; ln p at M*SNR=700 "
           << format_double(at700);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void golden_csv(Outcome& o) {
  const std::string data = QI_TEST_DATA_DIR;
  const auto dir = std::filesystem::temp_directory_path() / "qi_acceptance";
  std::filesystem::create_directories(dir);
  std::string runs[2];
  for (int i = 0; i < 2; ++i) {
    const auto path = dir / ("sweep_" + std::to_string(i) + ".csv");
    std::ostringstream out, err;
    const int code = cli::run({"sweep", "--config", data + "/reference_sweep.json", "--out", path.string()}, out, err);
    o.check(code == 0, "sweep exit 0");
    runs[i] = slurp(path);
  }
  const std::string golden = slurp(data + "/reference_sweep_golden.csv");
  o.check(!golden.empty(), "golden CSV present");
  o.check(runs[0] == runs[1], "repeat runs byte-identical");
  o.check(runs[0] == golden, "matches committed golden CSV");
  o.detail << std::count(golden.begin(), golden.end(), '\n') << " lines compared";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"coherent-state QCB closed-form cross-check", closed_form_grid},
      {"Fock-basis oracle for C_1/2", fock_oracle},
      {"PC receiver SNR and Monte Carlo", snr_formula},
      {"receiver orderings", orderings},
      {"large-N_B asymptotics", asymptotics},
      {"advantage limit N_I -> 0", advantage_limit},
      {"property suites", property_suites},
      {"error-probability formulas", error_probability},
      {"golden sweep CSV byte stability", golden_csv},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("criterion %zu: %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

#include "qi/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "qi/errors.hpp"

namespace qi {

namespace {

constexpr long long kBlockSize = 8192;

enum Stream : std::uint64_t {
  kQuadratureStream = 0,
  kReceiverH0 = 1,
  kReceiverH1 = 2,
  kErrorRateH0 = 3,
  kErrorRateH1 = 4,
  kIdentityBase = 16,
};

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Running central moments up to fourth order with an exact pairwise merge.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  void add(double x) {
    const double n1 = n;
    n += 1.0;
    const double delta = x - mean;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean += delta_n;
    m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
    m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
    m2 += term1;
  }

  void merge(const Moments& b) {
    if (b.n == 0.0) return;
    if (n == 0.0) {
      *this = b;
      return;
    }
    const double na = n;
    const double nb = b.n;
    const double nt = na + nb;
    const double d = b.mean - mean;
    const double d2 = d * d;
    const double d3 = d2 * d;
    const double d4 = d2 * d2;
    const double new_m4 = m4 + b.m4 + d4 * na * nb * (na * na - na * nb + nb * nb) / (nt * nt * nt) +
                          6.0 * d2 * (na * na * b.m2 + nb * nb * m2) / (nt * nt) +
                          4.0 * d * (na * b.m3 - nb * m3) / nt;
    const double new_m3 = m3 + b.m3 + d3 * na * nb * (na - nb) / (nt * nt) +
                          3.0 * d * (na * b.m2 - nb * m2) / nt;
    m2 = m2 + b.m2 + d2 * na * nb / nt;
    m3 = new_m3;
    m4 = new_m4;
    mean += d * nb / nt;
    n = nt;
  }

  double variance() const { return n > 1.0 ? m2 / (n - 1.0) : 0.0; }

  Estimate mean_estimate() const { return {mean, std::sqrt(variance() / n)}; }

  // Sample variance with the large-n standard error sqrt((m4 - var^2) / n).
  Estimate variance_estimate() const {
    const double var = variance();
    const double central4 = m4 / n;
    return {var, std::sqrt(std::max(central4 - var * var, 0.0) / n)};
  }
};

int worker_count(const SamplerConfig& cfg, long long n_blocks) {
  int workers = cfg.n_threads > 0 ? cfg.n_threads
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<long long>(workers, std::max<long long>(n_blocks, 1)));
}

// Runs fn(begin, end) over fixed-size index blocks on a worker pool and
// returns the per-block results in index order.
template <class Result, class Fn>
std::vector<Result> run_blocks(long long n_items, long long block_size, const SamplerConfig& cfg,
                               Fn fn) {
  const long long n_blocks = (n_items + block_size - 1) / block_size;
  std::vector<Result> results(static_cast<std::size_t>(n_blocks));
  std::atomic<long long> next{0};
  auto worker = [&] {
    for (long long b = next++; b < n_blocks; b = next++) {
      const long long begin = b * block_size;
      results[static_cast<std::size_t>(b)] = fn(begin, std::min(begin + block_size, n_items));
    }
  };
  const int workers = worker_count(cfg, n_blocks);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

Eigen::Matrix4d cholesky_factor(const CovMatrix& cov, const char* op) {
  Eigen::LLT<Matrix> llt(cov.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericFailure(std::string(op) + ": covariance matrix cannot be Cholesky-factored",
                         cov.matrix().cwiseAbs().maxCoeff());
  }
  return llt.matrixL().toDenseMatrix();
}

struct PlusMinus {
  double qp, pp, qm, pm;
};

// One pass of the receiver optics on a single return/idler draw.
PlusMinus receiver_optics(const Eigen::Matrix4d& chol, const Eigen::Vector4d& mean, CounterRng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Vector4d z;
  for (int k = 0; k < 4; ++k) z(k) = normal(rng);
  const Eigen::Vector4d x = mean + chol * z;
  const double vac_sd = std::sqrt(0.5);
  const double vq = vac_sd * normal(rng);
  const double vp = vac_sd * normal(rng);
  // X_PC = X_v + Z X_R
  const double q_pc = vq + x(0);
  const double p_pc = vp - x(1);
  const double h = 1.0 / std::sqrt(2.0);
  return {h * (q_pc + x(2)), h * (p_pc + x(3)), h * (q_pc - x(2)), h * (p_pc - x(3))};
}

double photon_difference(const PlusMinus& o) {
  return 0.5 * (o.qp * o.qp + o.pp * o.pp - o.qm * o.qm - o.pm * o.pm);
}

}  // namespace

void SamplerConfig::validate() const {
  if (n_samples < 1) throw InvalidArgument("SamplerConfig: n_samples must be >= 1");
  if (n_pulses_m < 1) throw InvalidArgument("SamplerConfig: n_pulses_m must be >= 1");
  if (n_threads < 0) throw InvalidArgument("SamplerConfig: n_threads must be >= 0");
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
    : state_(mix64(seed ^ mix64(mix64(stream + 0x632be59bd9b4e019ULL) ^ index))) {}

CounterRng::result_type CounterRng::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

Matrix sample_quadratures(const GaussianState& state, const SamplerConfig& cfg) {
  cfg.validate();
  const int dim = state.cov.dim();
  Eigen::LLT<Matrix> llt(state.cov.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericFailure("sample_quadratures: covariance matrix cannot be Cholesky-factored",
                         state.cov.matrix().cwiseAbs().maxCoeff());
  }
  const Matrix chol = llt.matrixL();
  Matrix out(cfg.n_samples, dim);
  run_blocks<int>(cfg.n_samples, kBlockSize, cfg, [&](long long begin, long long end) {
    Vector z(dim);
    for (long long i = begin; i < end; ++i) {
      CounterRng rng(cfg.seed, kQuadratureStream, static_cast<std::uint64_t>(i));
      std::normal_distribution<double> normal;
      for (int k = 0; k < dim; ++k) z(k) = normal(rng);
      out.row(i) = (state.mean + chol * z).transpose();
    }
    return 0;
  });
  return out;
}

EmpiricalStats simulate_pc_receiver(const SourceParams& src, const ChannelParams& ch,
                                    const NoiseParams& noise, const SamplerConfig& cfg) {
  cfg.validate();
  const auto states = apply_noise(conditional_states(src, ch), noise);
  const Eigen::Matrix4d chol0 = cholesky_factor(states.first.cov, "simulate_pc_receiver");
  const Eigen::Matrix4d chol1 = cholesky_factor(states.second.cov, "simulate_pc_receiver");
  const Eigen::Vector4d mean0 = states.first.mean;
  const Eigen::Vector4d mean1 = states.second.mean;

  // [0] N, [1] (q+^2 + p+^2) / 2, [2] (q-^2 + p-^2) / 2, [3] (q+ q- + p+ p-) / 2,
  // [4] mean of all four squared output quadratures
  using Block = std::array<Moments, 5>;
  auto run = [&](const Eigen::Matrix4d& chol, const Eigen::Vector4d& mean, Stream stream) {
    auto blocks = run_blocks<Block>(cfg.n_samples, kBlockSize, cfg, [&](long long begin, long long end) {
      Block acc;
      for (long long i = begin; i < end; ++i) {
        CounterRng rng(cfg.seed, stream, static_cast<std::uint64_t>(i));
        const auto o = receiver_optics(chol, mean, rng);
        acc[0].add(photon_difference(o));
        acc[1].add(0.5 * (o.qp * o.qp + o.pp * o.pp));
        acc[2].add(0.5 * (o.qm * o.qm + o.pm * o.pm));
        acc[3].add(0.5 * (o.qp * o.qm + o.pp * o.pm));
        acc[4].add(0.25 * (o.qp * o.qp + o.pp * o.pp + o.qm * o.qm + o.pm * o.pm));
      }
      return acc;
    });
    Block total;
    for (const auto& b : blocks) {
      for (int k = 0; k < 5; ++k) total[k].merge(b[k]);
    }
    return total;
  };
  const Block h0 = run(chol0, mean0, kReceiverH0);
  const Block h1 = run(chol1, mean1, kReceiverH1);

  EmpiricalStats out;
  out.n_samples = cfg.n_samples;
  out.mean_h0 = h0[0].mean_estimate();
  out.mean_h1 = h1[0].mean_estimate();
  out.var_h0 = h0[0].variance_estimate();
  out.var_h1 = h1[0].variance_estimate();

  // Under H0 both outputs share alpha+.
  out.alpha_plus = h0[4].mean_estimate();
  out.alpha_minus = h0[3].mean_estimate();
  out.beta_plus = h1[1].mean_estimate();
  out.beta_minus = h1[2].mean_estimate();
  out.gamma_star = h1[3].mean_estimate();

  // Plug-in estimate; standard error from the delta method plus the
  // second-order term of the squared mean difference.
  const double diff = out.mean_h1.value - out.mean_h0.value;
  const double sd0 = std::sqrt(out.var_h0.value);
  const double sd1 = std::sqrt(out.var_h1.value);
  const double spread = sd0 + sd1;
  out.snr_hat.value = snr_from_moments(out.mean_h0.value, out.mean_h1.value, out.var_h0.value,
                                       out.var_h1.value);
  const double var_diff = out.mean_h0.std_error * out.mean_h0.std_error +
                          out.mean_h1.std_error * out.mean_h1.std_error;
  const double d_diff = diff / (spread * spread);
  const double d_v0 = -diff * diff / (2.0 * spread * spread * spread * sd0);
  const double d_v1 = -diff * diff / (2.0 * spread * spread * spread * sd1);
  const double second_order = var_diff / (spread * spread);
  out.snr_hat.std_error = std::sqrt(d_diff * d_diff * var_diff +
                                    d_v0 * d_v0 * out.var_h0.std_error * out.var_h0.std_error +
                                    d_v1 * d_v1 * out.var_h1.std_error * out.var_h1.std_error +
                                    0.5 * second_order * second_order);
  return out;
}

ErrorRateEstimate empirical_error_rate(const SourceParams& src, const ChannelParams& ch,
                                       const NoiseParams& noise, long long m,
                                       const SamplerConfig& cfg) {
  cfg.validate();
  if (m < 1) throw InvalidArgument("empirical_error_rate: M must be >= 1");
  const auto analytic = snr_pc(src, ch, noise);
  const double threshold = 0.5 * (analytic.mean_h0 + analytic.mean_h1);
  const auto states = apply_noise(conditional_states(src, ch), noise);
  const Eigen::Matrix4d chol0 = cholesky_factor(states.first.cov, "empirical_error_rate");
  const Eigen::Matrix4d chol1 = cholesky_factor(states.second.cov, "empirical_error_rate");
  const Eigen::Vector4d mean0 = states.first.mean;
  const Eigen::Vector4d mean1 = states.second.mean;

  auto count_errors = [&](const Eigen::Matrix4d& chol, const Eigen::Vector4d& mean, Stream stream,
                          bool target_present) {
    const long long trial_block = std::max<long long>(1, kBlockSize / m);
    auto blocks = run_blocks<long long>(cfg.n_samples, trial_block, cfg, [&](long long begin, long long end) {
      long long errors = 0;
      for (long long t = begin; t < end; ++t) {
        double sum = 0.0;
        for (long long j = 0; j < m; ++j) {
          CounterRng rng(cfg.seed, stream, static_cast<std::uint64_t>(t * m + j));
          sum += photon_difference(receiver_optics(chol, mean, rng));
        }
        const bool decide_present = sum / static_cast<double>(m) > threshold;
        if (decide_present != target_present) ++errors;
      }
      return errors;
    });
    long long total = 0;
    for (long long e : blocks) total += e;
    return total;
  };
  const long long fa = count_errors(chol0, mean0, kErrorRateH0, false);
  const long long md = count_errors(chol1, mean1, kErrorRateH1, true);

  ErrorRateEstimate out;
  out.trials_per_hypothesis = cfg.n_samples;
  out.threshold = threshold;
  out.rate = static_cast<double>(fa + md) / (2.0 * static_cast<double>(cfg.n_samples));
  out.std_error = std::sqrt(out.rate * (1.0 - out.rate) / (2.0 * static_cast<double>(cfg.n_samples)));
  return out;
}

MomentIdentityReport check_gaussian_moment_identities(const SamplerConfig& cfg) {
  cfg.validate();
  struct Case {
    double sd_x;
    double sd_y;
    double rho;
  };
  const std::array<Case, 5> grid{{{1.0, 1.0, 0.0}, {1.0, 1.0, 0.3}, {1.5, 0.7, -0.5},
                                  {2.0, 1.0, 0.9}, {0.5, 3.0, 0.6}}};
  MomentIdentityReport report;
  report.all_passed = true;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const auto& g = grid[c];
    const double cov = g.rho * g.sd_x * g.sd_y;
    const double a = g.sd_y * std::sqrt(1.0 - g.rho * g.rho);
    // [0] x^4, [1] y^4, [2] x^2 y^2
    using Block = std::array<Moments, 3>;
    auto blocks = run_blocks<Block>(cfg.n_samples, kBlockSize, cfg, [&](long long begin, long long end) {
      Block acc;
      for (long long i = begin; i < end; ++i) {
        CounterRng rng(cfg.seed, kIdentityBase + c, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> normal;
        const double z1 = normal(rng);
        const double z2 = normal(rng);
        const double x = g.sd_x * z1;
        const double y = g.rho * g.sd_y * z1 + a * z2;
        acc[0].add(x * x * x * x);
        acc[1].add(y * y * y * y);
        acc[2].add(x * x * y * y);
      }
      return acc;
    });
    Block total;
    for (const auto& b : blocks) {
      for (int k = 0; k < 3; ++k) total[k].merge(b[k]);
    }
    std::ostringstream tag;
    tag << "sd=(" << g.sd_x << "," << g.sd_y << ") rho=" << g.rho;
    const double vx = g.sd_x * g.sd_x;
    const double vy = g.sd_y * g.sd_y;
    const std::array<std::pair<std::string, double>, 3> expected{{
        {"<x^4> = 3 sd_x^4, " + tag.str(), 3.0 * vx * vx},
        {"<y^4> = 3 sd_y^4, " + tag.str(), 3.0 * vy * vy},
        {"<x^2 y^2> = <x^2><y^2> + 2<xy>^2, " + tag.str(), vx * vy + 2.0 * cov * cov},
    }};
    for (int k = 0; k < 3; ++k) {
      MomentCheck check;
      check.label = expected[k].first;
      check.expected = expected[k].second;
      check.estimate = total[k].mean_estimate();
      check.passed = std::abs(check.estimate.value - check.expected) <= 5.0 * check.estimate.std_error;
      report.all_passed = report.all_passed && check.passed;
      report.checks.push_back(std::move(check));
    }
  }
  return report;
}

}  // namespace qi

#include "qi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "qi/errors.hpp"
#include "qi/numerics.hpp"

namespace qi {

namespace {

constexpr int kGridPoints = 33;
constexpr double kSTolerance = 1e-9;
// Overlaps are evaluated at s clamped to [kSEdge, 1 - kSEdge]; the functions
// G and Lambda diverge at the endpoints for mixed states.
constexpr double kSEdge = 1e-12;

struct LogGLambda {
  double log_g;
  double lambda;
};

// G_p(x) = 1 / ((x + 1/2)^p - (x - 1/2)^p),
// Lambda_p(x) = ((x + 1/2)^p + (x - 1/2)^p) / ((x + 1/2)^p - (x - 1/2)^p).
LogGLambda g_lambda(double nu, double p) {
  const double excess = nu - 0.5;
  if (excess <= 0.0) return {0.0, 1.0};  // pure mode
  // (x+1/2)^p - (x-1/2)^p = (x-1/2)^p expm1(p ln((x+1/2)/(x-1/2)))
  const double rel = std::expm1(p * std::log1p(1.0 / excess));
  return {-(p * std::log(excess) + std::log(rel)), (2.0 + rel) / rel};
}

void require_physical(const GaussianState& s, const char* op) {
  const auto report = check_physical(s.cov);
  if (!report.physical) {
    throw InvalidArgument(std::string(op) + ": unphysical covariance matrix: " + report.diagnostic);
  }
}

void require_s(double s, const char* op) {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream msg;
    msg << op << ": s must lie in [0, 1] (got " << s << ")";
    throw InvalidArgument(msg.str());
  }
}

double log_det_spd(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericFailure(std::string(what) + " is not numerically positive definite",
                         m.cwiseAbs().maxCoeff());
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Symplectic eigenvalues within this distance of 1/2 (relative to the CM
// scale) are rounding noise on a pure mode; (nu - 1/2)^s would amplify it.
std::vector<double> snapped_spectrum(const WilliamsonDecomposition& w, const CovMatrix& v) {
  const double tol = 1e-13 * std::max(1.0, v.matrix().cwiseAbs().maxCoeff());
  std::vector<double> nu = w.spectrum;
  for (double& x : nu) {
    if (x < 0.5 + tol) x = 0.5;
  }
  return nu;
}

// Minimizes f(s) = ln(pi0^s pi1^(1-s)) + log_overlap(s): 33-point grid, then
// golden-section refinement on the bracketing cell. Ties prefer s near 1/2.
SOverlapResult minimize_overlap(const std::function<double(double)>& log_overlap, double prior_h0,
                                long long copies) {
  const double log_p0 = std::log(prior_h0);
  const double log_p1 = std::log1p(-prior_h0);
  const double m = static_cast<double>(copies);
  auto objective = [&](double s) { return s * log_p0 + (1.0 - s) * log_p1 + m * log_overlap(s); };

  std::vector<double> values(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) values[i] = objective(static_cast<double>(i) / (kGridPoints - 1));
  const double grid_min = *std::min_element(values.begin(), values.end());
  const double tie = 1e-14 * std::max(1.0, std::abs(grid_min));
  int best = -1;
  for (int i = 0; i < kGridPoints; ++i) {
    if (values[i] > grid_min + tie) continue;
    const double s = static_cast<double>(i) / (kGridPoints - 1);
    if (best < 0 || std::abs(s - 0.5) < std::abs(static_cast<double>(best) / (kGridPoints - 1) - 0.5)) {
      best = i;
    }
  }

  double s_star = static_cast<double>(best) / (kGridPoints - 1);
  double f_star = values[best];
  const double lo = static_cast<double>(std::max(best - 1, 0)) / (kGridPoints - 1);
  const double hi = static_cast<double>(std::min(best + 1, kGridPoints - 1)) / (kGridPoints - 1);
  const auto refined = golden_section_minimize(objective, lo, hi, kSTolerance);
  if (refined.value < f_star - tie) {
    s_star = refined.x;
    f_star = refined.value;
  }

  SOverlapResult out;
  out.s_star = s_star;
  out.log_c_at_s_star = log_overlap(s_star);
  out.c_at_s_star = std::exp(out.log_c_at_s_star);
  out.log_bound = f_star;
  out.bound = std::exp(f_star);
  out.prior_h0 = prior_h0;
  return out;
}

}  // namespace

double SOverlapResult::exponent() const { return -log_c_at_s_star; }

double log_gaussian_s_overlap(const GaussianState& state0, const GaussianState& state1, double s) {
  require_s(s, "gaussian_s_overlap");
  if (state0.n_modes() != state1.n_modes()) {
    throw InvalidArgument("gaussian_s_overlap: states have different mode counts");
  }
  require_physical(state0, "gaussian_s_overlap");
  require_physical(state1, "gaussian_s_overlap");

  const double p = std::clamp(s, kSEdge, 1.0 - kSEdge);
  const int n = state0.n_modes();
  const auto w0 = williamson(state0.cov);
  const auto w1 = williamson(state1.cov);
  const auto nu0 = snapped_spectrum(w0, state0.cov);
  const auto nu1 = snapped_spectrum(w1, state1.cov);

  double log_sqrt_det_pi = 0.0;
  Vector lambda0(2 * n);
  Vector lambda1(2 * n);
  for (int k = 0; k < n; ++k) {
    const auto a = g_lambda(nu0[k], p);
    const auto b = g_lambda(nu1[k], 1.0 - p);
    log_sqrt_det_pi += a.log_g + b.log_g;
    lambda0(2 * k) = lambda0(2 * k + 1) = a.lambda;
    lambda1(2 * k) = lambda1(2 * k + 1) = b.lambda;
  }
  Matrix sigma = w0.s_matrix * lambda0.asDiagonal() * w0.s_matrix.transpose() +
                 w1.s_matrix * lambda1.asDiagonal() * w1.s_matrix.transpose();
  sigma = 0.5 * (sigma + sigma.transpose());

  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericFailure("gaussian_s_overlap: Sigma_s is numerically singular",
                         sigma.cwiseAbs().maxCoeff());
  }
  const double log_det_sigma = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const Vector d = state0.mean - state1.mean;
  const double quad = d.dot(llt.solve(d));

  // Vacuum-1/2 units: the displacement term is exp(-d^T Sigma^-1 d).
  return n * std::numbers::ln2 + log_sqrt_det_pi - 0.5 * log_det_sigma - quad;
}

double gaussian_s_overlap(const GaussianState& state0, const GaussianState& state1, double s) {
  return std::exp(log_gaussian_s_overlap(state0, state1, s));
}

SOverlapResult qcb(const GaussianState& state0, const GaussianState& state1, double prior_h0,
                   long long copies) {
  if (!(prior_h0 > 0.0 && prior_h0 < 1.0)) {
    std::ostringstream msg;
    msg << "qcb: prior P(H0) must lie in (0, 1) (got " << prior_h0 << ")";
    throw InvalidArgument(msg.str());
  }
  if (copies < 1) throw InvalidArgument("qcb: number of copies must be >= 1");
  // Validate once up front so failures surface before the grid scan.
  log_gaussian_s_overlap(state0, state1, 0.5);
  return minimize_overlap([&](double s) { return log_gaussian_s_overlap(state0, state1, s); },
                          prior_h0, copies);
}

double qbb(const GaussianState& state0, const GaussianState& state1) {
  return 0.5 * gaussian_s_overlap(state0, state1, 0.5);
}

double cs_qcb_exponent(double n_signal, const ChannelParams& ch) {
  ch.validate();
  if (!(n_signal >= 0.0)) throw InvalidArgument("N_S must be >= 0");
  // sqrt(N_B + 1) - sqrt(N_B) without cancellation
  const double gap = 1.0 / (std::sqrt(ch.n_background + 1.0) + std::sqrt(ch.n_background));
  return ch.reflectivity * n_signal * gap * gap;
}

double log_cs_qcb_closed(double n_signal, const ChannelParams& ch, long long m) {
  if (m < 1) throw InvalidArgument("number of uses M must be >= 1");
  return -std::numbers::ln2 - static_cast<double>(m) * cs_qcb_exponent(n_signal, ch);
}

double cs_qcb_closed(double n_signal, const ChannelParams& ch, long long m) {
  return std::exp(log_cs_qcb_closed(n_signal, ch, m));
}

ClassicalDistributionPair heterodyne_distributions(const GaussianState& state0,
                                                   const GaussianState& state1) {
  if (state0.n_modes() != state1.n_modes()) {
    throw InvalidArgument("heterodyne_distributions: states have different mode counts");
  }
  const int dim = state0.cov.dim();
  const Matrix half = 0.5 * Matrix::Identity(dim, dim);
  return {state0.cov.matrix() + half, state1.cov.matrix() + half, state0.mean, state1.mean};
}

double log_classical_s_overlap(const ClassicalDistributionPair& pair, double s) {
  require_s(s, "classical_s_overlap");
  const auto dim = pair.cov_h0.rows();
  if (pair.cov_h0.cols() != dim || pair.cov_h1.rows() != dim || pair.cov_h1.cols() != dim ||
      pair.mean_h0.size() != dim || pair.mean_h1.size() != dim) {
    throw InvalidArgument("classical_s_overlap: inconsistent dimensions");
  }
  Eigen::LLT<Matrix> llt0(pair.cov_h0);
  Eigen::LLT<Matrix> llt1(pair.cov_h1);
  if (llt0.info() != Eigen::Success || llt1.info() != Eigen::Success) {
    throw InvalidArgument("classical_s_overlap: covariance is singular or not positive definite");
  }
  const double log_det0 = 2.0 * llt0.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double log_det1 = 2.0 * llt1.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const Matrix eye = Matrix::Identity(dim, dim);
  const Matrix mixed_precision = s * llt0.solve(eye) + (1.0 - s) * llt1.solve(eye);
  const double log_det_mixed = log_det_spd(0.5 * (mixed_precision + mixed_precision.transpose()),
                                           "classical_s_overlap: s P0 + (1-s) P1");

  double result = -0.5 * s * log_det0 - 0.5 * (1.0 - s) * log_det1 - 0.5 * log_det_mixed;
  const Vector d = pair.mean_h0 - pair.mean_h1;
  if (d.squaredNorm() > 0.0 && s > 0.0 && s < 1.0) {
    const Matrix blend = (1.0 - s) * pair.cov_h0 + s * pair.cov_h1;
    result -= 0.5 * s * (1.0 - s) * d.dot(blend.llt().solve(d));
  }
  return result;
}

double classical_s_overlap(const ClassicalDistributionPair& pair, double s) {
  return std::exp(log_classical_s_overlap(pair, s));
}

SOverlapResult ccb(const ClassicalDistributionPair& pair) {
  log_classical_s_overlap(pair, 0.5);
  return minimize_overlap([&](double s) { return log_classical_s_overlap(pair, s); }, 0.5, 1);
}

double ccb_closed_xi(double n_signal, const ChannelParams& ch) {
  ch.validate();
  if (!(n_signal >= 0.0)) throw InvalidArgument("N_S must be >= 0");
  const double nb = ch.n_background;
  return 4.0 * (1.0 + nb) / (4.0 + 4.0 * nb + ch.reflectivity * n_signal);
}

double ccb_closed_xi_exponent(double n_signal, const ChannelParams& ch) {
  ch.validate();
  if (!(n_signal >= 0.0)) throw InvalidArgument("N_S must be >= 0");
  return std::log1p(ch.reflectivity * n_signal / (4.0 * (1.0 + ch.n_background)));
}

}  // namespace qi

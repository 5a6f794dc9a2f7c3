#include "qi/gaussian_model.hpp"

#include <cmath>
#include <sstream>

#include "qi/errors.hpp"

namespace qi {

namespace {

void require_finite_nonnegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    std::ostringstream msg;
    msg << name << " must be a finite value >= 0 (got " << value << ")";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

void SourceParams::validate() const {
  require_finite_nonnegative(n_signal, "N_S");
  require_finite_nonnegative(n_idler, "N_I");
  require_finite_nonnegative(corr, "c");
  const double bound = c_quantum(*this);
  if (corr > bound + 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "correlation violates c <= 2*sqrt(N_S*(N_I+1)): c = " << corr << " > " << bound;
    throw InvalidArgument(msg.str());
  }
  // The idler-side bound only binds for N_S > N_I.
  const double idler_bound = 2.0 * std::sqrt(n_idler * (n_signal + 1.0));
  if (corr > idler_bound + 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "correlation violates the uncertainty principle, c <= 2*sqrt(N_I*(N_S+1)): c = " << corr
        << " > " << idler_bound;
    throw InvalidArgument(msg.str());
  }
}

void ChannelParams::validate() const {
  if (!std::isfinite(reflectivity) || reflectivity < 0.0 || reflectivity > 1.0) {
    std::ostringstream msg;
    msg << "kappa must lie in [0, 1] (got " << reflectivity << ")";
    throw InvalidArgument(msg.str());
  }
  require_finite_nonnegative(n_background, "N_B");
}

void NoiseParams::validate() const {
  require_finite_nonnegative(eps_return, "eps_R");
  require_finite_nonnegative(eps_idler, "eps_I");
}

GaussianState::GaussianState(Vector mean_in, CovMatrix cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (mean.size() != cov.dim()) {
    throw InvalidArgument("GaussianState: mean vector length must equal CM dimension");
  }
  if (!mean.allFinite()) throw InvalidArgument("GaussianState: mean must be finite");
}

GaussianState GaussianState::zero_mean(CovMatrix cov_in) {
  const int dim = cov_in.dim();
  return GaussianState(Vector::Zero(dim), std::move(cov_in));
}

double c_quantum(const SourceParams& src) {
  return 2.0 * std::sqrt(src.n_signal * (src.n_idler + 1.0));
}

double c_direct(const SourceParams& src) { return 2.0 * std::sqrt(src.n_signal * src.n_idler); }

CovMatrix source_cm(const SourceParams& src) {
  src.validate();
  Matrix v = Matrix::Zero(4, 4);
  v(0, 0) = v(1, 1) = 0.5 * src.nu();
  v(2, 2) = v(3, 3) = 0.5 * src.mu();
  v(0, 2) = v(2, 0) = 0.5 * src.corr;
  v(1, 3) = v(3, 1) = -0.5 * src.corr;
  return CovMatrix(std::move(v));
}

StatePair conditional_states(const SourceParams& src, const ChannelParams& ch) {
  src.validate();
  ch.validate();
  Matrix v0 = Matrix::Zero(4, 4);
  v0(0, 0) = v0(1, 1) = 0.5 * ch.omega();
  v0(2, 2) = v0(3, 3) = 0.5 * src.mu();

  Matrix v1 = v0;
  v1(0, 0) = v1(1, 1) = 0.5 * ch.gamma(src.n_signal);
  const double cross = 0.5 * std::sqrt(ch.reflectivity) * src.corr;
  v1(0, 2) = v1(2, 0) = cross;
  v1(1, 3) = v1(3, 1) = -cross;

  return {GaussianState::zero_mean(CovMatrix(std::move(v0))),
          GaussianState::zero_mean(CovMatrix(std::move(v1)))};
}

StatePair apply_noise(const StatePair& states, const NoiseParams& noise) {
  noise.validate();
  auto add = [&](const GaussianState& s) {
    if (s.n_modes() != 2) throw InvalidArgument("apply_noise: expected two-mode return/idler states");
    Matrix v = s.cov.matrix();
    v(0, 0) += 0.5 * noise.eps_return;
    v(1, 1) += 0.5 * noise.eps_return;
    v(2, 2) += 0.5 * noise.eps_idler;
    v(3, 3) += 0.5 * noise.eps_idler;
    return GaussianState(s.mean, CovMatrix(std::move(v)));
  };
  return {add(states.first), add(states.second)};
}

StatePair coherent_benchmark_states(double n_signal, const ChannelParams& ch) {
  require_finite_nonnegative(n_signal, "N_S");
  ch.validate();
  CovMatrix thermal(0.5 * ch.omega() * Matrix::Identity(2, 2));
  Vector displaced = Vector::Zero(2);
  // <q> = sqrt(2) Re(alpha) in the vacuum-1/2 convention, |alpha|^2 = kappa N_S.
  displaced(0) = std::sqrt(2.0 * ch.reflectivity * n_signal);
  return {GaussianState::zero_mean(thermal), GaussianState(displaced, thermal)};
}

}  // namespace qi

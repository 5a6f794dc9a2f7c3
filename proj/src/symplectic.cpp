#include "qi/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "qi/errors.hpp"

namespace qi {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void require_symmetric_positive_definite(const CovMatrix& v, const char* op) {
  if (!v.is_symmetric()) {
    std::ostringstream msg;
    msg << op << ": covariance matrix is not symmetric (max |V - V^T| = "
        << max_abs(v.matrix() - v.matrix().transpose()) << ")";
    throw InvalidArgument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(v.matrix(), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << op << ": covariance matrix is not positive definite";
    if (eig.info() == Eigen::Success) msg << " (min eigenvalue " << eig.eigenvalues().minCoeff() << ")";
    throw InvalidArgument(msg.str());
  }
}

// i * V^{1/2} Omega V^{1/2} is Hermitian and similar (up to the factor i) to
// Omega V, so its eigenvalues are +-nu_k.
struct SpectralData {
  Matrix sqrt_v;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
};

SpectralData spectral_data(const CovMatrix& v, const char* op) {
  require_symmetric_positive_definite(v, op);
  Eigen::SelfAdjointEigenSolver<Matrix> sym(v.matrix());
  Matrix sqrt_v = sym.operatorSqrt();
  const Matrix omega = symplectic_form(v.n_modes()).matrix();
  Matrix b = sqrt_v * omega * sqrt_v;
  ComplexMatrix h = std::complex<double>(0.0, 1.0) * b.cast<std::complex<double>>();
  // Symmetrize away rounding so the solver sees an exactly Hermitian input.
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure(std::string(op) + ": Hermitian eigen-decomposition failed", 0.0);
  }
  return {std::move(sqrt_v), std::move(solver)};
}

// Rotate the global phase so that the first component of (near-)maximal
// modulus becomes +i|u_j|; makes the real basis reproducible.
ComplexVector fix_phase(const ComplexVector& u) {
  const double peak = u.cwiseAbs().maxCoeff();
  Eigen::Index j = 0;
  for (; j < u.size(); ++j) {
    if (std::abs(u(j)) >= peak - 1e-10) break;
  }
  const std::complex<double> target(0.0, std::abs(u(j)));
  return u * (target / u(j));
}

}  // namespace

CovMatrix::CovMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols() || entries_.rows() % 2 != 0) {
    std::ostringstream msg;
    msg << "CovMatrix: expected a non-empty square 2N x 2N matrix, got " << entries_.rows() << "x"
        << entries_.cols();
    throw InvalidArgument(msg.str());
  }
  if (!entries_.allFinite()) throw InvalidArgument("CovMatrix: entries must be finite");
}

CovMatrix CovMatrix::vacuum(int n_modes) {
  if (n_modes < 1) throw InvalidArgument("CovMatrix::vacuum: n_modes must be >= 1");
  return CovMatrix(0.5 * Matrix::Identity(2 * n_modes, 2 * n_modes));
}

bool CovMatrix::is_symmetric(double tol) const {
  return max_abs(entries_ - entries_.transpose()) <= tol;
}

SymplecticForm::SymplecticForm(int n_modes) : n_modes_(n_modes) {
  if (n_modes < 1) throw InvalidArgument("symplectic_form: n_modes must be >= 1");
  omega_ = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega_(2 * k, 2 * k + 1) = 1.0;
    omega_(2 * k + 1, 2 * k) = -1.0;
  }
}

SymplecticForm symplectic_form(int n_modes) { return SymplecticForm(n_modes); }

Matrix WilliamsonDecomposition::normal_form() const {
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  Vector diag(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    diag(2 * k) = spectrum[k];
    diag(2 * k + 1) = spectrum[k];
  }
  return diag.asDiagonal();
}

std::vector<double> symplectic_eigenvalues(const CovMatrix& v) {
  const auto data = spectral_data(v, "symplectic_eigenvalues");
  const int n = v.n_modes();
  const auto& evals = data.solver.eigenvalues();  // ascending
  std::vector<double> nu;
  nu.reserve(n);
  for (int k = 2 * n - 1; k >= n; --k) nu.push_back(std::abs(evals(k)));
  return nu;
}

WilliamsonDecomposition williamson(const CovMatrix& v) {
  const auto data = spectral_data(v, "williamson");
  const int n = v.n_modes();
  const int dim = 2 * n;
  const auto& evals = data.solver.eigenvalues();
  const auto& evecs = data.solver.eigenvectors();

  Matrix orth(dim, dim);
  Vector inv_sqrt_nu(dim);
  std::vector<double> spectrum;
  spectrum.reserve(n);
  for (int k = 0; k < n; ++k) {
    const int idx = dim - 1 - k;
    const double nu = evals(idx);
    spectrum.push_back(nu);
    // B u = -i nu u with u = x + i y gives B x = nu y, B y = -nu x, so the
    // columns (sqrt2 y, sqrt2 x) carry the block nu * [[0, 1], [-1, 0]].
    const ComplexVector u = fix_phase(evecs.col(idx));
    orth.col(2 * k) = std::sqrt(2.0) * u.imag();
    orth.col(2 * k + 1) = std::sqrt(2.0) * u.real();
    inv_sqrt_nu(2 * k) = inv_sqrt_nu(2 * k + 1) = 1.0 / std::sqrt(nu);
  }

  WilliamsonDecomposition out{data.sqrt_v * orth * inv_sqrt_nu.asDiagonal(), std::move(spectrum)};

  const Matrix omega = symplectic_form(n).matrix();
  const double s_scale = std::max(1.0, max_abs(out.s_matrix) * max_abs(out.s_matrix));
  const double sympl_res = max_abs(out.s_matrix * omega * out.s_matrix.transpose() - omega);
  const double recon_res =
      max_abs(out.s_matrix * out.normal_form() * out.s_matrix.transpose() - v.matrix());
  if (sympl_res > 1e-8 * s_scale) {
    throw NumericFailure("williamson: S is not symplectic to tolerance", sympl_res);
  }
  if (recon_res > 1e-8 * std::max(1.0, max_abs(v.matrix()))) {
    throw NumericFailure("williamson: reconstruction S V+ S^T != V", recon_res);
  }
  return out;
}

PhysicalityReport check_physical(const CovMatrix& v) {
  PhysicalityReport report;
  if (!v.is_symmetric()) {
    std::ostringstream msg;
    msg << "not symmetric: max |V - V^T| = " << max_abs(v.matrix() - v.matrix().transpose());
    report.diagnostic = msg.str();
    return report;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(v.matrix(), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "not positive definite: min eigenvalue " << eig.eigenvalues().minCoeff();
    report.diagnostic = msg.str();
    return report;
  }
  const auto nu = symplectic_eigenvalues(v);
  report.min_symplectic_eigenvalue = nu.back();
  report.physical = report.min_symplectic_eigenvalue >= 0.5 - kPhysicalityTolerance;
  if (!report.physical) {
    std::ostringstream msg;
    msg << "uncertainty principle violated: min symplectic eigenvalue "
        << report.min_symplectic_eigenvalue << " < 1/2";
    report.diagnostic = msg.str();
  }
  return report;
}

bool is_physical(const CovMatrix& v) { return check_physical(v).physical; }

}  // namespace qi

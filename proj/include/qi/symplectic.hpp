#pragma once

// Real symplectic linear algebra for N-mode Gaussian states.
//
// Conventions used throughout the library: hbar = 1, vacuum quadrature
// variance 1/2, and quadratures ordered (q1, p1, q2, p2, ..., qN, pN).

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kPhysicalityTolerance = 1e-9;

// A 2N x 2N real covariance matrix. Construction checks the shape only;
// symmetry and physicality are properties queried by the operations below.
class CovMatrix {
 public:
  explicit CovMatrix(Matrix entries);

  static CovMatrix vacuum(int n_modes);

  int n_modes() const noexcept { return static_cast<int>(entries_.rows() / 2); }
  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  bool is_symmetric(double tol = kSymmetryTolerance) const;

 private:
  Matrix entries_;
};

// Omega = direct sum of [[0, 1], [-1, 0]] over the modes.
class SymplecticForm {
 public:
  explicit SymplecticForm(int n_modes);

  int n_modes() const noexcept { return n_modes_; }
  const Matrix& matrix() const noexcept { return omega_; }

 private:
  int n_modes_;
  Matrix omega_;
};

SymplecticForm symplectic_form(int n_modes);

// V = S * diag(nu_1, nu_1, ..., nu_N, nu_N) * S^T with S symplectic.
struct WilliamsonDecomposition {
  Matrix s_matrix;
  std::vector<double> spectrum;

  // diag(nu_1, nu_1, ..., nu_N, nu_N)
  Matrix normal_form() const;
};

// Symplectic eigenvalues, one per conjugate pair +-i nu of Omega V, sorted
// descending. Throws InvalidArgument for non-symmetric or non-positive-
// definite input.
std::vector<double> symplectic_eigenvalues(const CovMatrix& v);

// Throws NumericFailure when the reconstruction residual exceeds tolerance.
WilliamsonDecomposition williamson(const CovMatrix& v);

struct PhysicalityReport {
  bool physical = false;
  double min_symplectic_eigenvalue = 0.0;
  std::string diagnostic;
};

PhysicalityReport check_physical(const CovMatrix& v);

// True iff v is symmetric and every symplectic eigenvalue is >= 1/2 - 1e-9.
bool is_physical(const CovMatrix& v);

}  // namespace qi

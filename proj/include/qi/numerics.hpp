#pragma once

#include <functional>

namespace qi {

// Complementary error function, 1 - (2/sqrt(pi)) int_0^x exp(-t^2) dt.
double erfc(double x);

// ln erfc(x), finite for every finite x (no underflow in the far tail).
double log_erfc(double x);

// ln( (1/2) erfc(sqrt(z)) ) for z >= 0.
double log_half_erfc_sqrt(double z);

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for the minimum of a unimodal f on [lo, hi];
// terminates when the bracket is narrower than x_tol.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double x_tol);

}  // namespace qi

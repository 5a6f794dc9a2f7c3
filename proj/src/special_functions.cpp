#include <cmath>
#include <numbers>

#include "qi/errors.hpp"
#include "qi/numerics.hpp"

namespace qi {

namespace {

// Past this point erfc(x) < 1e-273; switch to the scaled continued fraction.
constexpr double kTailStart = 25.0;

// exp(x^2) erfc(x) for large positive x, evaluated bottom-up from the
// continued fraction 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))) / sqrt(pi).
double scaled_erfc_tail(double x) {
  double tail = x;
  for (int k = 60; k >= 1; --k) tail = x + 0.5 * k / tail;
  return 1.0 / (tail * std::sqrt(std::numbers::pi));
}

}  // namespace

double erfc(double x) { return std::erfc(x); }

double log_erfc(double x) {
  if (std::isnan(x)) return x;
  if (x <= kTailStart) return std::log(std::erfc(x));
  return -x * x + std::log(scaled_erfc_tail(x));
}

double log_half_erfc_sqrt(double z) {
  if (!(z >= 0.0)) throw InvalidArgument("log_half_erfc_sqrt: z must be >= 0");
  return -std::numbers::ln2 + log_erfc(std::sqrt(z));
}

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double x_tol) {
  if (!(lo <= hi)) throw InvalidArgument("golden_section_minimize: empty bracket");
  constexpr double inv_phi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  ScalarMinimum best{x, f(x)};
  if (fc < best.value) best = {c, fc};
  if (fd < best.value) best = {d, fd};
  return best;
}

}  // namespace qi

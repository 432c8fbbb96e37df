#include "vcb/optimize.hpp"

#include <cmath>

#include "vcb/error.hpp"

namespace vcb {

namespace {

constexpr int kMaxExpansions = 60;
constexpr int kMaxIterations = 500;

}  // namespace

ScalarMinimum minimize_golden(const std::function<double(double)>& objective, double lo, double hi,
                              double tol) {
  if (!(tol > 0.0)) throw InputError("golden-section tolerance must be positive");
  if (!(hi > lo)) throw InputError("golden-section bracket must satisfy lo < hi");

  int evaluations = 0;
  auto f = [&](double x) {
    ++evaluations;
    const double v = objective(x);
    if (!std::isfinite(v)) {
      throw NumericError("objective is not finite at x = " + std::to_string(x));
    }
    return v;
  };

  ScalarMinimum out;
  const double lo0 = lo;
  double f_hi = f(hi);
  double f_mid = f(0.5 * (lo + hi));
  while (f_hi < f_mid && out.expansions < kMaxExpansions) {
    const double width = hi - lo;
    lo = 0.5 * (lo + hi);
    hi = hi + width;
    ++out.expansions;
    f_mid = f(0.5 * (lo + hi));
    f_hi = f(hi);
  }
  if (f_hi < f_mid) {
    out.argmin = hi;
    out.value = f_hi;
    out.at_boundary = true;
    out.iterations = evaluations;
    return out;
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < kMaxIterations && (b - a) > tol; ++it) {
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
  out.argmin = fc <= fd ? c : d;
  out.value = std::min(fc, fd);

  // Endpoints can beat every interior probe when the objective is monotone.
  const double f_lo = f(lo0);
  if (f_lo <= out.value) {
    out.argmin = lo0;
    out.value = f_lo;
  }
  if (out.expansions == 0 && f_hi < out.value) {
    out.argmin = hi;
    out.value = f_hi;
  }
  out.at_boundary = out.argmin - lo0 <= tol || hi - out.argmin <= tol;
  out.iterations = evaluations;
  return out;
}

}  // namespace vcb

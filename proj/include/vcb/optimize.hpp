#pragma once

#include <functional>

namespace vcb {

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
  int expansions = 0;
  // The minimizer sits on an endpoint of the (possibly expanded) bracket.
  bool at_boundary = false;
};

// Golden-section search for a convex objective on [lo, hi]. If the objective
// is still decreasing at hi, the bracket is doubled (up to 60 times) before
// the search. Throws NumericError on non-finite objective values.
ScalarMinimum minimize_golden(const std::function<double(double)>& objective, double lo, double hi,
                              double tol = 1e-8);

}  // namespace vcb

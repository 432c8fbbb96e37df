#include <doctest.h>

#include <cmath>

#include "vcb/error.hpp"
#include "vcb/optimize.hpp"

using namespace vcb;

TEST_CASE("golden section finds interior minima") {
  const auto m = minimize_golden([](double x) { return (x - 1.3) * (x - 1.3) + 2.0; }, 0.0, 4.0, 1e-10);
  CHECK(m.argmin == doctest::Approx(1.3).epsilon(1e-7));
  CHECK(m.value == doctest::Approx(2.0));
  CHECK_FALSE(m.at_boundary);
}

TEST_CASE("golden section expands the bracket to the right") {
  const auto m = minimize_golden([](double x) { return std::cosh(x - 30.0); }, 0.0, 4.0, 1e-10);
  CHECK(m.argmin == doctest::Approx(30.0).epsilon(1e-6));
  CHECK(m.expansions > 0);
}

TEST_CASE("golden section reports a minimizer on the left end") {
  const auto m = minimize_golden([](double x) { return x; }, 0.0, 1.0);
  CHECK(m.argmin == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(m.at_boundary);
}

TEST_CASE("golden section rejects non-finite objectives") {
  CHECK_THROWS_AS(minimize_golden([](double) { return NAN; }, 0.0, 1.0), NumericError);
}

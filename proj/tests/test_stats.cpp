#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "fracta/stats.hpp"

using namespace fracta;

TEST_CASE("moment helpers agree with hand results") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(mean(v) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(population_variance(v) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(sample_variance(v) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(sample_stddev(v) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));

  const std::vector<double> empty, one{1.0};
  CHECK_THROWS_AS(mean(empty), std::invalid_argument);
  CHECK_THROWS_AS(sample_variance(one), std::invalid_argument);
}

TEST_CASE("line fit recovers an exact line") {
  std::vector<double> x, y;
  for (int i = 0; i < 9; ++i) {
    x.push_back(0.5 * i - 1.0);
    y.push_back(3.25 * x.back() - 7.5);
  }
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(3.25).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(-7.5).epsilon(1e-13));
  CHECK(f.residual_rms == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(f.n == 9);
}

TEST_CASE("line fit statistics match the textbook formulas") {
  // y = 2x + 1 with symmetric residuals {+1, -1, +1, -1}
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{2.0, 2.0, 6.0, 6.0};
  const auto f = fit_line(x, y);
  // normal equations by hand: slope 1.6, intercept 1.6
  CHECK(f.slope == doctest::Approx(1.6).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(1.6).epsilon(1e-13));
  // residuals: 0.4, -1.2, 1.2, -0.4 -> rms sqrt(3.2/4)
  CHECK(f.residual_rms == doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
  // s^2 = SSR/(n-2) = 1.6, se(slope) = sqrt(1.6/5)
  CHECK(f.slope_stderr == doctest::Approx(std::sqrt(1.6 / 5.0)).epsilon(1e-12));
}

TEST_CASE("line fit input validation") {
  const std::vector<double> one{1.0}, two{1.0, 2.0}, flat{2.0, 2.0, 2.0},
      rise{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_line(one, one), std::invalid_argument);
  CHECK_THROWS_AS(fit_line(two, one), std::invalid_argument);
  CHECK_THROWS_AS(fit_line(flat, rise), std::invalid_argument);
}

TEST_CASE("format_double survives a round trip and prints integers plainly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 337.7940251578608}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-0.5) == "-0.5");
}

TEST_CASE("fnv1a64 known answers") {
  // reference values for the 64-bit FNV-1a parameters
  auto hash = [](const std::string& s) { return fnv1a64(s.data(), s.size()); };
  CHECK(hash("") == 0xcbf29ce484222325ull);
  CHECK(hash("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hash("hello") == 0xa430d84680aabd0bull);
  CHECK(hash(std::string(1, '\0')) == 0xaf63bd4c8601b7dfull);
}

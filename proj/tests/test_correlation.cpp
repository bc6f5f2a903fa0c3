#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fracta/correlation.hpp"
#include "fracta/rng.hpp"
#include "fracta/synth.hpp"

using namespace fracta;

TEST_CASE("lag zero is exactly one and small lags match hand computation") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const auto acf = autocorrelation(x, 3);
  REQUIRE(acf.a.size() == 4);
  CHECK(acf.series_len == 4);
  CHECK(acf.a[0] == 1.0);  // bit-exact by construction
  CHECK(acf.a[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(acf.a[2] == doctest::Approx(-0.3).epsilon(1e-14));
  CHECK(acf.a[3] == doctest::Approx(-0.45).epsilon(1e-14));
}

TEST_CASE("the 1/T normalization damps large lags") {
  // alternating series: the lag-k numerator has T-k surviving terms
  std::vector<double> x;
  for (int i = 0; i < 8; ++i) x.push_back(i % 2 ? -1.0 : 1.0);
  const auto acf = autocorrelation(x, 4);
  CHECK(acf.a[0] == 1.0);
  CHECK(acf.a[1] == doctest::Approx(-7.0 / 8.0).epsilon(1e-14));
  CHECK(acf.a[2] == doctest::Approx(6.0 / 8.0).epsilon(1e-14));
  CHECK(acf.a[3] == doctest::Approx(-5.0 / 8.0).epsilon(1e-14));
  CHECK(acf.a[4] == doctest::Approx(4.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("lag zero stays exact on awkward numbers") {
  CounterRng rng(3);
  std::vector<double> x;
  for (int i = 0; i < 1000; ++i) x.push_back(1e8 + rng.next_gaussian() * 1e-3);
  const auto acf = autocorrelation(x, 10);
  CHECK(acf.a[0] == 1.0);
}

TEST_CASE("autocorrelation input validation") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(autocorrelation(x, 0), std::invalid_argument);
  CHECK_THROWS_AS(autocorrelation(x, 4), std::invalid_argument);  // lag must be < T
  CHECK_THROWS_AS(autocorrelation(std::vector<double>{1.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(autocorrelation(std::vector<double>(64, 2.5), 4), std::invalid_argument);
}

TEST_CASE("default max lag is a quarter of the series capped at 2000") {
  CHECK(default_max_lag(100) == 25);
  CHECK(default_max_lag(1000000) == 2000);
  CHECK(default_max_lag(8000) == 2000);
  CHECK(default_max_lag(8) == 2);
  CHECK(default_max_lag(7) == 1);
}

TEST_CASE("ar1 autocorrelation decays like phi^k") {
  const double phi = 0.5;
  const auto x = gen_ar1(phi, 1 << 16, 991);
  const auto acf = autocorrelation(x, 32);
  for (int k = 1; k <= 5; ++k)
    CHECK(std::abs(acf.a[k] - std::pow(phi, k)) < 0.05);
}

TEST_CASE("correlation time finds the first durable crossing") {
  AcfCurve acf;
  acf.series_len = 10000;
  acf.a = {1.0, 0.8, 0.5, 0.1, 0.05, 0.02, 0.01, 0.005};
  const auto ct = correlation_time(acf, 0.3);
  CHECK(ct.lag == 3);
  CHECK_FALSE(ct.censored);
  CHECK(ct.threshold == 0.3);
}

TEST_CASE("a rebound within the confirm window postpones the crossing") {
  AcfCurve acf;
  acf.series_len = 10000;
  acf.a = {1.0, 0.8, 0.25, 0.6, 0.2, 0.1, 0.05, 0.02};
  const auto ct = correlation_time(acf, 0.3);
  CHECK(ct.lag == 4);  // lag 2 dips below but lag 3 pops back up

  // a shorter confirm window accepts the first dip
  const auto eager = correlation_time(acf, 0.3, 1);
  CHECK(eager.lag == 2);
}

TEST_CASE("never-crossing curves are censored at max lag") {
  AcfCurve acf;
  acf.series_len = 100;
  acf.a = {1.0, 0.9, 0.8, 0.7, 0.6};
  const auto ct = correlation_time(acf, 0.3);
  CHECK(ct.censored);
  CHECK(ct.lag == 4);
}

TEST_CASE("default threshold is the noise level") {
  AcfCurve acf;
  acf.series_len = 10000;  // 2/sqrt(T) = 0.02
  acf.a = {1.0, 0.5, 0.019, 0.01, 0.005, 0.001, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const auto ct = correlation_time(acf);
  CHECK(ct.threshold == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(ct.lag == 2);
}

TEST_CASE("white noise decorrelates immediately, ar1 takes longer") {
  CounterRng rng(17);
  std::vector<double> noise;
  for (int i = 0; i < 1 << 14; ++i) noise.push_back(rng.next_gaussian());
  const auto acf_noise = autocorrelation(noise, 64);
  const auto ct_noise = correlation_time(acf_noise);
  CHECK(ct_noise.lag <= 2);

  const auto x = gen_ar1(0.9, 1 << 14, 18);
  const auto acf_ar = autocorrelation(x, 256);
  const auto ct_ar = correlation_time(acf_ar);
  CHECK_FALSE(ct_ar.censored);
  // phi = 0.9: need roughly log(0.0156)/log(0.9) ~ 39 lags to fall under noise
  CHECK(ct_ar.lag > 10);
  CHECK(ct_ar.lag < 120);
}

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracta {

// Autocorrelation with the global-moment, 1/T convention:
//   A(k) = (1/T) sum_i [x(i) - <x>][x(i+k) - <x>] / var(x)
// where <x> and var are population moments of the whole series.  The k = 0
// numerator is the same summation that defines var, so A(0) == 1.0 exactly.
// The 1/T (rather than 1/(T-k)) normalization damps large-lag estimates.
struct AcfCurve {
  std::vector<double> a;  // a[k], k = 0..max_lag
  std::size_t series_len = 0;
  bool operator==(const AcfCurve&) const = default;
};

AcfCurve autocorrelation(std::span<const double> x, std::size_t max_lag);

// min(T/4, 2000)
std::size_t default_max_lag(std::size_t series_len);

struct CorrelationTime {
  std::size_t lag = 0;
  bool censored = false;  // never dropped below threshold up to max_lag
  double threshold = 0.0;
  bool operator==(const CorrelationTime&) const = default;
};

// First lag whose A(k) < threshold and stays below it for the next `confirm`
// lags (window clipped at max_lag).  threshold <= 0 selects the noise level
// 2/sqrt(T).  Censored results carry lag = max_lag.
CorrelationTime correlation_time(const AcfCurve& acf, double threshold = 0.0,
                                 std::size_t confirm = 10);

}  // namespace fracta

#include "fracta/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracta {

AcfCurve autocorrelation(std::span<const double> x, std::size_t max_lag) {
  const std::size_t t = x.size();
  if (t < 2) throw std::invalid_argument("autocorrelation: need at least two samples");
  if (max_lag < 1 || max_lag >= t)
    throw std::invalid_argument("autocorrelation: max_lag must lie in [1, T)");

  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(t);

  auto numerator = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < t; ++i) s += (x[i] - m) * (x[i + k] - m);
    return s / static_cast<double>(t);
  };

  const double var = numerator(0);
  if (!(var > 0.0)) throw std::invalid_argument("autocorrelation: zero variance");

  AcfCurve c;
  c.series_len = t;
  c.a.resize(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) c.a[k] = numerator(k) / var;
  return c;
}

std::size_t default_max_lag(std::size_t series_len) {
  return std::min<std::size_t>(series_len / 4, 2000);
}

CorrelationTime correlation_time(const AcfCurve& acf, double threshold, std::size_t confirm) {
  if (acf.a.size() < 2) throw std::invalid_argument("correlation_time: curve too short");
  const std::size_t max_lag = acf.a.size() - 1;
  CorrelationTime r;
  r.threshold = threshold > 0.0
                    ? threshold
                    : 2.0 / std::sqrt(static_cast<double>(acf.series_len));

  for (std::size_t k = 1; k <= max_lag; ++k) {
    bool ok = true;
    for (std::size_t j = k; j <= std::min(max_lag, k + confirm - 1); ++j) {
      if (!(acf.a[j] < r.threshold)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      r.lag = k;
      return r;
    }
  }
  r.lag = max_lag;
  r.censored = true;
  return r;
}

}  // namespace fracta

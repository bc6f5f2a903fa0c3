#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace fracta {

struct CcdfPoint {
  double x = 0.0;  // value / sigma
  double p = 0.0;  // P(X >= x), empirical
  bool operator==(const CcdfPoint&) const = default;
};

// Empirical complementary CDF over the distinct nonzero values of a sample,
// abscissa rescaled by the sample standard deviation of the full
// (|.|-transformed when take_abs) sample.  Zeros stay in the denominator of p
// and in sigma but contribute no point, keeping the curve log-log plottable.
struct Ccdf {
  std::vector<CcdfPoint> points;  // x ascending, p strictly decreasing
  double sigma = 0.0;
  std::size_t n = 0;  // full sample size
  bool operator==(const Ccdf&) const = default;
};

Ccdf empirical_ccdf(std::span<const double> values, bool take_abs);

enum class TailModel { power, stretched };

struct TailRegion {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::size_t n_points = 0;  // ccdf points inside [x_lo, x_hi]
  bool operator==(const TailRegion&) const = default;
};

// Fit window: every ccdf point at or above the q-th sample quantile.
// Throws when fewer than min_points points survive.
TailRegion select_tail_region(const Ccdf& ccdf, double quantile = 0.90,
                              std::size_t min_points = 10);

// power:     P(X >= x) ~ x^-gamma, straight line in ln p vs ln x
// stretched: P(X >= x) = exp(-(x/x0)^beta), straight line in ln(-ln p) vs ln x
//            (points with p = 1 cannot be linearized and are skipped)
// exponent carries gamma resp. beta; scale carries x0 for the stretched form.
// residual_rms is measured in ln p coordinates for both models so the two
// goodness numbers are directly comparable.
struct TailFit {
  TailModel model = TailModel::power;
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double scale = 0.0;
  double intercept = 0.0;  // intercept of the linearized fit
  TailRegion region;
  double residual_rms = 0.0;
  bool conforming = true;  // gamma > 0 resp. beta in (0,1)
  bool operator==(const TailFit&) const = default;
};

TailFit fit_power_tail(const Ccdf& ccdf, const TailRegion& region);
TailFit fit_stretched_tail(const Ccdf& ccdf, const TailRegion& region);

// Hill maximum-likelihood tail index over raw values >= x_min; independent
// cross-check for fit_power_tail, never the reported exponent.
struct HillEstimate {
  double gamma = 0.0;
  double stderr_ = 0.0;
  std::size_t k = 0;  // tail sample count
};
HillEstimate hill_estimate(std::span<const double> values, double x_min);

// True when neither model clearly wins: residual RMS ratio below `factor`.
bool comparable_models(const TailFit& a, const TailFit& b, double factor = 1.5);

// CCDF file schema: header "x,p", %.17g fields.  Reading reconstructs a Ccdf
// with sigma = 1 (the abscissa in the file is already normalized) and n
// inferred from the smallest p.
void write_ccdf_csv(std::ostream& out, const Ccdf& ccdf);
Ccdf read_ccdf_csv(std::istream& in);

}  // namespace fracta

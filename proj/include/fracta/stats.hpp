#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace fracta {

// Ordinary least squares y = slope*x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;      // 0 when n <= 2
  double intercept_stderr = 0.0;  // 0 when n <= 2
  double residual_rms = 0.0;      // sqrt(RSS/n)
  std::size_t n = 0;
};

double mean(std::span<const double> x);
double population_variance(std::span<const double> x);
double sample_variance(std::span<const double> x);
double sample_stddev(std::span<const double> x);

// Throws std::invalid_argument on n < 2, mismatched lengths or degenerate x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// %.17g rendering; round-trips every finite double exactly.
std::string format_double(double v);

// FNV-1a 64-bit over raw bytes, for input provenance stamps.
std::uint64_t fnv1a64(const void* data, std::size_t len);

}  // namespace fracta

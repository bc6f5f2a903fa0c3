#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fracta {

// Multifractal detrended fluctuation analysis.
//
// Pipeline: profile (mean-centered cumulative sum) -> per-scale segmentation
// from both ends (2*floor(T/s) segments) -> least-squares polynomial detrend
// of order poly_degree inside every segment -> residual variance f2(s, seg)
// -> q-generalized averages F_q(s) -> log-log slopes h(q).

struct MfdfaConfig {
  std::vector<double> q_grid;       // ascending; must contain q = 2
  int poly_degree = 2;              // detrending order m, 1..4
  std::vector<std::size_t> scales;  // ascending, within [m+2, T/2]
  // Segments with f2 <= variance_floor are excluded from the q <= 0 averages
  // (negative moments blow up on flat segments); for q > 0 they enter as
  // genuine zeros.  The default only catches exact zeros.
  double variance_floor = 0.0;
  int threads = 1;

  // q in [-4, 4] step 0.25 and ~30 log-spaced integer scales from
  // max(2*(m+2), 16) up to series_len/4.
  static MfdfaConfig defaults(std::size_t series_len, int poly_degree = 2);
  void validate(std::size_t series_len) const;
};

// Mean-centered cumulative sum of u; poly_degree only gates the minimum
// usable length (series shorter than 4*(m+2) cannot support the analysis).
std::vector<double> profile_series(std::span<const double> u, int poly_degree = 2);

struct FluctuationSurface {
  std::vector<double> q_grid;
  std::vector<std::size_t> scales;
  std::vector<std::size_t> segment_counts;     // 2*floor(T/s) per scale
  std::vector<std::size_t> excluded_segments;  // f2 <= floor count per scale
  std::vector<std::vector<double>> f;          // f[q_index][scale_index]
  double profile_rms = 0.0;
  std::size_t series_len = 0;

  double at(std::size_t qi, std::size_t si) const { return f[qi][si]; }
  std::optional<std::size_t> q_index(double q) const;
  std::optional<std::size_t> scale_index(std::size_t s) const;
  bool operator==(const FluctuationSurface&) const = default;
};

// F entries are NaN where no segment survives the q <= 0 exclusion and 0.0
// where every segment is flat under q > 0.
FluctuationSurface fluctuation_function(std::span<const double> u, const MfdfaConfig& cfg);

struct ScalingRange {
  std::size_t s_lo = 0;  // scale values, inclusive
  std::size_t s_hi = 0;
  double decades = 0.0;
  bool operator==(const ScalingRange&) const = default;
};

enum class QSelection { positive, all };

// Widest contiguous log-s window where, for every q in the subset, the local
// log-log slope stays within slope_tol of its window mean.  Windows touching
// scales with undefined or vanishing F are rejected; nullopt when nothing
// spans min_decades.
std::optional<ScalingRange> detect_scaling_range(const FluctuationSurface& surface,
                                                 double slope_tol = 0.05,
                                                 double min_decades = 1.0,
                                                 QSelection subset = QSelection::positive);

struct HqCurve {
  std::vector<double> q;
  std::vector<double> h;         // NaN where the per-q fit is impossible
  std::vector<double> h_stderr;
  std::size_t s_lo = 0, s_hi = 0;
  bool operator==(const HqCurve&) const = default;
};

// OLS slope of ln F_q vs ln s over scales in [s_lo, s_hi] (>= 8 scale points
// required; individual q rows additionally need >= 3 finite F values).
HqCurve fit_generalized_hurst(const FluctuationSurface& surface, std::size_t s_lo,
                              std::size_t s_hi);

enum class MemoryClass { antipersistent, uncorrelated, persistent };
const char* memory_class_name(MemoryClass c);
MemoryClass classify_hurst(double h);  // H > 1/2 persistent, < 1/2 antipersistent

struct HurstEstimate {
  double h = 0.0;
  double h_stderr = 0.0;
  MemoryClass cls = MemoryClass::uncorrelated;
};

// H = h(2) fitted across the full configured scale grid.
HurstEstimate hurst_exponent(std::span<const double> u, const MfdfaConfig& cfg);

// Legendre data: tau(q) = q h(q) - 1, alpha = dtau/dq (central differences,
// one-sided at the ends), f(alpha) = q alpha - tau.  Rows with undefined h
// are dropped before differentiating.
struct MultifractalSpectrum {
  std::vector<double> q, h, h_stderr, tau, alpha, f_alpha;
  double alpha_width = 0.0;
  double f_max = 0.0;
  bool operator==(const MultifractalSpectrum&) const = default;
};

MultifractalSpectrum singularity_spectrum(const HqCurve& hq);

}  // namespace fracta

#pragma once

#include <cstdint>
#include <vector>

namespace fracta {

// Test-signal generators with known scaling/tail properties.  All of them are
// deterministic functions of (parameters, length, seed); identical calls give
// bit-identical output on every platform.

// Fractional Gaussian noise with Hurst exponent h in (0,1), exact target
// autocovariance rho(k) = ((k+1)^2H - 2k^2H + |k-1|^2H)/2 via circulant
// embedding (Davies-Harte).  n must be a power of two, n >= 1024.
std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed);

// Deterministic binomial cascade on 2^levels cells: left child of every
// interval carries fraction a of the mass, right child 1-a.  The value at
// cell k is a^(levels-popcount(k)) * (1-a)^popcount(k).  The seed parameter
// is accepted for interface uniformity and ignored.
std::vector<double> gen_binomial_cascade(double a, int levels, std::uint64_t seed = 0);

// Closed-form generalized Hurst exponent of the binomial cascade:
// h(q) = 1/q - log2(a^q + (1-a)^q)/q, with the q = 0 limit taken by
// averaging evaluations at q = +/-1e-4.
double analytic_cascade_h(double a, double q);

// Inverse-CDF samplers.  pareto: x = u^(-1/gamma), x >= 1, P(X > x) = x^-gamma.
// weibull: x = (-ln u)^(1/beta), stretched-exponential tail exp(-x^beta).
std::vector<double> gen_pareto(double gamma, std::size_t n, std::uint64_t seed);
std::vector<double> gen_weibull(double beta, std::size_t n, std::uint64_t seed);

// Stationary Gaussian AR(1) with coefficient |phi| < 1 and unit innovations;
// autocorrelation phi^k.
std::vector<double> gen_ar1(double phi, std::size_t n, std::uint64_t seed);

// Radix-2 in-place FFT used by the circulant embedding; exposed for tests.
// Length must be a power of two.  Fixed operation order, no SIMD dispatch,
// so results are reproducible bit-for-bit across machines.
void fft_radix2(std::vector<double>& re, std::vector<double>& im, bool inverse);

}  // namespace fracta

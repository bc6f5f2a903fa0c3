#include "fracta/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "fracta/rng.hpp"

namespace fracta {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void fft_radix2(std::vector<double>& re, std::vector<double>& im, bool inverse) {
  const std::size_t n = re.size();
  if (im.size() != n) throw std::invalid_argument("fft_radix2: length mismatch");
  if (!is_pow2(n)) throw std::invalid_argument("fft_radix2: length must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    const double wr = std::cos(ang), wi = std::sin(ang);
    for (std::size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::size_t a = i + k, b = i + k + len / 2;
        const double tr = re[b] * cr - im[b] * ci;
        const double ti = re[b] * ci + im[b] * cr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
        const double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] *= inv;
      im[i] *= inv;
    }
  }
}

std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("gen_fgn: hurst must lie in (0,1)");
  if (!is_pow2(n) || n < 1024)
    throw std::invalid_argument("gen_fgn: n must be a power of two >= 1024");

  const std::size_t m = 2 * n;
  auto rho = [hurst](double k) {
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) +
                  std::pow(std::abs(k - 1.0), h2));
  };

  // eigenvalues of the circulant extension of the covariance
  std::vector<double> lam(m, 0.0), lam_im(m, 0.0);
  for (std::size_t k = 0; k <= n; ++k) lam[k] = rho(static_cast<double>(k));
  for (std::size_t k = n + 1; k < m; ++k) lam[k] = lam[m - k];
  fft_radix2(lam, lam_im, false);

  double lam_max = 0.0;
  for (double v : lam) lam_max = std::max(lam_max, v);
  for (double& v : lam) {
    if (v < 0.0) {
      if (v < -1e-8 * lam_max)
        throw std::runtime_error("gen_fgn: circulant embedding not nonnegative");
      v = 0.0;
    }
  }

  // Hermitian random spectrum with E|Y_k|^2 = lam_k, then X = Re(FFT(Y))/sqrt(m)
  CounterRng rng(seed);
  std::vector<double> yr(m, 0.0), yi(m, 0.0);
  yr[0] = std::sqrt(lam[0]) * rng.next_gaussian();
  yr[n] = std::sqrt(lam[n]) * rng.next_gaussian();
  for (std::size_t k = 1; k < n; ++k) {
    const double s = std::sqrt(0.5 * lam[k]);
    const double a = s * rng.next_gaussian();
    const double b = s * rng.next_gaussian();
    yr[k] = a;
    yi[k] = b;
    yr[m - k] = a;
    yi[m - k] = -b;
  }
  fft_radix2(yr, yi, false);

  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = yr[i] * scale;
  return out;
}

std::vector<double> gen_binomial_cascade(double a, int levels, std::uint64_t /*seed*/) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("gen_binomial_cascade: a must lie in (0,1)");
  if (levels < 1 || levels > 26)
    throw std::invalid_argument("gen_binomial_cascade: levels must lie in [1,26]");

  std::vector<double> v{1.0};
  for (int l = 0; l < levels; ++l) {
    std::vector<double> next(v.size() * 2);
    for (std::size_t i = 0; i < v.size(); ++i) {
      next[2 * i] = v[i] * a;
      next[2 * i + 1] = v[i] * (1.0 - a);
    }
    v.swap(next);
  }
  return v;
}

double analytic_cascade_h(double a, double q) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("analytic_cascade_h: a must lie in (0,1)");
  auto h = [a](double qq) {
    return 1.0 / qq - std::log2(std::pow(a, qq) + std::pow(1.0 - a, qq)) / qq;
  };
  if (q == 0.0) return 0.5 * (h(1e-4) + h(-1e-4));
  return h(q);
}

std::vector<double> gen_pareto(double gamma, std::size_t n, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gen_pareto: gamma must be positive");
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = std::pow(rng.next_open_unit(), -1.0 / gamma);
  return out;
}

std::vector<double> gen_weibull(double beta, std::size_t n, std::uint64_t seed) {
  if (!(beta > 0.0)) throw std::invalid_argument("gen_weibull: beta must be positive");
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = std::pow(-std::log(rng.next_open_unit()), 1.0 / beta);
  return out;
}

std::vector<double> gen_ar1(double phi, std::size_t n, std::uint64_t seed) {
  if (!(std::abs(phi) < 1.0)) throw std::invalid_argument("gen_ar1: need |phi| < 1");
  if (n == 0) return {};
  CounterRng rng(seed);
  std::vector<double> out(n);
  out[0] = rng.next_gaussian() / std::sqrt(1.0 - phi * phi);
  for (std::size_t i = 1; i < n; ++i) out[i] = phi * out[i - 1] + rng.next_gaussian();
  return out;
}

}  // namespace fracta

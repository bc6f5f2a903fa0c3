#pragma once

// Reference MFDFA used only by the tests.  Deliberately shares no code with
// the library: raw-power-basis normal equations solved by Gaussian
// elimination, everything in long double, moments averaged directly instead
// of via log-sum-exp.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace naive {

// Residuals of the least-squares polynomial fit of y over t = 0..n-1.
inline std::vector<long double> detrend_residuals(std::span<const long double> y, int deg) {
  const std::size_t n = y.size();
  const int dim = deg + 1;
  std::vector<long double> a(static_cast<std::size_t>(dim) * dim, 0.0L);
  std::vector<long double> b(dim, 0.0L);
  long double powt[16];
  for (std::size_t i = 0; i < n; ++i) {
    powt[0] = 1.0L;
    for (int k = 1; k <= 2 * deg; ++k) powt[k] = powt[k - 1] * static_cast<long double>(i);
    for (int r = 0; r < dim; ++r) {
      b[r] += y[i] * powt[r];
      for (int c = 0; c < dim; ++c) a[r * dim + c] += powt[r + c];
    }
  }

  for (int col = 0; col < dim; ++col) {
    int p = col;
    for (int r = col + 1; r < dim; ++r)
      if (std::fabs(a[r * dim + col]) > std::fabs(a[p * dim + col])) p = r;
    if (p != col) {
      for (int c = 0; c < dim; ++c) std::swap(a[p * dim + c], a[col * dim + c]);
      std::swap(b[p], b[col]);
    }
    for (int r = col + 1; r < dim; ++r) {
      const long double m = a[r * dim + col] / a[col * dim + col];
      for (int c = col; c < dim; ++c) a[r * dim + c] -= m * a[col * dim + c];
      b[r] -= m * b[col];
    }
  }
  std::vector<long double> coef(dim);
  for (int r = dim - 1; r >= 0; --r) {
    long double s = b[r];
    for (int c = r + 1; c < dim; ++c) s -= a[r * dim + c] * coef[c];
    coef[r] = s / a[r * dim + r];
  }

  std::vector<long double> resid(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double p = coef[deg];
    for (int k = deg - 1; k >= 0; --k) p = p * static_cast<long double>(i) + coef[k];
    resid[i] = y[i] - p;
  }
  return resid;
}

struct Surface {
  std::vector<double> q;
  std::vector<std::size_t> scales;
  std::vector<std::vector<double>> f;  // f[q_index][scale_index]
};

inline Surface mfdfa(std::span<const double> u, std::vector<double> q_grid,
                     std::vector<std::size_t> scales, int deg, double floor_val) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t t_len = u.size();

  long double mean = 0.0L;
  for (double v : u) mean += v;
  mean /= static_cast<long double>(t_len);
  std::vector<long double> prof(t_len);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < t_len; ++i) {
    acc += static_cast<long double>(u[i]) - mean;
    prof[i] = acc;
  }

  Surface out;
  out.q = std::move(q_grid);
  out.scales = std::move(scales);
  out.f.assign(out.q.size(), std::vector<double>(out.scales.size(), nan));

  for (std::size_t si = 0; si < out.scales.size(); ++si) {
    const std::size_t s = out.scales[si];
    const std::size_t half = t_len / s;
    const std::size_t nseg = 2 * half;
    std::vector<long double> f2(nseg);
    for (std::size_t v = 0; v < nseg; ++v) {
      const std::size_t start = v < half ? v * s : t_len - (v - half + 1) * s;
      const auto r =
          detrend_residuals(std::span<const long double>(prof.data() + start, s), deg);
      long double rm = 0.0L;
      for (long double x : r) rm += x;
      rm /= static_cast<long double>(s);
      long double ss = 0.0L;
      for (long double x : r) ss += (x - rm) * (x - rm);
      f2[v] = ss / static_cast<long double>(s);
    }

    for (std::size_t qi = 0; qi < out.q.size(); ++qi) {
      const double q = out.q[qi];
      if (q > 0.0) {
        long double accq = 0.0L;
        for (long double v : f2)
          if (v > 0.0L) accq += std::pow(v, static_cast<long double>(q) / 2.0L);
        const long double meanq = accq / static_cast<long double>(nseg);
        out.f[qi][si] = static_cast<double>(
            meanq > 0.0L ? std::pow(meanq, 1.0L / static_cast<long double>(q)) : 0.0L);
      } else if (q == 0.0) {
        long double lacc = 0.0L;
        std::size_t cnt = 0;
        for (long double v : f2)
          if (v > static_cast<long double>(floor_val)) {
            lacc += std::log(v);
            ++cnt;
          }
        if (cnt > 0)
          out.f[qi][si] =
              static_cast<double>(std::exp(0.5L * lacc / static_cast<long double>(cnt)));
      } else {
        long double accq = 0.0L;
        std::size_t cnt = 0;
        for (long double v : f2)
          if (v > static_cast<long double>(floor_val)) {
            accq += std::pow(v, static_cast<long double>(q) / 2.0L);
            ++cnt;
          }
        if (cnt > 0)
          out.f[qi][si] = static_cast<double>(std::pow(
              accq / static_cast<long double>(cnt), 1.0L / static_cast<long double>(q)));
      }
    }
  }
  return out;
}

}  // namespace naive

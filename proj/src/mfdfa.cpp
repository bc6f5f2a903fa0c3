#include "fracta/mfdfa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fracta/stats.hpp"

namespace fracta {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Cholesky factorization of the (m+1)x(m+1) Gram matrix of the detrend basis;
// small enough for fixed storage (m <= 4).
struct SmallCholesky {
  int n = 0;
  double l[5][5] = {};

  void factor(const double g[5][5], int dim) {
    n = dim;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = g[i][j];
        for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
        if (i == j) {
          if (!(s > 0.0)) throw std::runtime_error("mfdfa: singular detrending basis");
          l[i][i] = std::sqrt(s);
        } else {
          l[i][j] = s / l[j][j];
        }
      }
    }
  }

  void solve(const double b[5], double out[5]) const {
    double y[5];
    for (int i = 0; i < n; ++i) {
      double s = b[i];
      for (int k = 0; k < i; ++k) s -= l[i][k] * y[k];
      y[i] = s / l[i][i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < n; ++k) s -= l[k][i] * out[k];
      out[i] = s / l[i][i];
    }
  }
};

// Residual variance of one segment after the order-m fit.  The basis abscissa
// tc (scaled to [-1,1]) and the Gram factorization are shared across all
// segments of a scale.
double segment_f2(const double* x, std::size_t s, const std::vector<double>& tc,
                  const SmallCholesky& chol, int m, std::vector<double>& resid) {
  double b[5] = {};
  for (std::size_t i = 0; i < s; ++i) {
    double w = 1.0;
    for (int j = 0; j <= m; ++j) {
      b[j] += x[i] * w;
      w *= tc[i];
    }
  }
  double a[5] = {};
  chol.solve(b, a);

  double sum = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    double p = a[m];
    for (int j = m - 1; j >= 0; --j) p = p * tc[i] + a[j];
    resid[i] = x[i] - p;
    sum += resid[i];
  }
  // variance about the residual mean, per the detrended-variance definition
  const double rmean = sum / static_cast<double>(s);
  double ss = 0.0;
  for (std::size_t i = 0; i < s; ++i) ss += (resid[i] - rmean) * (resid[i] - rmean);
  return ss / static_cast<double>(s);
}

}  // namespace

MfdfaConfig MfdfaConfig::defaults(std::size_t series_len, int poly_degree) {
  MfdfaConfig c;
  c.poly_degree = poly_degree;
  c.q_grid.reserve(33);
  for (int i = -16; i <= 16; ++i) c.q_grid.push_back(static_cast<double>(i) * 0.25);

  const std::size_t s_min = std::max<std::size_t>(2 * (static_cast<std::size_t>(poly_degree) + 2), 16);
  const std::size_t s_max = std::max(s_min, series_len / 4);
  const int n_scales = 30;
  const double la = std::log(static_cast<double>(s_min));
  const double lb = std::log(static_cast<double>(s_max));
  for (int i = 0; i < n_scales; ++i) {
    const double f = n_scales == 1 ? 0.0 : static_cast<double>(i) / (n_scales - 1);
    auto s = static_cast<std::size_t>(std::llround(std::exp(la + (lb - la) * f)));
    s = std::clamp(s, s_min, s_max);
    if (c.scales.empty() || s > c.scales.back()) c.scales.push_back(s);
  }
  return c;
}

void MfdfaConfig::validate(std::size_t series_len) const {
  if (poly_degree < 1 || poly_degree > 4)
    throw std::invalid_argument("mfdfa: poly_degree must lie in [1,4]");
  const std::size_t min_len = 4 * (static_cast<std::size_t>(poly_degree) + 2);
  if (series_len < min_len)
    throw std::invalid_argument("mfdfa: series too short, need at least " +
                                std::to_string(min_len) + " samples");
  if (q_grid.empty()) throw std::invalid_argument("mfdfa: empty q grid");
  bool has_two = false;
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    if (!std::isfinite(q_grid[i])) throw std::invalid_argument("mfdfa: non-finite q");
    if (i > 0 && !(q_grid[i] > q_grid[i - 1]))
      throw std::invalid_argument("mfdfa: q grid must be strictly increasing");
    if (std::abs(q_grid[i] - 2.0) < 1e-9) has_two = true;
  }
  if (!has_two) throw std::invalid_argument("mfdfa: q grid must contain q = 2");
  if (scales.empty()) throw std::invalid_argument("mfdfa: empty scale grid");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < static_cast<std::size_t>(poly_degree) + 2)
      throw std::invalid_argument("mfdfa: scale below poly_degree + 2");
    if (scales[i] > series_len / 2)
      throw std::invalid_argument("mfdfa: scale exceeds series_len / 2");
    if (i > 0 && !(scales[i] > scales[i - 1]))
      throw std::invalid_argument("mfdfa: scales must be strictly increasing");
  }
  if (!(variance_floor >= 0.0) || !std::isfinite(variance_floor))
    throw std::invalid_argument("mfdfa: variance_floor must be finite and >= 0");
  if (threads < 1) throw std::invalid_argument("mfdfa: threads must be >= 1");
}

std::vector<double> profile_series(std::span<const double> u, int poly_degree) {
  if (poly_degree < 1 || poly_degree > 4)
    throw std::invalid_argument("profile_series: poly_degree must lie in [1,4]");
  const std::size_t min_len = 4 * (static_cast<std::size_t>(poly_degree) + 2);
  if (u.size() < min_len)
    throw std::invalid_argument("profile_series: need at least " + std::to_string(min_len) +
                                " samples");
  double m = 0.0;
  for (double v : u) {
    if (!std::isfinite(v)) throw std::invalid_argument("profile_series: non-finite input");
    m += v;
  }
  m /= static_cast<double>(u.size());

  std::vector<double> x(u.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += u[i] - m;
    x[i] = acc;
  }
  return x;
}

std::optional<std::size_t> FluctuationSurface::q_index(double q) const {
  for (std::size_t i = 0; i < q_grid.size(); ++i)
    if (std::abs(q_grid[i] - q) < 1e-9) return i;
  return std::nullopt;
}

std::optional<std::size_t> FluctuationSurface::scale_index(std::size_t s) const {
  for (std::size_t i = 0; i < scales.size(); ++i)
    if (scales[i] == s) return i;
  return std::nullopt;
}

FluctuationSurface fluctuation_function(std::span<const double> u, const MfdfaConfig& cfg) {
  cfg.validate(u.size());
  const std::size_t t_len = u.size();
  const std::vector<double> x = profile_series(u, cfg.poly_degree);
  const int m = cfg.poly_degree;

  FluctuationSurface surf;
  surf.q_grid = cfg.q_grid;
  surf.scales = cfg.scales;
  surf.series_len = t_len;
  surf.segment_counts.assign(cfg.scales.size(), 0);
  surf.excluded_segments.assign(cfg.scales.size(), 0);
  surf.f.assign(cfg.q_grid.size(), std::vector<double>(cfg.scales.size(), kNan));
  {
    double ss = 0.0;
    for (double v : x) ss += v * v;
    surf.profile_rms = std::sqrt(ss / static_cast<double>(t_len));
  }

  auto process_scale = [&](std::size_t si, std::vector<double>& f2, std::vector<double>& lf2,
                           std::vector<double>& resid) {
    const std::size_t s = cfg.scales[si];
    const std::size_t half = t_len / s;
    const std::size_t nseg = 2 * half;

    std::vector<double> tc(s);
    for (std::size_t i = 0; i < s; ++i)
      tc[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(s - 1);
    double pow_sum[9] = {};
    for (std::size_t i = 0; i < s; ++i) {
      double w = 1.0;
      for (int k = 0; k <= 2 * m; ++k) {
        pow_sum[k] += w;
        w *= tc[i];
      }
    }
    double g[5][5] = {};
    for (int j = 0; j <= m; ++j)
      for (int k = 0; k <= m; ++k) g[j][k] = pow_sum[j + k];
    SmallCholesky chol;
    chol.factor(g, m + 1);

    resid.resize(s);
    f2.resize(nseg);
    lf2.resize(nseg);
    std::size_t excluded = 0;
    for (std::size_t v = 0; v < nseg; ++v) {
      // second half walks the same segmentation from the tail end
      const std::size_t start = v < half ? v * s : t_len - (v - half + 1) * s;
      f2[v] = segment_f2(&x[start], s, tc, chol, m, resid);
      lf2[v] = f2[v] > 0.0 ? std::log(f2[v]) : kNegInf;
      if (f2[v] <= cfg.variance_floor) ++excluded;
    }
    surf.segment_counts[si] = nseg;
    surf.excluded_segments[si] = excluded;

    for (std::size_t qi = 0; qi < cfg.q_grid.size(); ++qi) {
      const double q = cfg.q_grid[qi];
      double val = kNan;
      if (q > 0.0) {
        // flat segments are genuine zeros of f2^(q/2); log-sum-exp over the rest
        double mx = kNegInf;
        for (std::size_t v = 0; v < nseg; ++v)
          if (f2[v] > 0.0) mx = std::max(mx, 0.5 * q * lf2[v]);
        if (mx == kNegInf) {
          val = 0.0;
        } else {
          double acc = 0.0;
          for (std::size_t v = 0; v < nseg; ++v)
            if (f2[v] > 0.0) acc += std::exp(0.5 * q * lf2[v] - mx);
          val = std::exp((mx + std::log(acc) - std::log(static_cast<double>(nseg))) / q);
        }
      } else {
        // negative and zero moments exist only on segments above the floor
        std::size_t cnt = 0;
        if (q == 0.0) {
          double acc = 0.0;
          for (std::size_t v = 0; v < nseg; ++v)
            if (f2[v] > cfg.variance_floor) {
              acc += lf2[v];
              ++cnt;
            }
          if (cnt > 0) val = std::exp(0.5 * acc / static_cast<double>(cnt));
        } else {
          double mx = kNegInf;
          for (std::size_t v = 0; v < nseg; ++v)
            if (f2[v] > cfg.variance_floor) {
              mx = std::max(mx, 0.5 * q * lf2[v]);
              ++cnt;
            }
          if (cnt > 0) {
            double acc = 0.0;
            for (std::size_t v = 0; v < nseg; ++v)
              if (f2[v] > cfg.variance_floor) acc += std::exp(0.5 * q * lf2[v] - mx);
            val = std::exp((mx + std::log(acc) - std::log(static_cast<double>(cnt))) / q);
          }
        }
      }
      surf.f[qi][si] = val;
    }
  };

  const std::size_t n_workers =
      std::min<std::size_t>(std::max(cfg.threads, 1), cfg.scales.size());
  if (n_workers <= 1) {
    std::vector<double> f2, lf2, resid;
    for (std::size_t si = 0; si < cfg.scales.size(); ++si) process_scale(si, f2, lf2, resid);
  } else {
    // scales are independent and land in disjoint slots, so any schedule
    // produces bit-identical results
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        std::vector<double> f2, lf2, resid;
        try {
          for (std::size_t si = next.fetch_add(1); si < cfg.scales.size();
               si = next.fetch_add(1))
            process_scale(si, f2, lf2, resid);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  return surf;
}

std::optional<ScalingRange> detect_scaling_range(const FluctuationSurface& surface,
                                                 double slope_tol, double min_decades,
                                                 QSelection subset) {
  if (!(slope_tol > 0.0)) throw std::invalid_argument("detect_scaling_range: slope_tol <= 0");
  const auto& scales = surface.scales;
  const std::size_t ns = scales.size();
  if (ns < 3) return std::nullopt;

  std::vector<std::size_t> qs;
  for (std::size_t qi = 0; qi < surface.q_grid.size(); ++qi)
    if (subset == QSelection::all || surface.q_grid[qi] > 0.0) qs.push_back(qi);
  if (qs.empty()) throw std::invalid_argument("detect_scaling_range: empty q subset");

  // fluctuations indistinguishable from rounding noise cannot anchor a range
  const double f_floor = 1e-12 * surface.profile_rms;
  std::vector<char> valid(ns, 1);
  for (std::size_t j = 0; j < ns; ++j) {
    for (std::size_t qi : qs) {
      const double f = surface.f[qi][j];
      if (!std::isfinite(f) || f <= f_floor) {
        valid[j] = 0;
        break;
      }
    }
  }

  std::vector<double> ls(ns);
  for (std::size_t j = 0; j < ns; ++j) ls[j] = std::log(static_cast<double>(scales[j]));

  double best_width = 0.0;
  std::size_t best_i = 0, best_j = 0;
  bool found = false;

  std::size_t run_start = 0;
  while (run_start < ns) {
    if (!valid[run_start]) {
      ++run_start;
      continue;
    }
    std::size_t run_end = run_start;
    while (run_end + 1 < ns && valid[run_end + 1]) ++run_end;
    const std::size_t len = run_end - run_start + 1;
    if (len >= 3) {
      // local log-log slopes inside the run, one-sided at its edges
      std::vector<std::vector<double>> d(qs.size(), std::vector<double>(len));
      for (std::size_t a = 0; a < qs.size(); ++a) {
        const std::size_t qi = qs[a];
        for (std::size_t k = 0; k < len; ++k) {
          const std::size_t j = run_start + k;
          std::size_t jl = k == 0 ? j : j - 1;
          std::size_t jr = k == len - 1 ? j : j + 1;
          d[a][k] = (std::log(surface.f[qi][jr]) - std::log(surface.f[qi][jl])) /
                    (ls[jr] - ls[jl]);
        }
      }
      for (std::size_t i = 0; i + 2 < len; ++i) {
        for (std::size_t j = i + 2; j < len; ++j) {
          const double width = (ls[run_start + j] - ls[run_start + i]) / std::log(10.0);
          if (width <= best_width && found) continue;
          bool ok = true;
          for (std::size_t a = 0; a < qs.size() && ok; ++a) {
            double mean_d = 0.0;
            for (std::size_t k = i; k <= j; ++k) mean_d += d[a][k];
            mean_d /= static_cast<double>(j - i + 1);
            for (std::size_t k = i; k <= j; ++k) {
              if (!(std::abs(d[a][k] - mean_d) < slope_tol)) {
                ok = false;
                break;
              }
            }
          }
          if (ok && (!found || width > best_width)) {
            found = true;
            best_width = width;
            best_i = run_start + i;
            best_j = run_start + j;
          }
        }
      }
    }
    run_start = run_end + 1;
  }

  if (!found || best_width < min_decades) return std::nullopt;
  return ScalingRange{scales[best_i], scales[best_j], best_width};
}

HqCurve fit_generalized_hurst(const FluctuationSurface& surface, std::size_t s_lo,
                              std::size_t s_hi) {
  if (s_lo > s_hi) throw std::invalid_argument("fit_generalized_hurst: bad range");
  std::vector<std::size_t> idx;
  for (std::size_t si = 0; si < surface.scales.size(); ++si)
    if (surface.scales[si] >= s_lo && surface.scales[si] <= s_hi) idx.push_back(si);
  if (idx.size() < 8)
    throw std::invalid_argument("fit_generalized_hurst: need >= 8 scale points in range");

  HqCurve c;
  c.q = surface.q_grid;
  c.s_lo = s_lo;
  c.s_hi = s_hi;
  c.h.assign(c.q.size(), kNan);
  c.h_stderr.assign(c.q.size(), kNan);

  for (std::size_t qi = 0; qi < c.q.size(); ++qi) {
    std::vector<double> lx, ly;
    for (std::size_t si : idx) {
      const double f = surface.f[qi][si];
      if (std::isfinite(f) && f > 0.0) {
        lx.push_back(std::log(static_cast<double>(surface.scales[si])));
        ly.push_back(std::log(f));
      }
    }
    if (lx.size() < 3) continue;  // too few defined points for this moment
    const LineFit fit = fit_line(lx, ly);
    c.h[qi] = fit.slope;
    c.h_stderr[qi] = fit.slope_stderr;
  }
  return c;
}

const char* memory_class_name(MemoryClass c) {
  switch (c) {
    case MemoryClass::antipersistent: return "antipersistent";
    case MemoryClass::uncorrelated: return "uncorrelated";
    case MemoryClass::persistent: return "persistent";
  }
  return "unknown";
}

MemoryClass classify_hurst(double h) {
  if (h > 0.5) return MemoryClass::persistent;
  if (h < 0.5) return MemoryClass::antipersistent;
  return MemoryClass::uncorrelated;
}

HurstEstimate hurst_exponent(std::span<const double> u, const MfdfaConfig& cfg) {
  const FluctuationSurface surf = fluctuation_function(u, cfg);
  const HqCurve hq = fit_generalized_hurst(surf, surf.scales.front(), surf.scales.back());
  const auto qi = surf.q_index(2.0);
  if (!qi) throw std::invalid_argument("hurst_exponent: q grid lacks q = 2");
  if (!std::isfinite(hq.h[*qi]))
    throw std::runtime_error("hurst_exponent: fluctuation surface degenerate at q = 2");
  HurstEstimate e;
  e.h = hq.h[*qi];
  e.h_stderr = hq.h_stderr[*qi];
  e.cls = classify_hurst(e.h);
  return e;
}

MultifractalSpectrum singularity_spectrum(const HqCurve& hq) {
  MultifractalSpectrum sp;
  for (std::size_t i = 0; i < hq.q.size(); ++i) {
    if (std::isfinite(hq.h[i])) {
      sp.q.push_back(hq.q[i]);
      sp.h.push_back(hq.h[i]);
      sp.h_stderr.push_back(std::isfinite(hq.h_stderr[i]) ? hq.h_stderr[i] : 0.0);
    }
  }
  const std::size_t n = sp.q.size();
  if (n < 3) throw std::runtime_error("singularity_spectrum: need >= 3 defined h(q) points");

  sp.tau.resize(n);
  for (std::size_t i = 0; i < n; ++i) sp.tau[i] = sp.q[i] * sp.h[i] - 1.0;

  sp.alpha.resize(n);
  sp.f_alpha.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t il = i == 0 ? 0 : i - 1;
    const std::size_t ir = i == n - 1 ? n - 1 : i + 1;
    sp.alpha[i] = (sp.tau[ir] - sp.tau[il]) / (sp.q[ir] - sp.q[il]);
    sp.f_alpha[i] = sp.q[i] * sp.alpha[i] - sp.tau[i];
  }
  const auto [amin, amax] = std::minmax_element(sp.alpha.begin(), sp.alpha.end());
  sp.alpha_width = *amax - *amin;
  sp.f_max = *std::max_element(sp.f_alpha.begin(), sp.f_alpha.end());
  return sp;
}

}  // namespace fracta

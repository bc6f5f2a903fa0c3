#include "fracta/tail_fit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "fracta/stats.hpp"

namespace fracta {

Ccdf empirical_ccdf(std::span<const double> values, bool take_abs) {
  if (values.size() < 2) throw std::invalid_argument("empirical_ccdf: need n >= 2");
  std::vector<double> y(values.begin(), values.end());
  for (double& v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("empirical_ccdf: non-finite value");
    if (take_abs) v = std::abs(v);
    if (v < 0.0)
      throw std::invalid_argument("empirical_ccdf: negative value without take_abs");
  }

  Ccdf c;
  c.n = y.size();
  c.sigma = sample_stddev(y);
  if (!(c.sigma > 0.0)) throw std::invalid_argument("empirical_ccdf: zero variance sample");

  std::sort(y.begin(), y.end());
  // walk distinct values from the top so p = #(X >= v)/n accumulates directly
  std::size_t i = y.size();
  std::size_t tail = 0;
  std::vector<CcdfPoint> rev;
  while (i > 0) {
    const double v = y[i - 1];
    std::size_t j = i;
    while (j > 0 && y[j - 1] == v) --j;
    tail += i - j;
    if (v != 0.0)
      rev.push_back({v / c.sigma, static_cast<double>(tail) / static_cast<double>(c.n)});
    i = j;
  }
  c.points.assign(rev.rbegin(), rev.rend());
  if (c.points.empty()) throw std::invalid_argument("empirical_ccdf: all values are zero");
  return c;
}

TailRegion select_tail_region(const Ccdf& ccdf, double quantile, std::size_t min_points) {
  if (!(quantile > 0.0 && quantile < 1.0))
    throw std::invalid_argument("select_tail_region: quantile must lie in (0,1)");
  const double p_cut = 1.0 - quantile;
  // p decreases with x, so the region is the suffix with p <= p_cut
  std::size_t first = ccdf.points.size();
  for (std::size_t i = 0; i < ccdf.points.size(); ++i) {
    if (ccdf.points[i].p <= p_cut) {
      first = i;
      break;
    }
  }
  if (first == ccdf.points.size())
    throw std::runtime_error("select_tail_region: no points beyond the quantile");
  TailRegion r;
  r.x_lo = ccdf.points[first].x;
  r.x_hi = ccdf.points.back().x;
  r.n_points = ccdf.points.size() - first;
  if (r.n_points < min_points)
    throw std::runtime_error("select_tail_region: only " + std::to_string(r.n_points) +
                             " points in fit region, need " + std::to_string(min_points));
  return r;
}

namespace {

std::vector<CcdfPoint> region_points(const Ccdf& ccdf, const TailRegion& region) {
  std::vector<CcdfPoint> pts;
  for (const auto& pt : ccdf.points)
    if (pt.x >= region.x_lo && pt.x <= region.x_hi) pts.push_back(pt);
  if (pts.size() < 2) throw std::runtime_error("tail fit: fewer than two points in region");
  return pts;
}

}  // namespace

TailFit fit_power_tail(const Ccdf& ccdf, const TailRegion& region) {
  const auto pts = region_points(ccdf, region);
  std::vector<double> lx, lp;
  lx.reserve(pts.size());
  lp.reserve(pts.size());
  for (const auto& pt : pts) {
    lx.push_back(std::log(pt.x));
    lp.push_back(std::log(pt.p));
  }
  const LineFit f = fit_line(lx, lp);

  TailFit t;
  t.model = TailModel::power;
  t.exponent = -f.slope;
  t.exponent_stderr = f.slope_stderr;
  t.intercept = f.intercept;
  t.scale = 0.0;
  t.region = region;
  t.region.n_points = pts.size();
  t.residual_rms = f.residual_rms;  // already in ln p coordinates
  t.conforming = t.exponent > 0.0;
  if (!std::isfinite(t.exponent) || !std::isfinite(t.intercept))
    throw std::runtime_error("fit_power_tail: degenerate fit");
  return t;
}

TailFit fit_stretched_tail(const Ccdf& ccdf, const TailRegion& region) {
  const auto pts = region_points(ccdf, region);
  std::vector<double> lx, llp;
  for (const auto& pt : pts) {
    if (pt.p >= 1.0) continue;  // ln(-ln p) undefined at p = 1
    lx.push_back(std::log(pt.x));
    llp.push_back(std::log(-std::log(pt.p)));
  }
  if (lx.size() < 2)
    throw std::runtime_error("fit_stretched_tail: fewer than two usable points");
  const LineFit f = fit_line(lx, llp);

  TailFit t;
  t.model = TailModel::stretched;
  t.exponent = f.slope;
  t.exponent_stderr = f.slope_stderr;
  t.intercept = f.intercept;
  t.scale = f.slope != 0.0 ? std::exp(-f.intercept / f.slope) : 0.0;
  t.region = region;
  t.region.n_points = lx.size();
  // goodness in ln p coordinates: ln p_hat = -exp(beta*ln x + intercept)
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double lp_hat = -std::exp(f.slope * lx[i] + f.intercept);
    const double lp = -std::exp(llp[i]);
    rss += (lp - lp_hat) * (lp - lp_hat);
  }
  t.residual_rms = std::sqrt(rss / static_cast<double>(lx.size()));
  t.conforming = t.exponent > 0.0 && t.exponent < 1.0;
  if (!std::isfinite(t.exponent) || !std::isfinite(t.intercept))
    throw std::runtime_error("fit_stretched_tail: degenerate fit");
  if (!std::isfinite(t.scale)) {  // exp(-c/beta) can overflow for tiny beta
    t.scale = 0.0;
    t.conforming = false;
  }
  return t;
}

HillEstimate hill_estimate(std::span<const double> values, double x_min) {
  if (!(x_min > 0.0)) throw std::invalid_argument("hill_estimate: x_min must be positive");
  double acc = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    if (v >= x_min) {
      acc += std::log(v / x_min);
      ++k;
    }
  }
  if (k < 2 || !(acc > 0.0)) throw std::runtime_error("hill_estimate: degenerate tail");
  HillEstimate h;
  h.k = k;
  h.gamma = static_cast<double>(k) / acc;
  h.stderr_ = h.gamma / std::sqrt(static_cast<double>(k));
  return h;
}

bool comparable_models(const TailFit& a, const TailFit& b, double factor) {
  const double lo = std::min(a.residual_rms, b.residual_rms);
  const double hi = std::max(a.residual_rms, b.residual_rms);
  if (hi == 0.0) return true;
  if (lo == 0.0) return false;
  return hi / lo < factor;
}

void write_ccdf_csv(std::ostream& out, const Ccdf& ccdf) {
  out << "x,p\n";
  for (const auto& pt : ccdf.points)
    out << format_double(pt.x) << ',' << format_double(pt.p) << '\n';
}

Ccdf read_ccdf_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("ccdf csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,p") throw std::runtime_error("ccdf csv: expected 'x,p' header");

  Ccdf c;
  c.sigma = 1.0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("ccdf csv line " + std::to_string(lineno) + ": expected 2 fields");
    CcdfPoint pt;
    const auto [xp, xec] = std::from_chars(line.data(), line.data() + comma, pt.x);
    const auto [pp, pec] =
        std::from_chars(line.data() + comma + 1, line.data() + line.size(), pt.p);
    if (xec != std::errc{} || xp != line.data() + comma || pec != std::errc{} ||
        pp != line.data() + line.size())
      throw std::runtime_error("ccdf csv line " + std::to_string(lineno) + ": bad row");
    if (!(pt.x > 0.0) || !(pt.p > 0.0) || pt.p > 1.0)
      throw std::runtime_error("ccdf csv line " + std::to_string(lineno) + ": out of range");
    if (!c.points.empty() && (pt.x <= c.points.back().x || pt.p >= c.points.back().p))
      throw std::runtime_error("ccdf csv line " + std::to_string(lineno) +
                               ": x must increase and p decrease");
    c.points.push_back(pt);
  }
  if (c.points.empty()) throw std::runtime_error("ccdf csv: no points");
  c.n = static_cast<std::size_t>(std::llround(1.0 / c.points.back().p));
  return c;
}

}  // namespace fracta

#include "fracta/pipeline.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracta/stats.hpp"

namespace fracta {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failed for " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create " + path);
  out << content;
  if (!out.good()) throw std::runtime_error("write failed for " + path);
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).string();
}

}  // namespace

MfdfaConfig MfdfaOptions::build(std::size_t series_len, int threads) const {
  if (!(q_step > 0.0)) throw std::invalid_argument("mfdfa options: q_step must be positive");
  if (!(q_max >= q_min)) throw std::invalid_argument("mfdfa options: q_max < q_min");
  MfdfaConfig cfg = MfdfaConfig::defaults(series_len, poly_degree);
  cfg.q_grid.clear();
  const auto steps = static_cast<long long>(std::llround((q_max - q_min) / q_step));
  for (long long i = 0; i <= steps; ++i)
    cfg.q_grid.push_back(q_min + static_cast<double>(i) * q_step);
  if (!scales.empty()) cfg.scales = scales;
  cfg.variance_floor = variance_floor;
  cfg.threads = threads;
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  PipelineConfig cfg;
  const std::string raw = read_file(path);
  cfg.input_hashes.push_back({path, hex64(fnv1a64(raw.data(), raw.size()))});

  ordered_json j;
  try {
    j = ordered_json::parse(raw);
  } catch (const std::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  cfg.echo = j;

  const std::string config_dir = fs::path(path).parent_path().string();
  const char* data_dir = std::getenv("FRACTA_DATA_DIR");
  const std::string manifest_base =
      data_dir && *data_dir ? std::string(data_dir) : config_dir;

  try {
    cfg.dt = j.value("dt_seconds", std::int64_t{3600});
    if (cfg.dt <= 0) throw std::runtime_error("dt_seconds must be positive");
    const auto trim_days = j.value("trim_days", std::int64_t{7});
    if (trim_days < 0) throw std::runtime_error("trim_days must be >= 0");
    cfg.trim_seconds = trim_days * 86400;
    cfg.threads = j.value("threads", 1);
    if (cfg.threads < 1) throw std::runtime_error("threads must be >= 1");

    if (j.contains("tail")) {
      const auto& t = j.at("tail");
      cfg.tail.quantile = t.value("quantile", 0.90);
      cfg.tail.min_points = t.value("min_points", std::size_t{10});
      if (!(cfg.tail.quantile > 0.0 && cfg.tail.quantile < 1.0))
        throw std::runtime_error("tail.quantile must lie in (0,1)");
    }
    if (j.contains("acf")) cfg.acf.max_lag = j.at("acf").value("max_lag", std::size_t{0});
    if (j.contains("mfdfa")) {
      const auto& m = j.at("mfdfa");
      cfg.mfdfa.q_min = m.value("q_min", -4.0);
      cfg.mfdfa.q_max = m.value("q_max", 4.0);
      cfg.mfdfa.q_step = m.value("q_step", 0.25);
      cfg.mfdfa.poly_degree = m.value("poly_degree", 2);
      cfg.mfdfa.variance_floor = m.value("variance_floor", 0.0);
      if (m.contains("scales")) cfg.mfdfa.scales = m.at("scales").get<std::vector<std::size_t>>();
    }

    if (!j.contains("collections") || !j.at("collections").is_array() ||
        j.at("collections").empty())
      throw std::runtime_error("config needs a non-empty 'collections' array");

    for (const auto& jc : j.at("collections")) {
      CollectionInput ci;
      ci.manifest_path = jc.at("manifest").get<std::string>();
      const std::string manifest_file = resolve(manifest_base, ci.manifest_path);
      const std::string mraw = read_file(manifest_file);
      cfg.input_hashes.push_back({ci.manifest_path, hex64(fnv1a64(mraw.data(), mraw.size()))});

      ordered_json m;
      try {
        m = ordered_json::parse(mraw);
      } catch (const std::exception& e) {
        throw std::runtime_error("manifest " + manifest_file + ": " + e.what());
      }
      ci.meta.name = m.at("name").get<std::string>();
      ci.meta.start_date = parse_iso_date(m.at("start_date").get<std::string>());
      ci.meta.token_count = m.at("token_count").get<std::int64_t>();
      ci.trades_path_cfg = m.at("trades_csv").get<std::string>();
      ci.floor_path_cfg = m.at("floor_csv").get<std::string>();
      const std::string manifest_dir = fs::path(manifest_file).parent_path().string();
      ci.trades_path = resolve(manifest_dir, ci.trades_path_cfg);
      ci.floor_path = resolve(manifest_dir, ci.floor_path_cfg);
      cfg.collections.push_back(std::move(ci));
    }
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  return cfg;
}

namespace {

struct SeriesSpec {
  const char* name;
  Unit unit;
  bool take_abs;       // |.| before ccdf (and acf) for signed returns
  bool event_indexed;  // delta_t lives on the event axis
};

constexpr SeriesSpec kSeriesOrder[] = {
    {"c_sol", Unit::dimensionless, true, false},
    {"c_usd", Unit::dimensionless, true, false},
    {"r_sol", Unit::dimensionless, true, false},
    {"r_usd", Unit::dimensionless, true, false},
    {"n_trades", Unit::count, false, false},
    {"delta_t", Unit::seconds, false, true},
    {"v_sol", Unit::sol, false, false},
    {"v_usd", Unit::usd, false, false},
};

const std::vector<double>* series_values(const ObservableSet& obs, const std::string& name,
                                         std::vector<double>& scratch) {
  if (name == "c_sol") return &obs.c_sol.values;
  if (name == "c_usd") return &obs.c_usd.values;
  if (name == "r_sol") return &obs.r_sol.values;
  if (name == "r_usd") return &obs.r_usd.values;
  if (name == "n_trades") return &obs.n_trades.values;
  if (name == "v_sol") return &obs.v_sol.values;
  if (name == "v_usd") return &obs.v_usd.values;
  if (name == "delta_t") {
    scratch.clear();
    scratch.reserve(obs.delta_t.size());
    for (const auto& e : obs.delta_t) scratch.push_back(e.value);
    return &scratch;
  }
  return nullptr;
}

ObservableReport analyze_observable(const SeriesSpec& spec, std::span<const double> values,
                                    const PipelineConfig& cfg) {
  ObservableReport r;
  r.name = spec.name;
  r.unit = unit_name(spec.unit);
  if (values.size() < 2) {
    r.error = "series has fewer than two samples";
    r.power.error = r.stretched.error = r.acf_error = r.surface_error = r.hq_error =
        r.spectrum_error = r.hurst_error = r.ccdf_error = "series unavailable";
    return r;
  }
  r.present = true;
  r.series_len = values.size();

  // tail
  try {
    r.ccdf = empirical_ccdf(values, spec.take_abs);
    r.ccdf_ok = true;
  } catch (const std::exception& e) {
    r.ccdf_error = e.what();
  }
  if (r.ccdf_ok) {
    try {
      const TailRegion region =
          select_tail_region(r.ccdf, cfg.tail.quantile, cfg.tail.min_points);
      try {
        r.power.fit = fit_power_tail(r.ccdf, region);
        r.power.ok = true;
      } catch (const std::exception& e) {
        r.power.error = e.what();
      }
      try {
        r.stretched.fit = fit_stretched_tail(r.ccdf, region);
        r.stretched.ok = true;
      } catch (const std::exception& e) {
        r.stretched.error = e.what();
      }
      if (r.power.ok && r.stretched.ok)
        r.comparable = comparable_models(r.power.fit, r.stretched.fit);
    } catch (const std::exception& e) {
      r.power.error = e.what();
      r.stretched.error = e.what();
    }
  } else {
    r.power.error = "ccdf unavailable";
    r.stretched.error = "ccdf unavailable";
  }

  // acf on the same magnitude the tails describe
  try {
    std::vector<double> av;
    std::span<const double> acf_in = values;
    if (spec.take_abs) {
      av.assign(values.begin(), values.end());
      for (double& v : av) v = std::abs(v);
      acf_in = av;
    }
    std::size_t max_lag = cfg.acf.max_lag > 0 ? cfg.acf.max_lag : default_max_lag(values.size());
    max_lag = std::min(max_lag, values.size() - 1);
    if (max_lag < 1) throw std::runtime_error("series too short for autocorrelation");
    r.acf = autocorrelation(acf_in, max_lag);
    r.corr_time = correlation_time(r.acf);
    r.acf_ok = true;
  } catch (const std::exception& e) {
    r.acf_error = e.what();
  }

  // mfdfa on the raw (signed) series
  try {
    const MfdfaConfig mcfg = cfg.mfdfa.build(values.size(), cfg.threads);
    const FluctuationSurface surf = fluctuation_function(values, mcfg);
    r.surface_ok = true;
    r.profile_rms = surf.profile_rms;
    for (std::size_t si = 0; si < surf.scales.size(); ++si)
      r.scale_rows.push_back({surf.scales[si], surf.segment_counts[si],
                              surf.excluded_segments[si]});
    for (std::size_t qi = 0; qi < surf.q_grid.size(); ++qi)
      for (std::size_t si = 0; si < surf.scales.size(); ++si)
        if (std::isfinite(surf.f[qi][si]))
          r.fq.push_back({surf.scales[si], surf.q_grid[qi], surf.f[qi][si]});

    const auto range = detect_scaling_range(surf);
    if (range) {
      r.scaling_found = true;
      r.scaling = *range;
    }

    // fit over the detected range when it spans enough scales, else full grid
    std::size_t lo = surf.scales.front(), hi = surf.scales.back();
    if (range) {
      std::size_t count = 0;
      for (std::size_t s : surf.scales)
        if (s >= range->s_lo && s <= range->s_hi) ++count;
      if (count >= 8) {
        lo = range->s_lo;
        hi = range->s_hi;
      }
    }
    try {
      const HqCurve hq = fit_generalized_hurst(surf, lo, hi);
      r.hq_ok = true;
      r.fit_s_lo = lo;
      r.fit_s_hi = hi;
      for (std::size_t i = 0; i < hq.q.size(); ++i)
        if (std::isfinite(hq.h[i]))
          r.hq.push_back({hq.q[i], hq.h[i],
                          std::isfinite(hq.h_stderr[i]) ? hq.h_stderr[i] : 0.0});
      try {
        const MultifractalSpectrum sp = singularity_spectrum(hq);
        r.spectrum_ok = true;
        for (std::size_t i = 0; i < sp.alpha.size(); ++i)
          r.spectrum.push_back({sp.alpha[i], sp.f_alpha[i]});
        r.alpha_width = sp.alpha_width;
        r.f_max = sp.f_max;
      } catch (const std::exception& e) {
        r.spectrum_error = e.what();
      }
    } catch (const std::exception& e) {
      r.hq_error = e.what();
      r.spectrum_error = "h(q) unavailable";
    }

    try {
      const HqCurve full = fit_generalized_hurst(surf, surf.scales.front(), surf.scales.back());
      const auto qi = surf.q_index(2.0);
      if (!qi || !std::isfinite(full.h[*qi]))
        throw std::runtime_error("h(2) undefined for this surface");
      r.hurst = full.h[*qi];
      r.hurst_stderr = std::isfinite(full.h_stderr[*qi]) ? full.h_stderr[*qi] : 0.0;
      r.memory_class = memory_class_name(classify_hurst(r.hurst));
      r.hurst_ok = true;
    } catch (const std::exception& e) {
      r.hurst_error = e.what();
    }
  } catch (const std::exception& e) {
    r.surface_error = e.what();
    r.hq_error = "mfdfa unavailable";
    r.spectrum_error = "mfdfa unavailable";
    r.hurst_error = "mfdfa unavailable";
  }
  return r;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult result;
  Report& rep = result.report;
  rep.tool_version = kToolVersion;
  rep.config_echo = cfg.echo;
  rep.inputs = cfg.input_hashes;

  for (const auto& ci : cfg.collections) {
    CollectionReport cr;
    cr.name = ci.meta.name;
    cr.dt = cfg.dt;
    CollectionData cd;
    cd.name = ci.meta.name;

    try {
      const std::string traw = read_file(ci.trades_path);
      rep.inputs.push_back({ci.trades_path_cfg, hex64(fnv1a64(traw.data(), traw.size()))});
      const std::string fraw = read_file(ci.floor_path);
      rep.inputs.push_back({ci.floor_path_cfg, hex64(fnv1a64(fraw.data(), fraw.size()))});

      std::istringstream tin(traw), fin(fraw);
      const auto trades = parse_trades(tin, ci.meta);
      const auto quotes = parse_floor_quotes(fin);
      if (trades.empty()) throw std::runtime_error("no trades");
      if (quotes.empty()) throw std::runtime_error("no floor quotes");

      const auto trimmed_trades = trim_launch_window(trades, cfg.trim_seconds);
      const auto trimmed_quotes = trim_launch_window(quotes, cfg.trim_seconds);
      cr.all_trimmed_trades = trimmed_trades.all_trimmed;
      cr.all_trimmed_quotes = trimmed_quotes.all_trimmed;
      if (trimmed_trades.all_trimmed)
        throw std::runtime_error("launch-window trim removed every trade");
      if (trimmed_quotes.all_trimmed)
        throw std::runtime_error("launch-window trim removed every floor quote");

      cd.obs = build_observables(trimmed_trades.events, trimmed_quotes.events, cfg.dt);
      cd.ok = true;
      cr.t0 = cd.obs.t0;
      cr.summary = collection_summary(cd.obs, ci.meta);
      cr.ok = true;

      std::vector<double> scratch;
      for (const auto& spec : kSeriesOrder) {
        const auto* vals = series_values(cd.obs, spec.name, scratch);
        cr.observables.push_back(analyze_observable(spec, *vals, cfg));
      }
    } catch (const std::exception& e) {
      cr.ok = false;
      cr.error = e.what();
    }
    rep.collections.push_back(std::move(cr));
    result.data.push_back(std::move(cd));
  }
  return result;
}

std::string sanitize_name(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char ch : name) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '-' || ch == '_' || ch == '.';
    out.push_back(keep ? ch : '_');
  }
  return out.empty() ? std::string("unnamed") : out;
}

namespace {

ordered_json summary_json_entry(const CollectionReport& c) {
  auto opt = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  return ordered_json{{"start_date", c.summary.start_date},
                      {"token_count", c.summary.token_count},
                      {"grid_len", c.summary.grid_len},
                      {"trade_count", c.summary.trade_count},
                      {"mean_delta_t", opt(c.summary.mean_delta_t)},
                      {"mean_n", opt(c.summary.mean_n)},
                      {"mean_v_sol", opt(c.summary.mean_v_sol)},
                      {"zero_frac_c", opt(c.summary.zero_frac_c)},
                      {"zero_frac_r", opt(c.summary.zero_frac_r)}};
}

std::string curves_csv(const ObservableReport& o, const char* kind, std::int64_t dt) {
  std::ostringstream ss;
  if (std::string(kind) == "ccdf") {
    ss << "x,p\n";
    for (const auto& p : o.ccdf.points)
      ss << format_double(p.x) << ',' << format_double(p.p) << '\n';
  } else if (std::string(kind) == "acf") {
    // delta_t correlations live on the event axis; tau_hours then carries
    // the lag itself
    ss << "lag,tau_hours,A\n";
    const bool event_indexed = o.name == "delta_t";
    for (std::size_t k = 0; k < o.acf.a.size(); ++k) {
      const double tau = event_indexed
                             ? static_cast<double>(k)
                             : static_cast<double>(k) * static_cast<double>(dt) / 3600.0;
      ss << k << ',' << format_double(tau) << ',' << format_double(o.acf.a[k]) << '\n';
    }
  } else if (std::string(kind) == "fq") {
    ss << "s,q,F\n";
    for (const auto& r : o.fq)
      ss << r.s << ',' << format_double(r.q) << ',' << format_double(r.f) << '\n';
  } else if (std::string(kind) == "hq") {
    ss << "q,h,stderr\n";
    for (const auto& r : o.hq)
      ss << format_double(r.q) << ',' << format_double(r.h) << ','
         << format_double(r.h_stderr) << '\n';
  } else {
    ss << "alpha,f\n";
    for (const auto& r : o.spectrum)
      ss << format_double(r.alpha) << ',' << format_double(r.f) << '\n';
  }
  return ss.str();
}

}  // namespace

void emit_report(const PipelineResult& result, const std::string& out_dir) {
  const Report& rep = result.report;
  fs::create_directories(out_dir);

  write_file((fs::path(out_dir) / "report.json").string(),
             report_to_json(rep).dump(2) + "\n");

  ordered_json summary, tails, hurst;
  for (const auto& c : rep.collections) {
    summary[c.name] = summary_json_entry(c);
    ordered_json tcol, hcol;
    for (const auto& o : c.observables) {
      ordered_json cell;
      cell["power"] = o.power.ok ? tail_fit_json(o.power.fit) : ordered_json(nullptr);
      cell["stretched"] =
          o.stretched.ok ? tail_fit_json(o.stretched.fit) : ordered_json(nullptr);
      cell["comparable"] = o.comparable;
      tcol[o.name] = std::move(cell);

      ordered_json hcell;
      if (o.hurst_ok) {
        hcell["H"] = o.hurst;
        hcell["stderr"] = o.hurst_stderr;
        hcell["class"] = o.memory_class;
      } else {
        hcell["H"] = nullptr;
        hcell["error"] = o.hurst_error;
      }
      hcell["scaling_range"] =
          o.scaling_found ? ordered_json::array({o.scaling.s_lo, o.scaling.s_hi})
                          : ordered_json(nullptr);
      hcol[o.name] = std::move(hcell);
    }
    tails[c.name] = std::move(tcol);
    hurst[c.name] = std::move(hcol);
  }
  write_file((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  write_file((fs::path(out_dir) / "tailfits.json").string(), tails.dump(2) + "\n");
  write_file((fs::path(out_dir) / "hurst.json").string(), hurst.dump(2) + "\n");

  for (std::size_t i = 0; i < rep.collections.size(); ++i) {
    const auto& c = rep.collections[i];
    if (!c.ok) continue;
    const fs::path cdir = fs::path(out_dir) / sanitize_name(c.name);
    fs::create_directories(cdir);

    if (i < result.data.size() && result.data[i].ok) {
      const ObservableSet& obs = result.data[i].obs;
      auto dump_series = [&](const char* name, const SampledSeries& s) {
        std::ostringstream ss;
        write_series_csv(ss, s);
        write_file((cdir / (std::string("series_") + name + ".csv")).string(), ss.str());
      };
      dump_series("c_sol", obs.c_sol);
      dump_series("c_usd", obs.c_usd);
      dump_series("r_sol", obs.r_sol);
      dump_series("r_usd", obs.r_usd);
      dump_series("n_trades", obs.n_trades);
      dump_series("v_sol", obs.v_sol);
      dump_series("v_usd", obs.v_usd);
      if (!obs.delta_t.empty()) {
        std::vector<double> gaps;
        gaps.reserve(obs.delta_t.size());
        for (const auto& e : obs.delta_t) gaps.push_back(e.value);
        std::ostringstream ss;
        write_indexed_csv(ss, gaps);
        write_file((cdir / "series_delta_t.csv").string(), ss.str());
      }
    }

    for (const auto& o : c.observables) {
      if (o.ccdf_ok)
        write_file((cdir / ("ccdf_" + o.name + ".csv")).string(), curves_csv(o, "ccdf", c.dt));
      if (o.acf_ok)
        write_file((cdir / ("acf_" + o.name + ".csv")).string(), curves_csv(o, "acf", c.dt));
      if (o.surface_ok)
        write_file((cdir / ("fq_" + o.name + ".csv")).string(), curves_csv(o, "fq", c.dt));
      if (o.hq_ok)
        write_file((cdir / ("hq_" + o.name + ".csv")).string(), curves_csv(o, "hq", c.dt));
      if (o.spectrum_ok)
        write_file((cdir / ("spectrum_" + o.name + ".csv")).string(),
                   curves_csv(o, "spectrum", c.dt));
    }
  }
}

}  // namespace fracta

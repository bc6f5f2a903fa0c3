#include "fracta/report.hpp"

namespace fracta {

using nlohmann::ordered_json;

namespace {

ordered_json opt_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<double> opt_from_json(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ordered_json tail_fit_to_json(const TailFit& f) { return tail_fit_json(f); }

TailFit tail_fit_from_json(const ordered_json& j) {
  TailFit f;
  f.model = j.at("model").get<std::string>() == "power" ? TailModel::power : TailModel::stretched;
  f.exponent = j.at("exponent").get<double>();
  f.exponent_stderr = j.at("exponent_stderr").get<double>();
  f.scale = j.at("scale").get<double>();
  f.intercept = j.at("intercept").get<double>();
  f.region.x_lo = j.at("region").at("x_lo").get<double>();
  f.region.x_hi = j.at("region").at("x_hi").get<double>();
  f.region.n_points = j.at("region").at("n_points").get<std::size_t>();
  f.residual_rms = j.at("residual_rms").get<double>();
  f.conforming = j.at("conforming").get<bool>();
  return f;
}

ordered_json tail_cell_to_json(const TailCell& c) {
  ordered_json j{{"ok", c.ok}, {"error", c.error}};
  if (c.ok) j["fit"] = tail_fit_to_json(c.fit);
  return j;
}

TailCell tail_cell_from_json(const ordered_json& j) {
  TailCell c;
  c.ok = j.at("ok").get<bool>();
  c.error = j.at("error").get<std::string>();
  if (c.ok) c.fit = tail_fit_from_json(j.at("fit"));
  return c;
}

ordered_json observable_to_json(const ObservableReport& o) {
  ordered_json j;
  j["name"] = o.name;
  j["unit"] = o.unit;
  j["present"] = o.present;
  j["error"] = o.error;
  j["series_len"] = o.series_len;

  j["ccdf"] = {{"ok", o.ccdf_ok}, {"error", o.ccdf_error}};
  if (o.ccdf_ok) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : o.ccdf.points) pts.push_back(ordered_json::array({p.x, p.p}));
    j["ccdf"]["sigma"] = o.ccdf.sigma;
    j["ccdf"]["n"] = o.ccdf.n;
    j["ccdf"]["points"] = std::move(pts);
  }

  j["power"] = tail_cell_to_json(o.power);
  j["stretched"] = tail_cell_to_json(o.stretched);
  j["comparable"] = o.comparable;

  j["acf"] = {{"ok", o.acf_ok}, {"error", o.acf_error}};
  if (o.acf_ok) {
    j["acf"]["series_len"] = o.acf.series_len;
    j["acf"]["a"] = o.acf.a;
    j["acf"]["correlation_time"] = {{"lag", o.corr_time.lag},
                                    {"censored", o.corr_time.censored},
                                    {"threshold", o.corr_time.threshold}};
  }

  j["mfdfa"] = {{"ok", o.surface_ok}, {"error", o.surface_error}};
  if (o.surface_ok) {
    j["mfdfa"]["profile_rms"] = o.profile_rms;
    ordered_json rows = ordered_json::array();
    for (const auto& r : o.fq) rows.push_back(ordered_json::array({r.s, r.q, r.f}));
    j["mfdfa"]["fq"] = std::move(rows);
    ordered_json srows = ordered_json::array();
    for (const auto& r : o.scale_rows)
      srows.push_back(ordered_json::array({r.s, r.segments, r.excluded}));
    j["mfdfa"]["scales"] = std::move(srows);
  }

  j["scaling"] = {{"found", o.scaling_found}};
  if (o.scaling_found) {
    j["scaling"]["s_lo"] = o.scaling.s_lo;
    j["scaling"]["s_hi"] = o.scaling.s_hi;
    j["scaling"]["decades"] = o.scaling.decades;
  }

  j["hq"] = {{"ok", o.hq_ok}, {"error", o.hq_error}};
  if (o.hq_ok) {
    j["hq"]["s_lo"] = o.fit_s_lo;
    j["hq"]["s_hi"] = o.fit_s_hi;
    ordered_json rows = ordered_json::array();
    for (const auto& r : o.hq) rows.push_back(ordered_json::array({r.q, r.h, r.h_stderr}));
    j["hq"]["rows"] = std::move(rows);
  }

  j["spectrum"] = {{"ok", o.spectrum_ok}, {"error", o.spectrum_error}};
  if (o.spectrum_ok) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : o.spectrum) rows.push_back(ordered_json::array({r.alpha, r.f}));
    j["spectrum"]["rows"] = std::move(rows);
    j["spectrum"]["alpha_width"] = o.alpha_width;
    j["spectrum"]["f_max"] = o.f_max;
  }

  j["hurst"] = {{"ok", o.hurst_ok}, {"error", o.hurst_error}};
  if (o.hurst_ok) {
    j["hurst"]["h"] = o.hurst;
    j["hurst"]["stderr"] = o.hurst_stderr;
    j["hurst"]["class"] = o.memory_class;
  }
  return j;
}

ObservableReport observable_from_json(const ordered_json& j) {
  ObservableReport o;
  o.name = j.at("name").get<std::string>();
  o.unit = j.at("unit").get<std::string>();
  o.present = j.at("present").get<bool>();
  o.error = j.at("error").get<std::string>();
  o.series_len = j.at("series_len").get<std::uint64_t>();

  const auto& jc = j.at("ccdf");
  o.ccdf_ok = jc.at("ok").get<bool>();
  o.ccdf_error = jc.at("error").get<std::string>();
  if (o.ccdf_ok) {
    o.ccdf.sigma = jc.at("sigma").get<double>();
    o.ccdf.n = jc.at("n").get<std::size_t>();
    for (const auto& p : jc.at("points"))
      o.ccdf.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }

  o.power = tail_cell_from_json(j.at("power"));
  o.stretched = tail_cell_from_json(j.at("stretched"));
  o.comparable = j.at("comparable").get<bool>();

  const auto& ja = j.at("acf");
  o.acf_ok = ja.at("ok").get<bool>();
  o.acf_error = ja.at("error").get<std::string>();
  if (o.acf_ok) {
    o.acf.series_len = ja.at("series_len").get<std::size_t>();
    o.acf.a = ja.at("a").get<std::vector<double>>();
    o.corr_time.lag = ja.at("correlation_time").at("lag").get<std::size_t>();
    o.corr_time.censored = ja.at("correlation_time").at("censored").get<bool>();
    o.corr_time.threshold = ja.at("correlation_time").at("threshold").get<double>();
  }

  const auto& jm = j.at("mfdfa");
  o.surface_ok = jm.at("ok").get<bool>();
  o.surface_error = jm.at("error").get<std::string>();
  if (o.surface_ok) {
    o.profile_rms = jm.at("profile_rms").get<double>();
    for (const auto& r : jm.at("fq"))
      o.fq.push_back({r.at(0).get<std::uint64_t>(), r.at(1).get<double>(), r.at(2).get<double>()});
    for (const auto& r : jm.at("scales"))
      o.scale_rows.push_back({r.at(0).get<std::uint64_t>(), r.at(1).get<std::uint64_t>(),
                              r.at(2).get<std::uint64_t>()});
  }

  const auto& js = j.at("scaling");
  o.scaling_found = js.at("found").get<bool>();
  if (o.scaling_found) {
    o.scaling.s_lo = js.at("s_lo").get<std::size_t>();
    o.scaling.s_hi = js.at("s_hi").get<std::size_t>();
    o.scaling.decades = js.at("decades").get<double>();
  }

  const auto& jh = j.at("hq");
  o.hq_ok = jh.at("ok").get<bool>();
  o.hq_error = jh.at("error").get<std::string>();
  if (o.hq_ok) {
    o.fit_s_lo = jh.at("s_lo").get<std::uint64_t>();
    o.fit_s_hi = jh.at("s_hi").get<std::uint64_t>();
    for (const auto& r : jh.at("rows"))
      o.hq.push_back({r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()});
  }

  const auto& jp = j.at("spectrum");
  o.spectrum_ok = jp.at("ok").get<bool>();
  o.spectrum_error = jp.at("error").get<std::string>();
  if (o.spectrum_ok) {
    for (const auto& r : jp.at("rows"))
      o.spectrum.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    o.alpha_width = jp.at("alpha_width").get<double>();
    o.f_max = jp.at("f_max").get<double>();
  }

  const auto& ju = j.at("hurst");
  o.hurst_ok = ju.at("ok").get<bool>();
  o.hurst_error = ju.at("error").get<std::string>();
  if (o.hurst_ok) {
    o.hurst = ju.at("h").get<double>();
    o.hurst_stderr = ju.at("stderr").get<double>();
    o.memory_class = ju.at("class").get<std::string>();
  }
  return o;
}

ordered_json summary_to_json(const SummaryStats& s) {
  return ordered_json{{"collection", s.collection},
                      {"start_date", s.start_date},
                      {"token_count", s.token_count},
                      {"grid_len", s.grid_len},
                      {"trade_count", s.trade_count},
                      {"mean_delta_t", opt_to_json(s.mean_delta_t)},
                      {"mean_n", opt_to_json(s.mean_n)},
                      {"mean_v_sol", opt_to_json(s.mean_v_sol)},
                      {"zero_frac_c", opt_to_json(s.zero_frac_c)},
                      {"zero_frac_r", opt_to_json(s.zero_frac_r)}};
}

SummaryStats summary_from_json(const ordered_json& j) {
  SummaryStats s;
  s.collection = j.at("collection").get<std::string>();
  s.start_date = j.at("start_date").get<std::string>();
  s.token_count = j.at("token_count").get<std::int64_t>();
  s.grid_len = j.at("grid_len").get<std::size_t>();
  s.trade_count = j.at("trade_count").get<std::size_t>();
  s.mean_delta_t = opt_from_json(j.at("mean_delta_t"));
  s.mean_n = opt_from_json(j.at("mean_n"));
  s.mean_v_sol = opt_from_json(j.at("mean_v_sol"));
  s.zero_frac_c = opt_from_json(j.at("zero_frac_c"));
  s.zero_frac_r = opt_from_json(j.at("zero_frac_r"));
  return s;
}

}  // namespace

nlohmann::ordered_json tail_fit_json(const TailFit& f) {
  return ordered_json{{"model", f.model == TailModel::power ? "power" : "stretched"},
                      {"exponent", f.exponent},
                      {"exponent_stderr", f.exponent_stderr},
                      {"scale", f.scale},
                      {"intercept", f.intercept},
                      {"region",
                       {{"x_lo", f.region.x_lo},
                        {"x_hi", f.region.x_hi},
                        {"n_points", f.region.n_points}}},
                      {"residual_rms", f.residual_rms},
                      {"conforming", f.conforming}};
}

bool Report::has_failures() const { return !failure_messages().empty(); }

std::vector<std::string> Report::failure_messages() const {
  std::vector<std::string> out;
  for (const auto& c : collections) {
    if (!c.ok) {
      out.push_back(c.name + ": " + (c.error.empty() ? "failed" : c.error));
      continue;
    }
    for (const auto& o : c.observables) {
      const std::string prefix = c.name + "/" + o.name + ": ";
      if (!o.present) {
        out.push_back(prefix + (o.error.empty() ? "missing" : o.error));
        continue;
      }
      if (!o.ccdf_ok) out.push_back(prefix + "ccdf: " + o.ccdf_error);
      if (!o.power.ok) out.push_back(prefix + "power fit: " + o.power.error);
      if (!o.stretched.ok) out.push_back(prefix + "stretched fit: " + o.stretched.error);
      if (!o.acf_ok) out.push_back(prefix + "acf: " + o.acf_error);
      if (!o.surface_ok) out.push_back(prefix + "mfdfa: " + o.surface_error);
      if (!o.hq_ok) out.push_back(prefix + "hq: " + o.hq_error);
      if (!o.spectrum_ok) out.push_back(prefix + "spectrum: " + o.spectrum_error);
      if (!o.hurst_ok) out.push_back(prefix + "hurst: " + o.hurst_error);
    }
  }
  return out;
}

nlohmann::ordered_json report_to_json(const Report& report) {
  ordered_json j;
  j["tool_version"] = report.tool_version;
  j["config"] = report.config_echo;
  ordered_json inputs = ordered_json::array();
  for (const auto& h : report.inputs)
    inputs.push_back(ordered_json{{"path", h.path}, {"fnv1a64", h.fnv1a64_hex}});
  j["inputs"] = std::move(inputs);

  ordered_json cols = ordered_json::array();
  for (const auto& c : report.collections) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["ok"] = c.ok;
    jc["error"] = c.error;
    jc["all_trimmed_trades"] = c.all_trimmed_trades;
    jc["all_trimmed_quotes"] = c.all_trimmed_quotes;
    jc["t0"] = c.t0;
    jc["dt"] = c.dt;
    jc["summary"] = summary_to_json(c.summary);
    ordered_json obs = ordered_json::array();
    for (const auto& o : c.observables) obs.push_back(observable_to_json(o));
    jc["observables"] = std::move(obs);
    cols.push_back(std::move(jc));
  }
  j["collections"] = std::move(cols);
  return j;
}

Report report_from_json(const nlohmann::ordered_json& j) {
  Report r;
  r.tool_version = j.at("tool_version").get<std::string>();
  r.config_echo = j.at("config");
  for (const auto& h : j.at("inputs"))
    r.inputs.push_back({h.at("path").get<std::string>(), h.at("fnv1a64").get<std::string>()});
  for (const auto& jc : j.at("collections")) {
    CollectionReport c;
    c.name = jc.at("name").get<std::string>();
    c.ok = jc.at("ok").get<bool>();
    c.error = jc.at("error").get<std::string>();
    c.all_trimmed_trades = jc.at("all_trimmed_trades").get<bool>();
    c.all_trimmed_quotes = jc.at("all_trimmed_quotes").get<bool>();
    c.t0 = jc.at("t0").get<std::int64_t>();
    c.dt = jc.at("dt").get<std::int64_t>();
    c.summary = summary_from_json(jc.at("summary"));
    for (const auto& jo : jc.at("observables")) c.observables.push_back(observable_from_json(jo));
    r.collections.push_back(std::move(c));
  }
  return r;
}

}  // namespace fracta

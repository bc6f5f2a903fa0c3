#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracta/pipeline.hpp"
#include "fracta/synth.hpp"

namespace {

using nlohmann::ordered_json;

std::map<std::string, double> parse_params(const std::string& spec) {
  std::map<std::string, double> out;
  if (spec.empty()) return out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("bad --params entry '" + item + "', expected key=value");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

double need(const std::map<std::string, double>& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw std::runtime_error("missing parameter '" + key + "'");
  return it->second;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads_override) {
  fracta::PipelineConfig cfg;
  try {
    cfg = fracta::load_pipeline_config(config_path);
    if (threads_override > 0) cfg.threads = threads_override;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const fracta::PipelineResult result = fracta::run_pipeline(cfg);
  fracta::emit_report(result, out_dir);

  for (const auto& c : result.report.collections) {
    if (c.ok) {
      std::cout << c.name << ": T=" << c.summary.grid_len
                << " trades=" << c.summary.trade_count << "\n";
    } else {
      std::cout << c.name << ": FAILED (" << c.error << ")\n";
    }
  }
  const auto failures = result.report.failure_messages();
  for (const auto& f : failures) std::cerr << "warning: " << f << "\n";
  std::cout << "report written to " << out_dir << "\n";
  return failures.empty() ? 0 : 2;
}

int cmd_synth(const std::string& model, const std::string& params, std::uint64_t seed,
              const std::string& out_path) {
  const auto p = parse_params(params);
  std::vector<double> values;
  if (model == "fgn") {
    values = fracta::gen_fgn(need(p, "hurst"), static_cast<std::size_t>(need(p, "n")), seed);
  } else if (model == "cascade") {
    values = fracta::gen_binomial_cascade(need(p, "a"), static_cast<int>(need(p, "levels")), seed);
  } else if (model == "pareto") {
    values = fracta::gen_pareto(need(p, "gamma"), static_cast<std::size_t>(need(p, "n")), seed);
  } else if (model == "weibull") {
    values = fracta::gen_weibull(need(p, "beta"), static_cast<std::size_t>(need(p, "n")), seed);
  } else if (model == "ar1") {
    values = fracta::gen_ar1(need(p, "phi"), static_cast<std::size_t>(need(p, "n")), seed);
  } else {
    throw std::runtime_error("unknown model '" + model +
                             "' (expected fgn|cascade|pareto|weibull|ar1)");
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create " + out_path);
  fracta::write_indexed_csv(out, values);
  if (!out.good()) throw std::runtime_error("write failed for " + out_path);
  std::cout << values.size() << " samples -> " << out_path << "\n";
  return 0;
}

int cmd_fit(const std::string& ccdf_path, const std::string& model, double quantile,
            std::size_t min_points) {
  std::ifstream in(ccdf_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + ccdf_path);
  const fracta::Ccdf ccdf = fracta::read_ccdf_csv(in);
  const fracta::TailRegion region = fracta::select_tail_region(ccdf, quantile, min_points);
  fracta::TailFit fit;
  if (model == "power") {
    fit = fracta::fit_power_tail(ccdf, region);
  } else if (model == "stretched") {
    fit = fracta::fit_stretched_tail(ccdf, region);
  } else {
    throw std::runtime_error("unknown model '" + model + "' (expected power|stretched)");
  }
  std::cout << fracta::tail_fit_json(fit).dump(2) << "\n";
  return 0;
}

int cmd_mfdfa(const std::string& input_path, const fracta::MfdfaOptions& opts, int threads) {
  std::ifstream in(input_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + input_path);
  const fracta::SeriesFile sf = fracta::read_series_csv(in);
  if (sf.values.size() < 2) throw std::runtime_error("series too short");

  const fracta::MfdfaConfig cfg = opts.build(sf.values.size(), threads);
  const fracta::FluctuationSurface surf = fracta::fluctuation_function(sf.values, cfg);
  const auto range = fracta::detect_scaling_range(surf);

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
  const fracta::HqCurve hq = fracta::fit_generalized_hurst(surf, lo, hi);

  ordered_json j;
  j["series_len"] = surf.series_len;
  j["scales"] = surf.scales;
  if (range) {
    j["scaling_range"] = {{"s_lo", range->s_lo}, {"s_hi", range->s_hi},
                          {"decades", range->decades}};
  } else {
    j["scaling_range"] = nullptr;
  }

  ordered_json hq_rows = ordered_json::array();
  for (std::size_t i = 0; i < hq.q.size(); ++i)
    if (std::isfinite(hq.h[i]))
      hq_rows.push_back(ordered_json::array(
          {hq.q[i], hq.h[i], std::isfinite(hq.h_stderr[i]) ? hq.h_stderr[i] : 0.0}));
  j["hq"] = {{"s_lo", lo}, {"s_hi", hi}, {"rows", std::move(hq_rows)}};

  try {
    const fracta::MultifractalSpectrum sp = fracta::singularity_spectrum(hq);
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < sp.alpha.size(); ++i)
      rows.push_back(ordered_json::array({sp.alpha[i], sp.f_alpha[i]}));
    j["spectrum"] = {{"rows", std::move(rows)},
                     {"alpha_width", sp.alpha_width},
                     {"f_max", sp.f_max}};
  } catch (const std::exception& e) {
    j["spectrum"] = {{"error", e.what()}};
  }

  const fracta::HqCurve full = fracta::fit_generalized_hurst(surf, surf.scales.front(),
                                                             surf.scales.back());
  const auto qi = surf.q_index(2.0);
  if (qi && std::isfinite(full.h[*qi])) {
    j["hurst"] = {{"h", full.h[*qi]},
                  {"stderr", std::isfinite(full.h_stderr[*qi]) ? full.h_stderr[*qi] : 0.0},
                  {"class", fracta::memory_class_name(fracta::classify_hurst(full.h[*qi]))}};
  } else {
    j["hurst"] = nullptr;
  }

  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NFT market statistics pipeline"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run the full pipeline over a config");
  std::string run_config, run_out;
  int run_threads = 0;
  run->add_option("--config", run_config, "pipeline config JSON")->required();
  run->add_option("--out", run_out, "output directory")->required();
  run->add_option("--threads", run_threads, "worker threads (default from config)");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a reference series");
  std::string synth_model, synth_params, synth_out;
  std::uint64_t synth_seed = 1;
  synth->add_option("model", synth_model, "fgn|cascade|pareto|weibull|ar1")->required();
  synth->add_option("--params", synth_params, "comma list, e.g. hurst=0.7,n=16384")->required();
  synth->add_option("--seed", synth_seed, "rng seed (default 1)");
  synth->add_option("--out", synth_out, "output CSV (index,value)")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "fit a tail model to a ccdf file");
  std::string fit_ccdf, fit_model;
  double fit_quantile = 0.90;
  std::size_t fit_min_points = 10;
  fit->add_option("--ccdf", fit_ccdf, "ccdf CSV (x,p)")->required();
  fit->add_option("--model", fit_model, "power|stretched")->required();
  fit->add_option("--quantile", fit_quantile, "fit region start quantile (default 0.90)");
  fit->add_option("--min-points", fit_min_points, "minimum points in region (default 10)");

  // mfdfa
  auto* mf = app.add_subcommand("mfdfa", "multifractal analysis of a series file");
  std::string mf_input;
  fracta::MfdfaOptions mf_opts;
  std::vector<std::size_t> mf_scales;
  int mf_threads = 1;
  mf->add_option("--input", mf_input, "series CSV (timestamp,value or index,value)")->required();
  mf->add_option("--q-min", mf_opts.q_min, "lowest q (default -4)");
  mf->add_option("--q-max", mf_opts.q_max, "highest q (default 4)");
  mf->add_option("--q-step", mf_opts.q_step, "q spacing (default 0.25)");
  mf->add_option("--degree", mf_opts.poly_degree, "detrending order (default 2)");
  mf->add_option("--variance-floor", mf_opts.variance_floor,
                 "segment variance exclusion floor (default 0)");
  mf->add_option("--scales", mf_scales, "explicit scale list (default log-spaced)");
  mf->add_option("--threads", mf_threads, "worker threads (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_config, run_out, run_threads);
    if (synth->parsed()) return cmd_synth(synth_model, synth_params, synth_seed, synth_out);
    if (fit->parsed()) return cmd_fit(fit_ccdf, fit_model, fit_quantile, fit_min_points);
    if (mf->parsed()) {
      mf_opts.scales = mf_scales;
      return cmd_mfdfa(mf_input, mf_opts, mf_threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracta/report.hpp"

namespace fracta {

inline constexpr const char* kToolVersion = "0.1.0";

struct TailOptions {
  double quantile = 0.90;       // fit region starts at this sample quantile
  std::size_t min_points = 10;  // required ccdf points in the region
};

struct AcfOptions {
  std::size_t max_lag = 0;  // 0 = min(T/4, 2000)
};

struct MfdfaOptions {
  double q_min = -4.0, q_max = 4.0, q_step = 0.25;
  int poly_degree = 2;
  double variance_floor = 0.0;
  std::vector<std::size_t> scales;  // empty = log-spaced defaults for the series

  MfdfaConfig build(std::size_t series_len, int threads) const;
};

struct CollectionInput {
  std::string manifest_path;  // as written in the run config
  CollectionMeta meta;
  std::string trades_path;      // resolved for reading
  std::string floor_path;
  std::string trades_path_cfg;  // as written in the manifest (provenance)
  std::string floor_path_cfg;
};

struct PipelineConfig {
  std::vector<CollectionInput> collections;
  std::int64_t dt = 3600;
  std::int64_t trim_seconds = 7 * 86400;
  TailOptions tail;
  AcfOptions acf;
  MfdfaOptions mfdfa;
  int threads = 1;
  nlohmann::ordered_json echo;          // run config as loaded
  std::vector<InputHash> input_hashes;  // config + manifests, in read order
};

// Reads the run config plus every referenced collection manifest.  Relative
// manifest paths resolve against $FRACTA_DATA_DIR when set, else against the
// config file's directory; paths inside a manifest resolve against the
// manifest's directory.  Throws std::runtime_error with context on any
// structural problem (missing file, bad JSON, bad field).
PipelineConfig load_pipeline_config(const std::string& path);

struct CollectionData {
  std::string name;
  bool ok = false;
  ObservableSet obs;
};

struct PipelineResult {
  Report report;
  std::vector<CollectionData> data;  // parallel to report.collections
};

// Runs every collection cell-by-cell; a failing stage records its message in
// the report and never aborts the rest of the run.  Output is a pure function
// of config + input bytes: rerunning (at any thread count) reproduces the
// report bit-for-bit.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// out_dir/report.json        full report document
// out_dir/summary.json       per-collection activity table
// out_dir/tailfits.json      per-observable tail exponents
// out_dir/hurst.json         per-observable Hurst estimates
// out_dir/<collection>/      series_*.csv, ccdf_*.csv, acf_*.csv,
//                            fq_*.csv, hq_*.csv, spectrum_*.csv
void emit_report(const PipelineResult& result, const std::string& out_dir);

std::string sanitize_name(const std::string& name);

}  // namespace fracta

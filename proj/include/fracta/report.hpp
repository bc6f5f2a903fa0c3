#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracta/correlation.hpp"
#include "fracta/mfdfa.hpp"
#include "fracta/observables.hpp"
#include "fracta/tail_fit.hpp"

namespace fracta {

// Everything the pipeline reports is stored NaN-free: undefined table cells
// are simply absent, and failed stages carry ok = false plus a message.  That
// keeps defaulted equality meaningful and makes the JSON round trip lossless
// (serialized doubles are re-read bit-exactly).

struct InputHash {
  std::string path;  // as configured, not resolved, so reports stay portable
  std::string fnv1a64_hex;
  bool operator==(const InputHash&) const = default;
};

struct TailCell {
  bool ok = false;
  std::string error;
  TailFit fit;
  bool operator==(const TailCell&) const = default;
};

struct FqRow {
  std::uint64_t s = 0;
  double q = 0.0;
  double f = 0.0;
  bool operator==(const FqRow&) const = default;
};

struct ScaleRow {
  std::uint64_t s = 0;
  std::uint64_t segments = 0;
  std::uint64_t excluded = 0;  // flat segments dropped from q <= 0 averages
  bool operator==(const ScaleRow&) const = default;
};

struct HqRow {
  double q = 0.0;
  double h = 0.0;
  double h_stderr = 0.0;
  bool operator==(const HqRow&) const = default;
};

struct SpectrumRow {
  double alpha = 0.0;
  double f = 0.0;
  bool operator==(const SpectrumRow&) const = default;
};

struct ObservableReport {
  std::string name;
  std::string unit;
  bool present = false;
  std::string error;  // set when the series could not be built at all
  std::uint64_t series_len = 0;

  bool ccdf_ok = false;
  std::string ccdf_error;
  Ccdf ccdf;

  TailCell power;
  TailCell stretched;
  bool comparable = false;

  bool acf_ok = false;
  std::string acf_error;
  AcfCurve acf;
  CorrelationTime corr_time;

  bool surface_ok = false;
  std::string surface_error;
  std::vector<FqRow> fq;           // finite F cells only
  std::vector<ScaleRow> scale_rows;
  double profile_rms = 0.0;

  bool scaling_found = false;
  ScalingRange scaling;

  bool hq_ok = false;
  std::string hq_error;
  std::vector<HqRow> hq;  // defined h(q) rows over [fit_s_lo, fit_s_hi]
  std::uint64_t fit_s_lo = 0, fit_s_hi = 0;

  bool spectrum_ok = false;
  std::string spectrum_error;
  std::vector<SpectrumRow> spectrum;
  double alpha_width = 0.0;
  double f_max = 0.0;

  bool hurst_ok = false;
  std::string hurst_error;
  double hurst = 0.0;
  double hurst_stderr = 0.0;
  std::string memory_class;

  bool operator==(const ObservableReport&) const = default;
};

struct CollectionReport {
  std::string name;
  bool ok = false;      // observables were built
  std::string error;    // collection-level failure
  bool all_trimmed_trades = false;
  bool all_trimmed_quotes = false;
  std::int64_t t0 = 0;
  std::int64_t dt = 0;
  SummaryStats summary;
  std::vector<ObservableReport> observables;
  bool operator==(const CollectionReport&) const = default;
};

struct Report {
  std::string tool_version;
  nlohmann::ordered_json config_echo;
  std::vector<InputHash> inputs;
  std::vector<CollectionReport> collections;

  bool has_failures() const;
  std::vector<std::string> failure_messages() const;
  bool operator==(const Report&) const = default;
};

nlohmann::ordered_json report_to_json(const Report& report);
Report report_from_json(const nlohmann::ordered_json& j);

// single-fit JSON object, shared by tailfits.json and the fit subcommand
nlohmann::ordered_json tail_fit_json(const TailFit& fit);

}  // namespace fracta

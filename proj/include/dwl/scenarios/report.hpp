#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace dwl {

inline constexpr int kReportSchemaVersion = 1;

/// One sample of a trajectory. `run` indexes the initial state within a fan.
struct SeriesRow {
  int run = 0;
  double t = 0, d = 0, d1 = 0, V = 0, W = 0, v_ham = 0;
  bool operator==(const SeriesRow&) const = default;
};

/// A named claim checked against a tolerance. margin > 0 means room to spare.
struct Verdict {
  std::string claim;
  bool pass = false;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string detail;
  bool operator==(const Verdict&) const = default;
};

/// Guaranteed and fitted decay constants. Unused fields stay NaN.
struct Envelope {
  std::string kind = "exponential";  // exponential | power | bound
  double D = 0, C = 0, C_proof = 0, E = 0, E_derived = 0, T_tilde = 0, C_fit = 0;
  double sigma = 0, delta = 0, gamma = 0;
  bool operator==(const Envelope&) const;
};

struct StabilityReport {
  int schema_version = kReportSchemaVersion;
  std::string name = "report";
  std::vector<SeriesRow> series;
  Envelope envelope;
  std::vector<Verdict> verdicts;
  nlohmann::json config_echo = nlohmann::json::object();

  bool all_pass() const;
  bool operator==(const StabilityReport&) const;
};

/// Series CSV header: run,t,d,d1,V,W,v_ham. Values use 17 significant digits so that
/// reading the file back reproduces every double.
void write_series_csv(std::ostream& os, const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> read_series_csv(std::istream& is);

/// Everything except the series. NaN and infinities are stored as the strings "nan", "inf", "-inf".
nlohmann::json report_to_json(const StabilityReport& r);
/// Throws InvalidArgument on a missing or mismatched schema_version.
StabilityReport report_from_json(const nlohmann::json& j);

struct ReportFiles {
  std::string series_csv, verdict_json;
};

/// Writes <dir>/<name>_series.csv and <dir>/<name>_report.json, creating dir.
/// Throws Error on I/O failure.
ReportFiles emit_report(const StabilityReport& r, const std::string& dir);
/// Reads the pair written by emit_report.
StabilityReport load_report(const std::string& dir, const std::string& name);

/// Helpers shared by the experiment drivers.
Verdict make_verdict(std::string claim, double value, double bound, double tolerance, std::string detail = {});

}  // namespace dwl

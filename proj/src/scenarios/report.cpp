#include "dwl/scenarios/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dwl/errors.hpp"

namespace dwl {

namespace {

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

nlohmann::json encode(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw InvalidArgument("report: expected a number");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool Envelope::operator==(const Envelope& o) const {
  return kind == o.kind && same(D, o.D) && same(C, o.C) && same(C_proof, o.C_proof) && same(E, o.E) &&
         same(E_derived, o.E_derived) && same(T_tilde, o.T_tilde) && same(C_fit, o.C_fit) && same(sigma, o.sigma) &&
         same(delta, o.delta) && same(gamma, o.gamma);
}

bool StabilityReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

bool StabilityReport::operator==(const StabilityReport& o) const {
  if (schema_version != o.schema_version || name != o.name || !(envelope == o.envelope) ||
      config_echo != o.config_echo || series != o.series || verdicts.size() != o.verdicts.size())
    return false;
  for (size_t i = 0; i < verdicts.size(); ++i) {
    const auto &a = verdicts[i], &b = o.verdicts[i];
    if (a.claim != b.claim || a.pass != b.pass || !same(a.margin, b.margin) || !same(a.tolerance, b.tolerance) ||
        a.detail != b.detail)
      return false;
  }
  return true;
}

void write_series_csv(std::ostream& os, const std::vector<SeriesRow>& rows) {
  os << "run,t,d,d1,V,W,v_ham\n";
  for (const auto& r : rows) {
    os << r.run << ',' << fmt(r.t) << ',' << fmt(r.d) << ',' << fmt(r.d1) << ',' << fmt(r.V) << ',' << fmt(r.W)
       << ',' << fmt(r.v_ham) << '\n';
  }
}

std::vector<SeriesRow> read_series_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "run,t,d,d1,V,W,v_ham")
    throw InvalidArgument("series csv: unexpected header");
  std::vector<SeriesRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    SeriesRow r;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw InvalidArgument("series csv: expected 7 columns");
    try {
      r.run = std::stoi(cells[0]);
      r.t = std::stod(cells[1]);
      r.d = std::stod(cells[2]);
      r.d1 = std::stod(cells[3]);
      r.V = std::stod(cells[4]);
      r.W = std::stod(cells[5]);
      r.v_ham = std::stod(cells[6]);
    } catch (const std::exception&) {
      throw InvalidArgument("series csv: malformed number in \"" + line + "\"");
    }
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json report_to_json(const StabilityReport& r) {
  nlohmann::json j;
  j["schema_version"] = r.schema_version;
  j["name"] = r.name;
  const Envelope& e = r.envelope;
  j["envelope"] = {{"kind", e.kind},     {"D", encode(e.D)},
                   {"C", encode(e.C)},   {"C_proof", encode(e.C_proof)},
                   {"E", encode(e.E)},   {"E_derived", encode(e.E_derived)},
                   {"T_tilde", encode(e.T_tilde)}, {"C_fit", encode(e.C_fit)},
                   {"sigma", encode(e.sigma)},     {"delta", encode(e.delta)},
                   {"gamma", encode(e.gamma)}};
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) {
    j["verdicts"].push_back({{"claim", v.claim},
                             {"pass", v.pass},
                             {"margin", encode(v.margin)},
                             {"tolerance", encode(v.tolerance)},
                             {"detail", v.detail}});
  }
  j["all_pass"] = r.all_pass();
  j["config_echo"] = r.config_echo;
  return j;
}

StabilityReport report_from_json(const nlohmann::json& j) {
  if (!j.contains("schema_version") || j.at("schema_version") != kReportSchemaVersion)
    throw InvalidArgument("report: unsupported or missing schema_version");
  StabilityReport r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    r.name = j.at("name").get<std::string>();
    const auto& e = j.at("envelope");
    r.envelope.kind = e.at("kind").get<std::string>();
    r.envelope.D = decode(e.at("D"));
    r.envelope.C = decode(e.at("C"));
    r.envelope.C_proof = decode(e.at("C_proof"));
    r.envelope.E = decode(e.at("E"));
    r.envelope.E_derived = decode(e.at("E_derived"));
    r.envelope.T_tilde = decode(e.at("T_tilde"));
    r.envelope.C_fit = decode(e.at("C_fit"));
    r.envelope.sigma = decode(e.at("sigma"));
    r.envelope.delta = decode(e.at("delta"));
    r.envelope.gamma = decode(e.at("gamma"));
    for (const auto& v : j.at("verdicts")) {
      r.verdicts.push_back({v.at("claim").get<std::string>(), v.at("pass").get<bool>(), decode(v.at("margin")),
                            decode(v.at("tolerance")), v.at("detail").get<std::string>()});
    }
    r.config_echo = j.at("config_echo");
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("report: ") + ex.what());
  }
  return r;
}

ReportFiles emit_report(const StabilityReport& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("emit_report: cannot create " + dir + ": " + ec.message());
  ReportFiles files{(std::filesystem::path(dir) / (r.name + "_series.csv")).string(),
                    (std::filesystem::path(dir) / (r.name + "_report.json")).string()};
  std::ofstream csv(files.series_csv);
  if (!csv) throw Error("emit_report: cannot write " + files.series_csv);
  write_series_csv(csv, r.series);
  std::ofstream js(files.verdict_json);
  if (!js) throw Error("emit_report: cannot write " + files.verdict_json);
  js << report_to_json(r).dump(2) << '\n';
  if (!csv || !js) throw Error("emit_report: write failed in " + dir);
  return files;
}

StabilityReport load_report(const std::string& dir, const std::string& name) {
  const auto base = std::filesystem::path(dir);
  std::ifstream js(base / (name + "_report.json"));
  if (!js) throw Error("load_report: missing report json for " + name);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(js);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("load_report: ") + e.what());
  }
  StabilityReport r = report_from_json(j);
  std::ifstream csv(base / (name + "_series.csv"));
  if (!csv) throw Error("load_report: missing series csv for " + name);
  r.series = read_series_csv(csv);
  return r;
}

Verdict make_verdict(std::string claim, double value, double bound, double tolerance, std::string detail) {
  Verdict v;
  v.claim = std::move(claim);
  v.margin = bound - value;
  v.tolerance = tolerance;
  v.pass = std::isfinite(v.margin) ? v.margin >= -tolerance : (bound == INFINITY && std::isfinite(value));
  v.detail = std::move(detail);
  return v;
}

}  // namespace dwl

#pragma once

// CSV, manifest and SVG writers. Numbers are written in shortest round-trip
// form; absent values are empty fields.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paoi/aoi_analytic.hpp"
#include "paoi/empirical.hpp"
#include "paoi/error.hpp"
#include "paoi/queue_sim.hpp"
#include "paoi/scenario.hpp"

#ifndef PAOI_VERSION
#define PAOI_VERSION "0.1.0"
#endif

namespace paoi {

inline constexpr std::string_view version = PAOI_VERSION;

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_number(std::optional<double> v) { return v ? format_number(*v) : ""; }

inline std::string format_number(std::uint64_t v) { return std::to_string(v); }

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header) : os_(os) {
    row(std::vector<std::string>(header.begin(), header.end()));
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      write_field(fields[i]);
    }
    os_ << '\n';
  }

 private:
  void write_field(const std::string& f) {
    if (f.find_first_of(",\"\n") == std::string::npos) {
      os_ << f;
      return;
    }
    os_ << '"';
    for (char c : f) {
      if (c == '"') os_ << '"';
      os_ << c;
    }
    os_ << '"';
  }

  std::ostream& os_;
};

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

// ---------------------------------------------------------------------------
// Simulator exports

inline void write_samples_csv(std::ostream& os, std::span<const PaoiSamples> replications) {
  CsvWriter w(os, {"replication", "user", "stage", "delivery_time", "paoi_seconds"});
  for (std::size_t k = 0; k < replications.size(); ++k) {
    const PaoiSamples& s = replications[k];
    const std::string rep = std::to_string(k);
    for (Stage st : {Stage::stage1, Stage::e2e}) {
      for (std::size_t u = 0; u < s.users(); ++u)
        for (const auto& p : s.series(u, st))
          w.row({rep, std::to_string(u), std::string(to_string(st)), format_number(p.time),
                 format_number(p.peak)});
    }
    for (const auto& p : s.compute)
      w.row({rep, "", std::string(to_string(Stage::compute)), format_number(p.time),
             format_number(p.peak)});
  }
}

inline void write_excursions_csv(std::ostream& os, std::span<const ExcursionStats> replications) {
  CsvWriter w(os, {"replication", "ruin_level", "exceedance"});
  for (std::size_t k = 0; k < replications.size(); ++k)
    for (double e : replications[k].exceedances)
      w.row({std::to_string(k), format_number(replications[k].ruin_level), format_number(e)});
}

// ---------------------------------------------------------------------------
// Analytic table

struct AnalyticRow {
  Discipline discipline = Discipline::fcfs_mm12;
  double r = 0.0;
  double mu = 0.0;
  std::optional<double> a_or_z;
  std::string quantity;
  std::string mode;
  std::optional<double> value;
  std::optional<Validity> validity;
};

inline void write_analytic_csv(std::ostream& os, std::span<const AnalyticRow> rows) {
  CsvWriter w(os, {"discipline", "r", "mu", "a_or_z", "quantity", "mode", "value", "validity_flag"});
  for (const auto& r : rows)
    w.row({std::string(to_string(r.discipline)), format_number(r.r), format_number(r.mu),
           format_number(r.a_or_z), r.quantity, r.mode, format_number(r.value),
           r.validity ? std::string(to_string(*r.validity)) : std::string()});
}

// ---------------------------------------------------------------------------
// Sweep tables

inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  CsvWriter w(os, {"sweep_var", "value", "replication", "discipline", "avg_analytic_mode",
                   "avg_analytic", "avg_sim", "avg_sim_ci", "severity_mode", "j_z", "j_validity",
                   "ks_stage", "drops", "preemptions", "j_sim", "status"});
  for (const auto& r : rows)
    w.row({std::string(to_string(r.sweep_var)), format_number(r.value),
           std::to_string(r.replication), std::string(to_string(r.discipline)),
           std::string(to_string(r.avg_mode)), format_number(r.avg_analytic),
           format_number(r.avg_sim), format_number(r.avg_sim_ci),
           std::string(to_string(r.psi_mode)), format_number(r.j_z),
           r.j_validity ? std::string(to_string(*r.j_validity)) : std::string(),
           format_number(r.ks_stage), format_number(r.drops), format_number(r.preemptions),
           format_number(r.j_sim), r.status});
}

inline void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows) {
  CsvWriter w(os, {"sweep_var", "value", "discipline", "avg_analytic_mode", "severity_mode",
                   "replications", "failed_cells", "avg_analytic_mean", "avg_analytic_hw",
                   "avg_sim_mean", "avg_sim_hw", "j_z_mean", "j_z_hw", "j_sim_mean", "j_sim_hw"});
  auto mean = [](const std::optional<Estimate>& e) {
    return e ? format_number(e->mean) : std::string();
  };
  auto hw = [](const std::optional<Estimate>& e) {
    return e ? format_number(e->half_width) : std::string();
  };
  for (const auto& r : rows)
    w.row({std::string(to_string(r.sweep_var)), format_number(r.value),
           std::string(to_string(r.discipline)), std::string(to_string(r.avg_mode)),
           std::string(to_string(r.psi_mode)), std::to_string(r.replications),
           std::to_string(r.failed_cells), mean(r.avg_analytic), hw(r.avg_analytic),
           mean(r.avg_sim), hw(r.avg_sim), mean(r.j_z), hw(r.j_z), mean(r.j_sim), hw(r.j_sim)});
}

// ---------------------------------------------------------------------------
// Manifest

struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::string tool_version{version};
  std::string timestamp;  // UTC, ISO 8601
  std::vector<std::string> files;
  nlohmann::json settings = nlohmann::json::object();
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

inline void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  const nlohmann::json j = {{"command", m.command},         {"config_path", m.config_path},
                            {"seed", m.seed},               {"output_dir", m.output_dir},
                            {"tool_version", m.tool_version}, {"timestamp", m.timestamp},
                            {"files", m.files},             {"settings", m.settings}};
  auto os = open_output(path);
  os << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// SVG line chart

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

inline void write_svg_chart(std::ostream& os, std::string_view title, std::string_view x_label,
                            std::string_view y_label, std::span<const SvgSeries> series) {
  constexpr double width = 640, height = 400, left = 70, right = 150, top = 40, bottom = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 >= x0)) x0 = 0, x1 = 1;
  if (!(y1 >= y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << px(fx) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
       << format_number(fx) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">"
       << format_number(fy) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
     << x_label << "</text>\n";
  os << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = palette[k % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    os << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 30
       << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << width - right + 36 << "\" y=\"" << ly + 4 << "\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace paoi

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lwrctl/scenario.hpp"

namespace lwrctl {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char* kCsvHeader = "time,V,B,C,D,omega_a,omega_b,trace_a,trace_b,feasible_a,feasible_b,mass";

/// Fixed 12-significant-digit formatting, independent of stream state and locale.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_csv(const std::vector<TimeSeriesRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    const double values[] = {r.time, r.V, r.B, r.C, r.D, r.omega_a, r.omega_b, r.trace_a, r.trace_b};
    for (double v : values) {
      out += format_number(v);
      out += ',';
    }
    out += r.feasible_a ? "1," : "0,";
    out += r.feasible_b ? "1," : "0,";
    out += format_number(r.mass);
    out += '\n';
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw OutputError("write to '" + path.string() + "' failed");
}

inline void emit_csv(const std::vector<TimeSeriesRecord>& records, const std::filesystem::path& path) {
  write_file(path, format_csv(records));
}

/// `<prefix>_<tag>_<kind>` with the extension left to the caller.
inline std::string output_stem(const std::string& prefix, const std::string& tag, const std::string& kind) {
  return prefix + "_" + tag + "_" + kind;
}

inline std::string snapshot_kind(double requested_time) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%g", requested_time);
  return buf;
}

namespace detail {

inline std::string snapshot_csv(const Snapshot& snap) {
  std::string out = "x,density\n";
  for (std::size_t i = 0; i < snap.x.size(); ++i) {
    out += format_number(snap.x[i]) + "," + format_number(snap.density[i]) + "\n";
  }
  return out;
}

struct Curve {
  std::string file;
  std::string label;
};

inline std::string quote(const std::string& s) { return "'" + s + "'"; }

inline std::string timeseries_script(const std::vector<Curve>& curves, const std::string& png) {
  std::ostringstream os;
  os << "# gnuplot script: V/B, boundary controls and traces over time\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 1200,900\n"
     << "set output " << quote(png) << "\n"
     << "set multiplot layout 3,1\n"
     << "set xlabel 't [s]'\n"
     << "set grid\n";
  auto panel = [&](const std::string& title, std::initializer_list<std::pair<int, std::string>> columns) {
    os << "set title " << quote(title) << "\nplot ";
    bool first = true;
    for (const auto& c : curves) {
      for (const auto& [col, name] : columns) {
        if (!first) os << ", \\\n     ";
        first = false;
        const std::string label = curves.size() > 1 ? name + " (" + c.label + ")" : name;
        os << quote(c.file) << " every ::1 using 1:" << col << " with lines title " << quote(label);
      }
    }
    os << "\n";
  };
  panel("Lyapunov V and barrier B", {{2, "V"}, {3, "B"}});
  panel("Commanded boundary controls", {{6, "omega_a"}, {7, "omega_b"}});
  panel("Attained boundary traces", {{8, "trace_a"}, {9, "trace_b"}});
  os << "unset multiplot\n";
  return os.str();
}

inline std::string snapshot_script(const std::vector<Curve>& curves, const std::string& title, const std::string& png) {
  std::ostringstream os;
  os << "# gnuplot script: density snapshot\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 800,600\n"
     << "set output " << quote(png) << "\n"
     << "set title " << quote(title) << "\n"
     << "set xlabel 'x'\nset ylabel 'u'\nset grid\n"
     << "plot ";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (i) os << ", \\\n     ";
    os << quote(curves[i].file) << " every ::1 using 1:2 with lines title " << quote(curves[i].label);
  }
  os << "\n";
  return os.str();
}

}  // namespace detail

/// Writes the data files and plot scripts for each run, plus overlay scripts
/// (tag `overlay`) when more than one run is given. Returns the written paths.
inline std::vector<std::filesystem::path> emit_plots(const std::vector<const ScenarioRun*>& runs,
                                                     const std::filesystem::path& dir, const std::string& prefix) {
  std::vector<std::filesystem::path> written;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir.string() + "': " + ec.message());
  auto put = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    written.push_back(dir / name);
  };

  std::vector<detail::Curve> series;
  for (const ScenarioRun* run : runs) {
    const std::string tag = to_string(run->config.mode);
    const std::string ts = output_stem(prefix, tag, "timeseries");
    put(ts + ".csv", format_csv(run->records));
    put(ts + ".plt", detail::timeseries_script({{ts + ".csv", tag}}, ts + ".png"));
    series.push_back({ts + ".csv", tag});
    for (const Snapshot& snap : run->snapshots) {
      const std::string stem = output_stem(prefix, tag, snapshot_kind(snap.requested_time));
      put(stem + ".csv", detail::snapshot_csv(snap));
      put(stem + ".plt", detail::snapshot_script({{stem + ".csv", tag}}, "t = " + format_number(snap.time) + " s",
                                                 stem + ".png"));
    }
  }

  if (runs.size() > 1) {
    const std::string ts = output_stem(prefix, "overlay", "timeseries");
    put(ts + ".plt", detail::timeseries_script(series, ts + ".png"));
    for (const Snapshot& snap : runs.front()->snapshots) {
      std::vector<detail::Curve> curves;
      for (const ScenarioRun* run : runs) {
        for (const Snapshot& other : run->snapshots) {
          if (other.requested_time == snap.requested_time) {
            const std::string tag = to_string(run->config.mode);
            curves.push_back({output_stem(prefix, tag, snapshot_kind(snap.requested_time)) + ".csv", tag});
          }
        }
      }
      const std::string stem = output_stem(prefix, "overlay", snapshot_kind(snap.requested_time));
      put(stem + ".plt", detail::snapshot_script(curves, "t = " + format_number(snap.time) + " s", stem + ".png"));
    }
  }
  return written;
}

}  // namespace lwrctl

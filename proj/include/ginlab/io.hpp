#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ginlab/linalg.hpp"

namespace ginlab {

// Shortest decimal form that round-trips a double exactly.
std::string format_full(double v);

// FNV-1a 64-bit hash, used to fingerprint effective configurations.
std::uint64_t fnv1a_hash(std::string_view s);
std::string hex_u64(std::uint64_t v);

// UTC wall-clock timestamp, e.g. 2026-01-31T12:00:00Z.
std::string utc_timestamp();

void ensure_directory(const std::string& dir);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
std::string join_path(const std::string& dir, const std::string& name);

// Complex matrix as CSV: a single '#'-prefixed JSON metadata line, then one
// line per row with re/im interleaved at full precision (exact round-trip).
void write_matrix_csv(const std::string& path, const CMatrix& a,
                      const std::string& meta_json = "{}");
CMatrix read_matrix_csv(const std::string& path,
                        std::string* meta_json = nullptr);

// Point cloud as CSV with header 're,im'.
void write_points_csv(const std::string& path, const std::vector<cplx>& pts);

// Numeric table as CSV with a named header row.
void write_table_csv(const std::string& path,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

// Record of one CLI run; written to <out_dir>/manifest.json on every exit
// path (success, out-of-domain, usage error, or failure).
struct RunManifest {
  std::string command;
  std::string status = "ok";
  int exit_code = 0;
  std::string message;
  std::uint64_t seed = 0;
  long long n = 0;
  long long trials = 0;
  int threads = 1;
  std::string out_dir;
  std::string config_json = "{}";
  std::vector<std::string> outputs;
  std::vector<std::string> notes;
  std::string results_json = "{}";
};

// Writes manifest.json into m.out_dir (creating it if needed); returns the
// full path of the file written.
std::string write_manifest(const RunManifest& m);

struct SvgSeries {
  std::vector<double> x, y;
  std::string color = "#1f6fb2";
  std::string label;
};

struct SvgBand {
  std::vector<double> x, lo, hi;
  std::string color = "#1f6fb2";
  double opacity = 0.18;
};

// Self-contained SVG line plot with axes, tick labels, optional shaded
// uncertainty bands, and a small legend.
void write_svg_curves(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series,
                      const std::vector<SvgBand>& bands = {}, int width = 880,
                      int height = 560);

}  // namespace ginlab

#include "ginlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ginlab/errors.hpp"

namespace ginlab {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex_u64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return (std::filesystem::path(dir) / name).string();
}

void write_matrix_csv(const std::string& path, const CMatrix& a,
                      const std::string& meta_json) {
  std::ostringstream os;
  os << "# " << meta_json << "\n";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) os << ',';
      os << format_full(a(i, j).real()) << ',' << format_full(a(i, j).imag());
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

CMatrix read_matrix_csv(const std::string& path, std::string* meta_json) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::string line;
  std::vector<std::vector<double>> rows;
  bool meta_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!meta_seen && meta_json) {
        std::size_t start = 1;
        while (start < line.size() && line[start] == ' ') ++start;
        *meta_json = line.substr(start);
      }
      meta_seen = true;
      continue;
    }
    std::vector<double> vals;
    const char* p = line.c_str();
    char* end = nullptr;
    while (*p) {
      const double v = std::strtod(p, &end);
      if (end == p) throw Error("malformed number in '" + path + "'");
      vals.push_back(v);
      p = end;
      while (*p == ',' || *p == ' ') ++p;
    }
    if (vals.size() % 2 != 0)
      throw Error("odd value count in matrix row of '" + path + "'");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) return CMatrix(0, 0);
  const std::size_t cols2 = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols2) throw Error("ragged matrix rows in '" + path + "'");
  CMatrix a(static_cast<Eigen::Index>(rows.size()),
            static_cast<Eigen::Index>(cols2 / 2));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      a(i, j) = cplx(rows[static_cast<std::size_t>(i)][2 * j],
                     rows[static_cast<std::size_t>(i)][2 * j + 1]);
  return a;
}

void write_points_csv(const std::string& path, const std::vector<cplx>& pts) {
  std::ostringstream os;
  os << "re,im\n";
  for (const cplx& p : pts)
    os << format_full(p.real()) << ',' << format_full(p.imag()) << '\n';
  write_text_file(path, os.str());
}

void write_table_csv(const std::string& path,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << columns[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw Error("table row width mismatch writing '" + path + "'");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_full(row[i]);
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

std::string write_manifest(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["status"] = m.status;
  j["exit_code"] = m.exit_code;
  j["message"] = m.message;
  j["timestamp_utc"] = utc_timestamp();
  j["seed"] = m.seed;
  j["n"] = m.n;
  j["trials"] = m.trials;
  j["threads"] = m.threads;
  j["out_dir"] = m.out_dir;
  j["config_hash_fnv1a"] = hex_u64(fnv1a_hash(m.config_json));
  const auto parse_or_string = [](const std::string& text) -> nlohmann::json {
    nlohmann::json parsed =
        nlohmann::json::parse(text, /*cb=*/nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) return text;
    return parsed;
  };
  j["config"] = parse_or_string(m.config_json);
  j["results"] = parse_or_string(m.results_json);
  j["outputs"] = m.outputs;
  j["notes"] = m.notes;

  ensure_directory(m.out_dir);
  const std::string path = join_path(m.out_dir, "manifest.json");
  write_text_file(path, j.dump(2) + "\n");
  return path;
}

namespace {

std::string svg_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_svg_curves(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series,
                      const std::vector<SvgBand>& bands, int width,
                      int height) {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double y_min = x_min, y_max = x_max;
  const auto take = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      take(s.x[i], s.y[i]);
  for (const auto& b : bands)
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      if (i < b.lo.size()) take(b.x[i], b.lo[i]);
      if (i < b.hi.size()) take(b.x[i], b.hi[i]);
    }
  if (!std::isfinite(x_min)) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (x_max - x_min < 1e-300) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (y_max - y_min < 1e-300) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double x_pad = 0.04 * (x_max - x_min);
  const double y_pad = 0.06 * (y_max - y_min);
  x_min -= x_pad;
  x_max += x_pad;
  y_min -= y_pad;
  y_max += y_pad;

  const double ml = 72, mr = 24, mt = 44, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto px = [&](double x) {
    return ml + pw * (x - x_min) / (x_max - x_min);
  };
  const auto py = [&](double y) {
    return mt + ph * (1.0 - (y - y_min) / (y_max - y_min));
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"15\">" << svg_escape(title)
     << "</text>\n";

  const int n_ticks = 6;
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i < n_ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / (n_ticks - 1);
    const double fy = y_min + (y_max - y_min) * i / (n_ticks - 1);
    os << "<line x1=\"" << px(fx) << "\" y1=\"" << mt << "\" x2=\"" << px(fx)
       << "\" y2=\"" << mt + ph << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << py(fy) << "\" x2=\"" << ml + pw
       << "\" y2=\"" << py(fy) << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 16
       << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << py(fy) + 4
       << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  os << "</g>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
     << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  for (const auto& b : bands) {
    const std::size_t count =
        std::min({b.x.size(), b.lo.size(), b.hi.size()});
    if (count < 2) continue;
    os << "<polygon fill=\"" << b.color << "\" fill-opacity=\"" << b.opacity
       << "\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < count; ++i)
      os << px(b.x[i]) << ',' << py(b.hi[i]) << ' ';
    for (std::size_t i = count; i-- > 0;)
      os << px(b.x[i]) << ',' << py(b.lo[i]) << ' ';
    os << "\"/>\n";
  }

  for (const auto& s : series) {
    const std::size_t count = std::min(s.x.size(), s.y.size());
    if (count == 0) continue;
    if (count == 1) {
      os << "<circle cx=\"" << px(s.x[0]) << "\" cy=\"" << py(s.y[0])
         << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
      continue;
    }
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < count; ++i)
      os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    os << "\"/>\n";
  }

  double legend_y = mt + 14;
  os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    os << "<line x1=\"" << ml + 10 << "\" y1=\"" << legend_y - 4 << "\" x2=\""
       << ml + 34 << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << s.color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << ml + 40 << "\" y=\"" << legend_y << "\">"
       << svg_escape(s.label) << "</text>\n";
    legend_y += 16;
  }
  os << "</g>\n";

  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">"
     << svg_escape(x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 18 "
     << mt + ph / 2 << ")\">" << svg_escape(y_label) << "</text>\n";
  os << "</svg>\n";
  write_text_file(path, os.str());
}

}  // namespace ginlab

#include "anchoreval/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "anchoreval/error.hpp"

namespace anchoreval {

const char* const kToolVersion = "anchoreval 0.1.0";

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    fail(Errc::invalid_spec, "row width does not match table header");
  rows_.push_back(std::move(cells));
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_meta_comments(std::ostream& out, const OutputMeta& meta) {
  out << "# tool: " << kToolVersion << '\n';
  if (!meta.input_digest.empty()) out << "# input_digest: " << meta.input_digest << '\n';
  if (meta.seed) out << "# seed: " << *meta.seed << '\n';
  if (!meta.config_echo.empty()) out << "# config: " << meta.config_echo << '\n';
}

}  // namespace

void Table::write_csv(std::ostream& out, const OutputMeta& meta) const {
  write_meta_comments(out, meta);
  for (size_t c = 0; c < columns_.size(); ++c)
    out << (c ? "," : "") << csv_escape(columns_[c]);
  out << '\n';
  for (const auto& row : rows_) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(row[c]);
    out << '\n';
  }
}

void Table::write_json(std::ostream& out, const OutputMeta& meta) const {
  nlohmann::json j;
  j["meta"]["tool"] = kToolVersion;
  if (!meta.input_digest.empty()) j["meta"]["input_digest"] = meta.input_digest;
  if (meta.seed) j["meta"]["seed"] = *meta.seed;
  if (!meta.config_echo.empty())
    j["meta"]["config"] = nlohmann::json::parse(meta.config_echo, nullptr, false);
  j["columns"] = columns_;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) rows.push_back(row);
  j["rows"] = rows;
  out << j.dump(2) << '\n';
}

void Table::write(std::ostream& out, const OutputMeta& meta, const std::string& format) const {
  if (format == "csv")
    write_csv(out, meta);
  else if (format == "json")
    write_json(out, meta);
  else
    fail(Errc::usage, "unknown format '" + format + "' (expected csv or json)");
}

void write_svg_plot(std::ostream& out, const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, const OutputMeta& meta) {
  const double width = 640.0, height = 480.0, pad = 56.0;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  auto sx = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (width - 2 * pad); };
  auto sy = [&](double y) { return height - pad - (y - ymin) / (ymax - ymin) * (height - 2 * pad); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<desc>" << kToolVersion;
  if (!meta.input_digest.empty()) out << " input_digest=" << meta.input_digest;
  if (meta.seed) out << " seed=" << *meta.seed;
  if (!meta.config_echo.empty()) out << " config=" << meta.config_echo;
  out << "</desc>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes.
  out << "<line x1=\"" << pad << "\" y1=\"" << height - pad << "\" x2=\"" << width - pad
      << "\" y2=\"" << height - pad << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
      << height - pad << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
      << x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << height / 2 << ")\">" << y_label
      << "</text>\n";
  out << "<text x=\"" << pad << "\" y=\"" << height - pad + 16 << "\" font-size=\"10\">"
      << format_double(xmin) << "</text>\n";
  out << "<text x=\"" << width - pad << "\" y=\"" << height - pad + 16
      << "\" text-anchor=\"end\" font-size=\"10\">" << format_double(xmax) << "</text>\n";
  out << "<text x=\"" << pad - 4 << "\" y=\"" << height - pad
      << "\" text-anchor=\"end\" font-size=\"10\">" << format_double(ymin) << "</text>\n";
  out << "<text x=\"" << pad - 4 << "\" y=\"" << pad << "\" text-anchor=\"end\" font-size=\"10\">"
      << format_double(ymax) << "</text>\n";

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 6];
    if (s.line && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
      for (auto [x, y] : s.points) out << format_double(sx(x)) << ',' << format_double(sy(y)) << ' ';
      out << "\"/>\n";
    }
    for (auto [x, y] : s.points)
      out << "<circle cx=\"" << format_double(sx(x)) << "\" cy=\"" << format_double(sy(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << width - pad + 4 << "\" y=\"" << pad + 14.0 * static_cast<double>(k)
        << "\" font-size=\"10\" fill=\"" << color << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_file_atomically(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out << content;
  out.flush();
  if (!out) fail(Errc::io_error, "short write to " + path);
}

}  // namespace anchoreval

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace anchoreval {

extern const char* const kToolVersion;  // "anchoreval <semver>"

// Provenance stamped into every output file: version, content digest of the
// primary input, the seed, and an echo of the effective configuration.
struct OutputMeta {
  std::string input_digest;  // empty when there is no file input
  std::optional<uint64_t> seed;
  std::string config_echo;   // single-line JSON
};

// Canonical number formatting for tabular output (%.10g); identical inputs
// produce identical bytes.
std::string format_double(double v);

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add_row(std::vector<std::string> cells);
  size_t row_count() const { return rows_.size(); }

  void write_csv(std::ostream& out, const OutputMeta& meta) const;
  void write_json(std::ostream& out, const OutputMeta& meta) const;
  void write(std::ostream& out, const OutputMeta& meta, const std::string& format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool line = false;  // scatter by default
};

// Minimal scatter/line plot; plain coordinates, no styling contract.
void write_svg_plot(std::ostream& out, const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, const OutputMeta& meta);

// Whole-file write through a buffer: nothing is written on error paths.
void write_file_atomically(const std::string& path, const std::string& content);

}  // namespace anchoreval

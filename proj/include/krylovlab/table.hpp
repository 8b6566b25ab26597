#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace klab {

/// Formats a double with 17 significant digits (lossless round-trip).
std::string format_double(double v);

/// Named columns of reals plus an ordered key/value metadata block.
/// Emission is fully deterministic: identical content gives identical bytes.
class ResultTable {
 public:
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  void set_meta(const std::string& key, long long value);
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }
  const std::string* find_meta(const std::string& key) const;

  void add_column(const std::string& name, std::vector<double> values);
  const std::vector<std::pair<std::string, std::vector<double>>>& columns() const {
    return columns_;
  }
  std::size_t rows() const;

  /// Header comments `# key = value`, then a name row, then CSV data rows.
  void write_csv(std::ostream& out) const;
  /// {"metadata": {...}, "columns": {...}} with insertion order preserved.
  void write_json(std::ostream& out) const;
  void write_file(const std::string& path, const std::string& format) const;
  std::string to_string(const std::string& format) const;

  /// Gnuplot script plotting every column against the first one.
  void write_gnuplot(std::ostream& out, const std::string& csv_path) const;

  static ResultTable read_csv(std::istream& in);

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::pair<std::string, std::vector<double>>> columns_;
};

}  // namespace klab

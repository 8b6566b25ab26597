#include "krylovlab/table.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace klab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  meta_.emplace_back(key, value);
}

void ResultTable::set_meta(const std::string& key, double value) {
  set_meta(key, format_double(value));
}

void ResultTable::set_meta(const std::string& key, long long value) {
  set_meta(key, std::to_string(value));
}

const std::string* ResultTable::find_meta(const std::string& key) const {
  for (const auto& [k, v] : meta_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void ResultTable::add_column(const std::string& name, std::vector<double> values) {
  if (!columns_.empty() && columns_.front().second.size() != values.size()) {
    throw std::invalid_argument("ResultTable: column '" + name + "' has mismatched length");
  }
  columns_.emplace_back(name, std::move(values));
}

std::size_t ResultTable::rows() const {
  return columns_.empty() ? 0 : columns_.front().second.size();
}

void ResultTable::write_csv(std::ostream& out) const {
  for (const auto& [k, v] : meta_) out << "# " << k << " = " << v << "\n";
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    out << (c ? "," : "") << columns_[c].first;
  }
  out << "\n";
  const std::size_t n = rows();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      out << (c ? "," : "") << format_double(columns_[c].second[r]);
    }
    out << "\n";
  }
}

void ResultTable::write_json(std::ostream& out) const {
  nlohmann::ordered_json j;
  auto& meta = j["metadata"];
  for (const auto& [k, v] : meta_) meta[k] = v;
  auto& cols = j["columns"];
  for (const auto& [name, values] : columns_) cols[name] = values;
  out << j.dump(2) << "\n";
}

void ResultTable::write_file(const std::string& path, const std::string& format) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("ResultTable: cannot open output file " + path);
  if (format == "json") {
    write_json(out);
  } else {
    write_csv(out);
  }
}

std::string ResultTable::to_string(const std::string& format) const {
  std::ostringstream out;
  if (format == "json") {
    write_json(out);
  } else {
    write_csv(out);
  }
  return out.str();
}

void ResultTable::write_gnuplot(std::ostream& out, const std::string& csv_path) const {
  out << "set datafile separator ','\n";
  out << "set key autotitle columnhead\n";
  if (columns_.size() < 2) return;
  out << "plot";
  for (std::size_t c = 1; c < columns_.size(); ++c) {
    out << (c > 1 ? ", " : " ") << "'" << csv_path << "' using 1:" << c + 1 << " with lines";
  }
  out << "\n";
}

ResultTable ResultTable::read_csv(std::istream& in) {
  ResultTable t;
  std::string line;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find(" = ");
      if (eq != std::string::npos) {
        std::string key = line.substr(2, eq - 2);
        t.set_meta(key, line.substr(eq + 3));
      }
      continue;
    }
    std::stringstream ss(line);
    std::string tok;
    if (names.empty()) {
      while (std::getline(ss, tok, ',')) names.push_back(tok);
      for (const auto& n : names) t.columns_.emplace_back(n, std::vector<double>{});
      continue;
    }
    std::size_t c = 0;
    while (std::getline(ss, tok, ',') && c < names.size()) {
      t.columns_[c++].second.push_back(std::stod(tok));
    }
  }
  return t;
}

}  // namespace klab

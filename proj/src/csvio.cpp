#include "akprop/csvio.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace akprop {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& payload) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ResultTable::add_row(std::initializer_list<double> cells) {
  if (cells.size() != columns.size())
    throw std::logic_error("ResultTable: row width mismatch in " + name);
  rows.emplace_back(cells);
}

std::string ResultTable::render() const {
  std::string out;
  out += "# akprop_version=";
  out += kVersion;
  out += "\n# config_hash=";
  out += config_hash.empty() ? "none" : config_hash;
  out += "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    out += columns[i];
    out += (i + 1 < columns.size()) ? "," : "\n";
  }
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out += format_double(row[i]);
      out += (i + 1 < row.size()) ? "," : "\n";
    }
  }
  return out;
}

std::string ResultTable::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name + ".csv";
  write_text_file(path, render());
  return path;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

}  // namespace akprop

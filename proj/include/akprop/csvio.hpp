#pragma once

#include <string>
#include <vector>

namespace akprop {

inline constexpr const char* kVersion = "0.1.0";

/// Fixed-schema numeric table with a provenance header; bodies are
/// byte-identical across runs with the same configuration.
struct ResultTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string config_hash;

  void add_row(std::initializer_list<double> cells);
  std::string render() const;
  std::string write(const std::string& dir) const;  // returns the path
};

std::string format_double(double v);
std::string fnv1a_hex(const std::string& payload);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace akprop

#pragma once

#include <string>
#include <vector>

namespace cadlag {

// shortest round-trip decimal; identical inputs give identical text
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  void row_numeric(const std::vector<double>& cells);
  const std::string& text() const { return out_; }
  void write(const std::string& filename) const;

 private:
  std::size_t width_;
  std::string out_;
};

} // namespace cadlag

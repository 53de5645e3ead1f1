#include "cadlag/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace cadlag {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ",";
    out_ += header[i];
  }
  out_ += "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ",";
    out_ += cells[i];
  }
  out_ += "\n";
}

void CsvWriter::row_numeric(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(format_double(v));
  row(s);
}

void CsvWriter::write(const std::string& filename) const {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot write " + filename);
  out << out_;
}

} // namespace cadlag

#include "dnc/csv.hpp"

#include <charconv>
#include <cmath>

namespace dnc {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header) : os_(os) {
  for (auto h : header) field(h);
  end_row();
}

CsvWriter::CsvWriter(std::ostream& os, std::span<const std::string> header) : os_(os) {
  for (const auto& h : header) field(h);
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) os_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  os_ << format_real(value);
  return *this;
}

CsvWriter& CsvWriter::field(long long value) {
  separator();
  os_ << value;
  return *this;
}

CsvWriter& CsvWriter::field(unsigned long long value) {
  separator();
  os_ << value;
  return *this;
}

CsvWriter& CsvWriter::field(std::string_view value) {
  separator();
  os_ << value;
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  row_started_ = false;
}

}  // namespace dnc

#pragma once

#include <initializer_list>
#include <span>
#include <ostream>
#include <string>
#include <string_view>

namespace dnc {

/// Shortest decimal that round-trips to the same double ("inf", "-inf",
/// "nan" for non-finite values).
std::string format_real(double value);

/// Minimal comma-separated writer with a fixed header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header);
  CsvWriter(std::ostream& os, std::span<const std::string> header);

  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(unsigned long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& field(std::string_view value);
  void end_row();

 private:
  void separator();

  std::ostream& os_;
  bool row_started_ = false;
};

}  // namespace dnc

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "poissonk/params.hpp"

namespace poissonk::cli {

enum class Format { kCsv, kJson };

// A table cell. Monostate is an absent value: empty in CSV, null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, Real, bool, std::string>;

// 12 significant digits, C locale.
std::string format_real(Real x);

// Rows with a fixed header, emitted as CSV (header line, LF endings) or as
// a JSON array of objects with the same keys in the same order.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<Cell> row);
  [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
  [[nodiscard]] std::size_t size() const { return rows_.size(); }

  void write_csv(std::ostream& os) const;
  [[nodiscard]] std::string to_json() const;  // pretty-printed array

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace poissonk::cli

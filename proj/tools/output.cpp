#include "output.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include "json.hpp"

namespace poissonk::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv_field(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(Real v) const { return format_real(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return csv_escape(v); }
  };
  return std::visit(Visitor{}, cell);
}

ordered_json to_json_value(const Cell& cell) {
  struct Visitor {
    ordered_json operator()(std::monostate) const { return nullptr; }
    ordered_json operator()(std::int64_t v) const { return v; }
    ordered_json operator()(Real v) const {
      if (!std::isfinite(v)) return nullptr;
      // Round through the 12-digit text so JSON and CSV carry the same value.
      return std::strtod(format_real(v).c_str(), nullptr);
    }
    ordered_json operator()(bool v) const { return v; }
    ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

std::string format_real(Real x) { return fmt::format("{:.12g}", x); }

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw std::logic_error("row width does not match header");
  rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << to_csv_field(row[i]);
    os << '\n';
  }
}

std::string Table::to_json() const {
  ordered_json arr = ordered_json::array();
  for (const auto& row : rows_) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[header_[i]] = to_json_value(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2);
}

}  // namespace poissonk::cli

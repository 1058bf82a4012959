#pragma once

// Fan files (JSON), raised-vector arguments and number formatting for the CLI.

#include "stackheight/raised_heights.hpp"
#include "stackheight/stacky_fan.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace stackheight::cli {

/// Malformed input; line and column are 1-based and 0 when unknown.
class FanFormatError : public std::runtime_error {
 public:
  FanFormatError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Cones naming unknown ray ids keep an out-of-range index so validate()
/// reports them.
StackyFan parse_fan(const std::string& text);
StackyFan load_fan(const std::string& path);

nlohmann::json fan_to_json(const StackyFan& fan);

/// Cone ray lists sorted by ray order, cones sorted lexicographically.
StackyFan normalize(const StackyFan& fan);

/// A JSON array of numbers or rational strings in raised-vector order.
RaisedVector parse_raised(const Fan& fan, const std::string& text);

/// Decimal with 12 significant digits.
std::string format_number(double v);
nlohmann::json number(double v);
nlohmann::json rational_json(const Rational& q);

}  // namespace stackheight::cli

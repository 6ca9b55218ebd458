#pragma once

#include <span>
#include <string>
#include <vector>

namespace dexroute::csv {

// Splits one CSV line into fields. Double-quoted fields may contain commas
// and doubled quotes; embedded newlines are not supported.
std::vector<std::string> split_line(const std::string& line);

// Joins fields into one CSV line, quoting only where required.
std::string join_line(std::span<const std::string> fields);

// Doubles as exact round-trip formatting: enough digits to reparse equal.
std::string format_double(double v);

}  // namespace dexroute::csv

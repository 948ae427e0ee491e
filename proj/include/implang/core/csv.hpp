#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace implang {

using CsvRow = std::vector<std::string>;

/// RFC 4180 quoting: fields with comma, quote, CR or LF are quoted.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const CsvRow& row);
/// Parses quoted fields including embedded newlines. Throws on an unterminated quote.
std::vector<CsvRow> read_csv(std::istream& in);

}  // namespace implang

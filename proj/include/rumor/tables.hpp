#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rumor {

// Plain CSV: a header row plus string cells. Fields containing commas,
// quotes or newlines are quoted on write; quoted fields are accepted on read.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;  // throws DataError when absent
    bool has_column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);  // throws ParseError on ragged rows
CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

// Shortest round-trip decimal form; "-0" is written as "0".
std::string format_number(double value);
double parse_number(std::string_view text);  // throws DataError

}  // namespace rumor

#include "rumor/tables.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "rumor/errors.hpp"

namespace rumor {

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw DataError("CSV lacks column '" + std::string(name) + "'");
}

bool CsvTable::has_column(std::string_view name) const {
    for (const auto& h : header)
        if (h == name) return true;
    return false;
}

namespace {

// Reads one logical record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    ++line;
    std::string field;
    bool quoted = false, any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) throw ParseError(line, "unterminated quoted CSV field");
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

void write_field(std::ostream& out, const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
        out << f;
        return;
    }
    out << '"';
    for (char c : f) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::size_t line = 0;
    std::vector<std::string> fields;
    if (!read_record(in, fields, line)) throw DataError("CSV input is empty");
    t.header = fields;
    while (read_record(in, fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != t.header.size())
            throw ParseError(line, "expected " + std::to_string(t.header.size()) + " fields, found " +
                                       std::to_string(fields.size()));
        t.rows.push_back(fields);
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    try {
        return read_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + e.what());
    }
}

void write_csv(std::ostream& out, const CsvTable& table) {
    auto row = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << ',';
            write_field(out, r[i]);
        }
        out << '\n';
    };
    row(table.header);
    for (const auto& r : table.rows) row(r);
}

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    write_csv(out, table);
    if (!out) throw DataError("failed writing '" + path + "'");
}

std::string format_number(double value) {
    if (value == 0.0) return "0";
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, r.ptr);
}

double parse_number(std::string_view text) {
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size())
        throw DataError("'" + std::string(text) + "' is not a number");
    return v;
}

}  // namespace rumor

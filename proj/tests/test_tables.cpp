#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "rumor/errors.hpp"
#include "rumor/tables.hpp"

using namespace rumor;

TEST_CASE("csv round trip with quoting") {
    CsvTable t{{"a", "b,c", "d"}, {{"1", "x \"y\"", "line\nbreak"}, {"", "plain", "2.5"}}};
    std::ostringstream out;
    write_csv(out, t);
    std::istringstream in(out.str());
    const CsvTable back = read_csv(in);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.column("d") == 2);
    CHECK(back.has_column("b,c"));
    CHECK_FALSE(back.has_column("z"));
    CHECK_THROWS_AS(back.column("z"), DataError);
}

TEST_CASE("ragged rows are parse errors") {
    std::istringstream in("a,b\n1,2\n3\n");
    try {
        read_csv(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("header-only csv") {
    std::istringstream in("hours\n");
    const CsvTable t = read_csv(in);
    CHECK(t.header == std::vector<std::string>{"hours"});
    CHECK(t.rows.empty());
}

TEST_CASE("numbers use the shortest round-trip form") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(48) == "48");
    CHECK(format_number(-2.5) == "-2.5");
    for (double v : {1.0 / 3.0, 1e-300, 6.02214076e23, -123.456789012345, std::numeric_limits<double>::max()})
        CHECK(parse_number(format_number(v)) == v);
    CHECK_THROWS_AS(parse_number("abc"), DataError);
    CHECK_THROWS_AS(parse_number("1.5x"), DataError);
    CHECK_THROWS_AS(parse_number(""), DataError);
}

TEST_CASE("unwritable csv path") {
    CHECK_THROWS_AS(write_csv_file("/nonexistent-dir/x.csv", CsvTable{{"a"}, {}}), DataError);
}

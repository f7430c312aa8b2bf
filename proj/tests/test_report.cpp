#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rumor/errors.hpp"
#include "rumor/report.hpp"

using namespace rumor;

namespace {

EvaluationReport two_series() {
    EvaluationReport r;
    r.seed = 4;
    r.config = R"({"seed":4})";
    r.config_hash = "00000000deadbeef";
    r.pretrain_events = {"p1"};
    r.classify_events = {"c1", "c2"};
    for (double h : {1.0, 12.0, 48.0}) {
        CutoffResult row{h, {}};
        row.series.push_back({"all", 0.5 + h / 96.0, {0.5, 1.0}, {{"CreditScore", 0.4}, {"UserJoinDate", 0.1}}});
        row.series.push_back({"without-credit", 0.25 + h / 96.0, {0.5, 0.75}, {}});
        r.cutoffs.push_back(row);
    }
    return r;
}

std::size_t occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("empty report gives a header-only csv") {
    const CsvTable t = accuracy_table(EvaluationReport{});
    CHECK(t.header == std::vector<std::string>{"hours"});
    CHECK(t.rows.empty());
}

TEST_CASE("one csv row per cutoff") {
    const CsvTable t = accuracy_table(two_series());
    CHECK(t.header == std::vector<std::string>{"hours", "accuracy_all", "accuracy_without-credit"});
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[1] == std::vector<std::string>{"12", "0.625", "0.375"});
    CHECK(fold_table(two_series()).rows.size() == 12);
    CHECK(importance_table(two_series()).rows.size() == 6);
}

TEST_CASE("svg draws one polyline and legend entry per series") {
    const std::string svg = render_svg(two_series());
    CHECK(occurrences(svg, "<polyline") == 2);
    CHECK(occurrences(svg, "class=\"legend\"") == 2);
    CHECK(svg.find(">all</text>") != std::string::npos);
    CHECK(svg.find(">without-credit</text>") != std::string::npos);
    CHECK(svg.find("hours since event start") != std::string::npos);
    CHECK(svg.find(">accuracy</text>") != std::string::npos);
    CHECK(render_svg(two_series()) == svg);
}

TEST_CASE("json round trip preserves every number") {
    const auto r = two_series();
    const auto back = report_from_json(report_to_json(r));
    CHECK(report_to_json(back) == report_to_json(r));
    CHECK(back.cutoffs[2].series[0].importance[0].feature == "CreditScore");
    CHECK_THROWS_AS(report_from_json("{"), DataError);
}

TEST_CASE("emit writes csv and svg files deterministically") {
    const auto dir = std::filesystem::temp_directory_path() / "rumor_report_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto csv = emit_report(two_series(), ReportFormat::csv, dir);
    const auto svg = emit_report(two_series(), ReportFormat::svg, dir);
    CHECK(std::filesystem::exists(dir / "report_folds.csv"));
    CHECK(std::filesystem::exists(dir / "report_importance.csv"));
    const std::string first = slurp(svg);
    emit_report(two_series(), ReportFormat::svg, dir);
    CHECK(slurp(svg) == first);
    CHECK(slurp(csv).rfind("hours,accuracy_all", 0) == 0);
    CHECK_THROWS_AS(emit_report(two_series(), ReportFormat::svg, "/nonexistent-dir/sub"), DataError);
    CHECK_THROWS_AS(parse_report_format("png"), UsageError);
    std::filesystem::remove_all(dir);
}

#include "rumor/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rumor/errors.hpp"

namespace rumor {

ReportFormat parse_report_format(std::string_view text) {
    if (text == "csv") return ReportFormat::csv;
    if (text == "svg") return ReportFormat::svg;
    throw UsageError("unknown report format '" + std::string(text) + "' (csv|svg)");
}

std::vector<std::string> series_names(const EvaluationReport& report) {
    std::vector<std::string> names;
    for (const auto& row : report.cutoffs)
        for (const auto& s : row.series)
            if (std::find(names.begin(), names.end(), s.name) == names.end()) names.push_back(s.name);
    return names;
}

CsvTable accuracy_table(const EvaluationReport& report) {
    const auto names = series_names(report);
    CsvTable t;
    t.header.push_back("hours");
    for (const auto& n : names) t.header.push_back("accuracy_" + n);
    for (const auto& row : report.cutoffs) {
        std::vector<std::string> cells{format_number(row.hours)};
        for (const auto& n : names) {
            const auto it = std::find_if(row.series.begin(), row.series.end(),
                                         [&](const SeriesResult& s) { return s.name == n; });
            cells.push_back(it == row.series.end() ? "" : format_number(it->accuracy));
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

CsvTable fold_table(const EvaluationReport& report) {
    CsvTable t{{"hours", "series", "fold", "accuracy"}, {}};
    for (const auto& row : report.cutoffs)
        for (const auto& s : row.series)
            for (std::size_t f = 0; f < s.fold_accuracy.size(); ++f)
                t.rows.push_back({format_number(row.hours), s.name, std::to_string(f),
                                  format_number(s.fold_accuracy[f])});
    return t;
}

CsvTable importance_table(const EvaluationReport& report) {
    CsvTable t{{"hours", "series", "rank", "feature", "importance"}, {}};
    for (const auto& row : report.cutoffs)
        for (const auto& s : row.series)
            for (std::size_t r = 0; r < s.importance.size(); ++r)
                t.rows.push_back({format_number(row.hours), s.name, std::to_string(r + 1), s.importance[r].feature,
                                  format_number(s.importance[r].importance)});
    return t;
}

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 160, kTop = 30, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const EvaluationReport& report) {
    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    auto px = [&](double hours) { return kLeft + plot_w * hours / 48.0; };
    auto py = [&](double acc) { return kTop + plot_h * (1.0 - acc); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) +
           "\" viewBox=\"0 0 " + fixed(kWidth) + " " + fixed(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) + "\" fill=\"white\"/>\n";
    svg += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(py(0)) + "\" x2=\"" + fixed(px(48)) + "\" y2=\"" +
           fixed(py(0)) + "\"/>\n";
    svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(py(0)) + "\" x2=\"" + fixed(kLeft) + "\" y2=\"" +
           fixed(py(1)) + "\"/>\n";
    svg += "</g>\n<g class=\"ticks\" text-anchor=\"middle\">\n";
    for (int h = 0; h <= 48; h += 6)
        svg += "<text x=\"" + fixed(px(h)) + "\" y=\"" + fixed(py(0) + 16) + "\">" + std::to_string(h) + "</text>\n";
    for (int k = 0; k <= 10; k += 2) {
        const double a = k / 10.0;
        svg += "<text x=\"" + fixed(kLeft - 20) + "\" y=\"" + fixed(py(a) + 4) + "\">" + fixed(a) + "</text>\n";
    }
    svg += "</g>\n";
    svg += "<text class=\"xlabel\" x=\"" + fixed(kLeft + plot_w / 2) + "\" y=\"" + fixed(kHeight - 12) +
           "\" text-anchor=\"middle\">hours since event start</text>\n";
    svg += "<text class=\"ylabel\" x=\"16\" y=\"" + fixed(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fixed(kTop + plot_h / 2) + ")\">accuracy</text>\n";

    const auto names = series_names(report);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const char* colour = kPalette[i % std::size(kPalette)];
        std::string points;
        for (const auto& row : report.cutoffs)
            for (const auto& s : row.series)
                if (s.name == names[i]) {
                    if (!points.empty()) points += ' ';
                    points += fixed(px(row.hours)) + "," + fixed(py(s.accuracy));
                }
        svg += "<polyline class=\"series\" data-series=\"" + escape_xml(names[i]) + "\" fill=\"none\" stroke=\"" +
               colour + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
        const double lx = kWidth - kRight + 15;
        svg += "<g class=\"legend\"><line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(lx + 20) +
               "\" y2=\"" + fixed(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/><text x=\"" +
               fixed(lx + 26) + "\" y=\"" + fixed(ly + 4) + "\">" + escape_xml(names[i]) + "</text></g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string report_to_json(const EvaluationReport& report) {
    nlohmann::ordered_json j;
    j["seed"] = report.seed;
    j["config_hash"] = report.config_hash;
    j["config"] = report.config.empty() ? nlohmann::ordered_json::object() : nlohmann::ordered_json::parse(report.config);
    j["pretrain_events"] = report.pretrain_events;
    j["classify_events"] = report.classify_events;
    auto& rows = j["cutoffs"] = nlohmann::ordered_json::array();
    for (const auto& row : report.cutoffs) {
        nlohmann::ordered_json r;
        r["hours"] = row.hours;
        r["series"] = nlohmann::ordered_json::array();
        for (const auto& s : row.series) {
            nlohmann::ordered_json js;
            js["name"] = s.name;
            js["accuracy"] = s.accuracy;
            js["fold_accuracy"] = s.fold_accuracy;
            js["importance"] = nlohmann::ordered_json::array();
            for (const auto& e : s.importance) js["importance"].push_back({{"feature", e.feature}, {"importance", e.importance}});
            r["series"].push_back(std::move(js));
        }
        rows.push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        EvaluationReport r;
        r.seed = j.at("seed").get<std::uint64_t>();
        r.config_hash = j.at("config_hash").get<std::string>();
        r.config = nlohmann::ordered_json::parse(j.at("config").dump()).dump();
        r.pretrain_events = j.at("pretrain_events").get<std::vector<std::string>>();
        r.classify_events = j.at("classify_events").get<std::vector<std::string>>();
        for (const auto& jr : j.at("cutoffs")) {
            CutoffResult row;
            row.hours = jr.at("hours").get<double>();
            for (const auto& js : jr.at("series")) {
                SeriesResult s;
                s.name = js.at("name").get<std::string>();
                s.accuracy = js.at("accuracy").get<double>();
                s.fold_accuracy = js.at("fold_accuracy").get<std::vector<double>>();
                for (const auto& e : js.at("importance"))
                    s.importance.push_back({e.at("feature").get<std::string>(), e.at("importance").get<double>()});
                row.series.push_back(std::move(s));
            }
            r.cutoffs.push_back(std::move(row));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed evaluation report: ") + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::filesystem::path emit_report(const EvaluationReport& report, ReportFormat format,
                                  const std::filesystem::path& dir, const std::string& stem) {
    if (format == ReportFormat::svg) {
        const auto path = dir / (stem + ".svg");
        write_text_file(path, render_svg(report));
        return path;
    }
    const auto path = dir / (stem + ".csv");
    write_csv_file(path.string(), accuracy_table(report));
    write_csv_file((dir / (stem + "_folds.csv")).string(), fold_table(report));
    write_csv_file((dir / (stem + "_importance.csv")).string(), importance_table(report));
    return path;
}

}  // namespace rumor

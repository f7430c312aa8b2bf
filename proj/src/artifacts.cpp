#include "rumor/artifacts.hpp"

#include <map>
#include <string>

#include "rumor/errors.hpp"

namespace rumor {

namespace {

std::string label_text(const std::optional<Label>& label) { return label ? std::string(to_string(*label)) : ""; }

std::optional<Label> label_cell(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return parse_label(text);
}

int parse_index(const std::string& text, int limit, const char* what) {
    const double v = parse_number(text);
    if (v != static_cast<int>(v) || v < 0 || v >= limit)
        throw DataError(std::string(what) + " index '" + text + "' out of range");
    return static_cast<int>(v);
}

// Rows keyed by event id, in first-appearance order.
struct EventRows {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const std::vector<std::string>*>> rows;
};

EventRows group_rows(const CsvTable& table) {
    EventRows g;
    const std::size_t id = table.column("event_id");
    for (const auto& r : table.rows) {
        auto [it, fresh] = g.rows.try_emplace(r[id]);
        if (fresh) g.order.push_back(r[id]);
        it->second.push_back(&r);
    }
    return g;
}

}  // namespace

CsvTable features_table(std::span<const Event> events, double hours, int intervals, const FeatureContext& context) {
    CsvTable t;
    t.header = {"event_id", "label", "interval"};
    for (const auto& d : lexical_features()) t.header.emplace_back(d.name);
    t.header.push_back("empty");
    PipelineConfig config;
    config.intervals = intervals;
    config.features = {false, true, false, false};
    for (const auto& e : events) {
        const auto m = build_feature_matrix(e, hours, config, context, nullptr);
        for (int r = 0; r < intervals; ++r) {
            std::vector<std::string> row{e.event_id, label_text(e.label), std::to_string(r)};
            for (int c = 0; c < m.values.cols; ++c) row.push_back(format_number(m.values(r, c)));
            row.push_back(m.empty[r] ? "1" : "0");
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

CsvTable credit_table(std::span<const Event> events, double hours, int intervals, const CredibilityModel& model) {
    CsvTable t{{"event_id", "interval", "credit_score", "tweet_count"}, {}};
    const int active = active_intervals(hours, intervals);
    for (const auto& e : events) {
        const Event cut = truncate_at_cutoff(e, hours);
        const auto series = credit_score(model, bucket_intervals(cut, intervals));
        for (int r = 0; r < active; ++r)
            t.rows.push_back({e.event_id, std::to_string(r), format_number(series.score[r]),
                              std::to_string(series.count[r])});
    }
    return t;
}

CsvTable epi_table(std::span<const Event> events, double hours, int intervals, EpiModel model,
                   const EpiFitConfig& config, EpiMode mode) {
    CsvTable t{{"event_id", "interval"}, {}};
    for (auto name : epi_feature_names(model)) t.header.emplace_back(name);
    for (const char* extra : {"rms", "converged", "evaluations"}) t.header.emplace_back(extra);
    EpiFitCache cache;
    for (const auto& e : events) {
        const auto fits = epi_interval_fits(e, intervals, hours, model, config, mode, &cache);
        for (std::size_t r = 0; r < fits.size(); ++r) {
            std::vector<std::string> row{e.event_id, std::to_string(r)};
            for (double v : fits[r].feature_values()) row.push_back(format_number(v));
            row.push_back(format_number(fits[r].rms_residual));
            row.push_back(fits[r].converged ? "1" : "0");
            row.push_back(std::to_string(fits[r].evaluations));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

EpiModel epi_table_model(const CsvTable& table) {
    for (EpiModel m : {EpiModel::sis, EpiModel::seiz, EpiModel::spikem})
        if (table.has_column(epi_feature_names(m).front())) return m;
    throw DataError("epidemic table has no recognizable parameter columns");
}

Dataset assemble_dsts(const CsvTable& features, const CsvTable* credit, std::span<const CsvTable> epi,
                      const AssembleOptions& options, std::vector<std::optional<Label>>* truth) {
    const int n = options.intervals;
    const int active = active_intervals(options.hours, n);
    FeatureToggles toggles{credit != nullptr, options.crowd, false, false};

    const CsvTable* by_model[3] = {nullptr, nullptr, nullptr};
    for (const auto& table : epi) {
        const auto m = static_cast<std::size_t>(epi_table_model(table));
        if (by_model[m]) throw UsageError("epidemic table for " + std::string(to_string(static_cast<EpiModel>(m))) +
                                          " given twice");
        by_model[m] = &table;
    }
    const bool sis = by_model[static_cast<int>(EpiModel::sis)] != nullptr;
    const bool seiz = by_model[static_cast<int>(EpiModel::seiz)] != nullptr;
    if (sis != seiz) throw UsageError("SIS and SEIZ tables must be given together");
    toggles.epi = sis;
    toggles.spikem = by_model[static_cast<int>(EpiModel::spikem)] != nullptr;
    const auto names = enabled_feature_names(toggles);

    std::map<std::string, std::size_t> column_of;
    for (std::size_t c = 0; c < names.size(); ++c) column_of[names[c]] = c;

    // event -> N x D block
    std::map<std::string, Matrix> blocks;
    std::map<std::string, std::optional<Label>> labels;
    const auto grouped = group_rows(features);
    const std::size_t label_col = features.column("label"), interval_col = features.column("interval");
    std::vector<std::pair<std::size_t, std::size_t>> lexical;  // table column -> matrix column
    for (const auto& d : lexical_features())
        if (auto it = column_of.find(std::string(d.name)); it != column_of.end())
            lexical.emplace_back(features.column(d.name), it->second);
    for (const auto& id : grouped.order) {
        Matrix m(n, static_cast<int>(names.size()));
        const auto& rows = grouped.rows.at(id);
        labels[id] = label_cell((*rows.front())[label_col]);
        for (const auto* r : rows) {
            const int t = parse_index((*r)[interval_col], n, "interval");
            if (t >= active) continue;
            for (auto [src, dst] : lexical) m(t, static_cast<int>(dst)) = parse_number((*r)[src]);
        }
        blocks.emplace(id, std::move(m));
    }

    auto merge = [&](const CsvTable& table, std::span<const std::string> value_columns) {
        const std::size_t id_col = table.column("event_id"), t_col = table.column("interval");
        std::vector<std::pair<std::size_t, std::size_t>> cols;
        for (const auto& name : value_columns) cols.emplace_back(table.column(name), column_of.at(name));
        for (const auto& r : table.rows) {
            const auto it = blocks.find(r[id_col]);
            if (it == blocks.end()) throw DataError("event '" + r[id_col] + "' missing from the feature table");
            const int t = parse_index(r[t_col], n, "interval");
            if (t >= active) continue;
            for (auto [src, dst] : cols) it->second(t, static_cast<int>(dst)) = parse_number(r[src]);
        }
    };
    for (EpiModel m : {EpiModel::sis, EpiModel::seiz, EpiModel::spikem}) {
        if (const CsvTable* table = by_model[static_cast<int>(m)]) {
            std::vector<std::string> cols;
            for (auto name : epi_feature_names(m)) cols.emplace_back(name);
            merge(*table, cols);
        }
    }
    if (credit) {
        const std::vector<std::string> cols{"CreditScore"};
        CsvTable renamed = *credit;
        renamed.header[renamed.column("credit_score")] = "CreditScore";
        merge(renamed, cols);
    }

    Dataset data;
    data.columns = dsts_column_names(names, n);
    const DstsOptions dsts{options.normalize, active};
    const double interval_hours = 48.0 / n;
    for (const auto& id : grouped.order) {
        const auto& label = labels.at(id);
        if (!label && !truth) throw DataError("event '" + id + "' has no label");
        data.add(id, build_dsts_vector(blocks.at(id), interval_hours, dsts), label.value_or(Label::news));
        if (truth) truth->push_back(label);
    }
    return data;
}

CsvTable dataset_table(const Dataset& data, std::span<const std::optional<Label>> truth) {
    if (!truth.empty() && truth.size() != data.rows()) throw UsageError("label list does not match the dataset");
    CsvTable t;
    t.header = {"event_id", "label"};
    t.header.insert(t.header.end(), data.columns.begin(), data.columns.end());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        std::vector<std::string> row{data.ids[i], truth.empty() ? std::string(to_string(data.y[i])) : label_text(truth[i])};
        for (double v : data.row(i)) row.push_back(format_number(v));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Dataset dataset_from_table(const CsvTable& table, std::vector<std::optional<Label>>* truth) {
    if (table.header.size() < 2 || table.header[0] != "event_id" || table.header[1] != "label")
        throw DataError("DSTS table must start with event_id,label");
    Dataset data;
    data.columns.assign(table.header.begin() + 2, table.header.end());
    std::vector<double> values(data.columns.size());
    for (const auto& r : table.rows) {
        const auto label = label_cell(r[1]);
        if (!label && !truth) throw DataError("event '" + r[0] + "' has no label");
        for (std::size_t c = 0; c < values.size(); ++c) values[c] = parse_number(r[c + 2]);
        data.add(r[0], values, label.value_or(Label::news));
        if (truth) truth->push_back(label);
    }
    return data;
}

CsvTable predictions_table(std::span<const std::string> ids, std::span<const std::optional<Label>> truth,
                           std::span<const Prediction> predictions) {
    if (ids.size() != truth.size() || ids.size() != predictions.size())
        throw UsageError("prediction columns differ in length");
    CsvTable t{{"event_id", "label", "predicted", "p_rumor"}, {}};
    for (std::size_t i = 0; i < ids.size(); ++i)
        t.rows.push_back({ids[i], label_text(truth[i]), std::string(to_string(predictions[i].label)),
                          format_number(predictions[i].p_rumor)});
    return t;
}

CsvTable ranking_table(std::span<const ImportanceEntry> importance) {
    CsvTable t{{"rank", "feature", "importance"}, {}};
    for (std::size_t i = 0; i < importance.size(); ++i)
        t.rows.push_back({std::to_string(i + 1), importance[i].feature, format_number(importance[i].importance)});
    return t;
}

CsvTable split_table(const EventSplit& split) {
    CsvTable t{{"event_id", "role"}, {}};
    for (const auto& id : split.pretrain) t.rows.push_back({id, "pretrain"});
    for (const auto& id : split.classify) t.rows.push_back({id, "classify"});
    return t;
}

}  // namespace rumor

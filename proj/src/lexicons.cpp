#include "rumor/lexicons.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rumor/errors.hpp"
#include "rumor/text.hpp"

namespace rumor {

namespace builtin_lexicon_text {
extern const std::string_view positive;
extern const std::string_view negative;
extern const std::string_view debunking;
extern const std::string_view pronouns_first;
extern const std::string_view pronouns_second;
extern const std::string_view pronouns_third;
extern const std::string_view large_cities;
extern const std::string_view domains;
}  // namespace builtin_lexicon_text

std::set<std::string> parse_term_list(std::string_view content) {
    std::set<std::string> terms;
    std::istringstream in{std::string(content)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        terms.insert(to_lower_ascii(line.substr(first, last - first + 1)));
    }
    return terms;
}

const Lexicons& Lexicons::builtin() {
    static const Lexicons lex = [] {
        namespace t = builtin_lexicon_text;
        Lexicons l;
        l.positive_words = parse_term_list(t::positive);
        l.negative_words = parse_term_list(t::negative);
        l.debunking_terms = parse_term_list(t::debunking);
        l.pronouns_first = parse_term_list(t::pronouns_first);
        l.pronouns_second = parse_term_list(t::pronouns_second);
        l.pronouns_third = parse_term_list(t::pronouns_third);
        l.large_cities = parse_term_list(t::large_cities);
        return l;
    }();
    return lex;
}

Lexicons Lexicons::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw DataError("lexicon directory not found: " + dir.string());
    Lexicons lex = builtin();
    auto load = [&](const char* name, std::set<std::string>& target) {
        const auto path = dir / name;
        if (!std::filesystem::exists(path)) return;
        std::ifstream in(path);
        if (!in) throw DataError("cannot read lexicon " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        target = parse_term_list(buf.str());
    };
    load("positive.txt", lex.positive_words);
    load("negative.txt", lex.negative_words);
    load("debunking.txt", lex.debunking_terms);
    load("pronouns_first.txt", lex.pronouns_first);
    load("pronouns_second.txt", lex.pronouns_second);
    load("pronouns_third.txt", lex.pronouns_third);
    load("large_cities.txt", lex.large_cities);
    return lex;
}

std::string normalize_domain(std::string_view domain) {
    std::string d = to_lower_ascii(domain);
    if (d.rfind("www.", 0) == 0) d.erase(0, 4);
    return d;
}

void DomainMetadata::insert(std::string domain, DomainInfo info) {
    entries_[normalize_domain(domain)] = info;
}

DomainInfo DomainMetadata::lookup(std::string_view domain) const {
    const auto it = entries_.find(normalize_domain(domain));
    return it == entries_.end() ? DomainInfo{} : it->second;
}

double DomainMetadata::wot_score(std::string_view domain) const {
    return lookup(domain).wot_score.value_or(kNeutralWot);
}

DomainMetadata DomainMetadata::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open domain metadata " + path.string());
    return parse(in);
}

const DomainMetadata& DomainMetadata::builtin() {
    static const DomainMetadata meta = [] {
        std::istringstream in{std::string(builtin_lexicon_text::domains)};
        return parse(in);
    }();
    return meta;
}

DomainMetadata DomainMetadata::parse(std::istream& in) {
    DomainMetadata meta;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line, std::string("malformed domain record: ") + e.what());
        }
        if (!rec.is_object() || !rec.contains("domain") || !rec["domain"].is_string())
            throw ParseError(line, "domain record needs a string 'domain'");
        DomainInfo info;
        if (auto it = rec.find("wot_score"); it != rec.end() && !it->is_null()) {
            if (!it->is_number()) throw ParseError(line, "wot_score must be numeric");
            const double w = it->get<double>();
            if (w < 0.0 || w > 100.0) throw ParseError(line, "wot_score outside [0, 100]");
            info.wot_score = w;
        }
        if (auto it = rec.find("rank"); it != rec.end() && !it->is_null()) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 1)
                throw ParseError(line, "rank must be a positive integer");
            info.rank = it->get<std::int64_t>();
        }
        if (auto it = rec.find("is_news"); it != rec.end()) {
            if (!it->is_boolean()) throw ParseError(line, "is_news must be a boolean");
            info.is_news = it->get<bool>();
        }
        meta.insert(rec["domain"].get<std::string>(), info);
    }
    return meta;
}

}  // namespace rumor

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rumor {

struct Lexicons {
    std::set<std::string> positive_words;
    std::set<std::string> negative_words;
    std::set<std::string> debunking_terms;  // words or space-separated phrases
    std::vector<std::string> emoticon_smile{":->", ":-)", ";->", ";-)"};
    std::vector<std::string> emoticon_sad{":-<", ":-(", ";->", ";-("};
    std::set<std::string> pronouns_first;
    std::set<std::string> pronouns_second;
    std::set<std::string> pronouns_third;
    std::set<std::string> large_cities;

    // The curated lists shipped under data/lexicons, compiled in.
    static const Lexicons& builtin();

    // Reads <dir>/{positive,negative,debunking,pronouns_first,pronouns_second,
    // pronouns_third,large_cities}.txt. A missing file keeps the builtin list.
    static Lexicons load_dir(const std::filesystem::path& dir);

    bool operator==(const Lexicons&) const = default;
};

// One term per line, '#' starts a comment, entries lowercased and trimmed.
std::set<std::string> parse_term_list(std::string_view content);

struct DomainInfo {
    std::optional<double> wot_score;  // 0..100
    std::optional<std::int64_t> rank;
    bool is_news = false;

    bool operator==(const DomainInfo&) const = default;
};

class DomainMetadata {
public:
    static constexpr double kNeutralWot = 50.0;

    DomainMetadata() = default;

    void insert(std::string domain, DomainInfo info);

    // Total: unknown domains get {wot 50, no rank, not news}. Lookup is
    // case-insensitive and ignores a leading "www.".
    DomainInfo lookup(std::string_view domain) const;
    double wot_score(std::string_view domain) const;

    std::size_t size() const { return entries_.size(); }

    // Line-delimited {"domain", "wot_score"?, "rank"?, "is_news"}.
    static DomainMetadata load(const std::filesystem::path& path);
    static DomainMetadata parse(std::istream& in);

    // The sample snapshot shipped as data/domains.jsonl, compiled in.
    static const DomainMetadata& builtin();

private:
    std::map<std::string, DomainInfo, std::less<>> entries_;
};

std::string normalize_domain(std::string_view domain);

}  // namespace rumor

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/timeutil.hpp"

namespace rumor {

enum class Label { rumor, news };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);  // throws DataError

struct UserProfile {
    std::int64_t followers = 0;
    std::int64_t friends = 0;
    std::int64_t tweets_posted = 0;
    std::int64_t photos_posted = 0;
    std::optional<std::string> city;
    Timestamp join_date{};
    bool has_description = false;
    bool verified = false;

    bool operator==(const UserProfile&) const = default;
};

struct Tweet {
    std::string id;
    std::string text;
    Timestamp created_at{};
    bool is_retweet = false;
    std::int64_t retweet_count = 0;
    std::vector<std::string> urls;  // domains
    std::int64_t hashtag_count = 0;
    std::int64_t mention_count = 0;
    UserProfile user;

    bool operator==(const Tweet&) const = default;
};

// The 48-hour observation frame anchored before the busiest hour.
struct EventWindow {
    Timestamp t_max{};  // start of the busiest clock hour
    Timestamp t_0{};
    Timestamp t_end{};  // t_0 + 48h
    int interval_count = 48;

    std::chrono::seconds interval_length() const { return kWindowLength / interval_count; }
    bool contains(Timestamp t) const { return t_0 <= t && t < t_end; }

    bool operator==(const EventWindow&) const = default;
};

struct Event {
    std::string event_id;
    std::optional<Label> label;
    std::optional<std::string> category;
    std::vector<Tweet> tweets;  // ascending created_at
    EventWindow window;

    bool operator==(const Event&) const = default;
};

// Tweets of one interval: a contiguous view into the owning event's tweets.
struct IntervalBucket {
    int index = 0;
    std::span<const Tweet> tweets;
};

inline constexpr int kCorpusSchemaVersion = 1;

// One JSON record per line (schema "v": 1). Events keep their first-appearance
// order; tweets are sorted by time and deduplicated by id (first kept).
std::vector<Event> parse_corpus(std::istream& in, int interval_count = 48);
std::vector<Event> read_corpus_file(const std::string& path, int interval_count = 48);

void write_corpus(std::ostream& out, std::span<const Event> events);
void write_corpus_file(const std::string& path, std::span<const Event> events);

std::string serialize_tweet_line(const Event& event, const Tweet& tweet);

// Busiest hour (earliest on ties), then the first tweet in [t_max - 48h, end of
// the busiest hour). Throws DataError on an empty list.
EventWindow select_event_window(std::span<const Tweet> tweets, int interval_count = 48);

// Tweets in [t_0, t_end) split into `intervals` equal buckets. Throws UsageError
// when intervals < 1.
std::vector<IntervalBucket> bucket_intervals(const Event& event, int intervals);

// Only in-window tweets created before t_0 + hours; the window is kept.
// Throws UsageError unless 0 < hours <= 48.
Event truncate_at_cutoff(const Event& event, double hours);

// Build an Event from loose tweets: sorts, deduplicates and selects the window.
Event make_event(std::string event_id, std::optional<Label> label, std::vector<Tweet> tweets,
                 int interval_count = 48, std::optional<std::string> category = std::nullopt);

}  // namespace rumor

#include "rumor/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rumor/errors.hpp"

namespace rumor {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Label label) { return label == Label::rumor ? "rumor" : "news"; }

Label parse_label(std::string_view text) {
    if (text == "rumor") return Label::rumor;
    if (text == "news") return Label::news;
    throw DataError("unknown label '" + std::string(text) + "'");
}

namespace {

const json& require(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(line, std::string("missing required field '") + key + "'");
    return *it;
}

std::int64_t require_count(const json& obj, const char* key, std::size_t line) {
    const json& v = require(obj, key, line);
    if (!v.is_number_integer()) throw ParseError(line, std::string("field '") + key + "' must be an integer");
    const auto n = v.get<std::int64_t>();
    if (n < 0) throw ParseError(line, std::string("field '") + key + "' must be non-negative");
    return n;
}

bool require_bool(const json& obj, const char* key, std::size_t line) {
    const json& v = require(obj, key, line);
    if (!v.is_boolean()) throw ParseError(line, std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
    const json& v = require(obj, key, line);
    if (!v.is_string()) throw ParseError(line, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Timestamp require_time(const json& obj, const char* key, std::size_t line) {
    const std::string text = require_string(obj, key, line);
    try {
        return parse_iso8601(text);
    } catch (const DataError& e) {
        throw ParseError(line, e.what());
    }
}

struct ParsedLine {
    std::string event_id;
    std::optional<Label> label;
    std::optional<std::string> category;
    Tweet tweet;
};

ParsedLine parse_line(const std::string& text, std::size_t line) {
    json rec;
    try {
        rec = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(line, std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(line, "record is not a JSON object");

    const json& version = require(rec, "v", line);
    if (!version.is_number_integer() || version.get<int>() != kCorpusSchemaVersion)
        throw ParseError(line, "unsupported schema version");

    ParsedLine out;
    out.event_id = require_string(rec, "event_id", line);
    if (out.event_id.empty()) throw ParseError(line, "empty event_id");

    const json& label = require(rec, "label", line);
    if (label.is_string()) {
        try {
            out.label = parse_label(label.get<std::string>());
        } catch (const DataError& e) {
            throw ParseError(line, e.what());
        }
    } else if (!label.is_null()) {
        throw ParseError(line, "label must be \"rumor\", \"news\" or null");
    }
    if (auto it = rec.find("category"); it != rec.end() && !it->is_null()) {
        if (!it->is_string()) throw ParseError(line, "category must be a string");
        out.category = it->get<std::string>();
    }

    const json& tw = require(rec, "tweet", line);
    if (!tw.is_object()) throw ParseError(line, "'tweet' must be an object");
    Tweet& t = out.tweet;
    t.id = require_string(tw, "id", line);
    if (t.id.empty()) throw ParseError(line, "empty tweet id");
    t.text = require_string(tw, "text", line);
    if (t.text.empty()) throw ParseError(line, "empty tweet text");
    t.created_at = require_time(tw, "created_at", line);
    t.is_retweet = require_bool(tw, "is_retweet", line);
    t.retweet_count = require_count(tw, "retweet_count", line);
    const json& urls = require(tw, "urls", line);
    if (!urls.is_array()) throw ParseError(line, "'urls' must be an array");
    for (const json& u : urls) {
        if (!u.is_string()) throw ParseError(line, "url entries must be strings");
        t.urls.push_back(u.get<std::string>());
    }
    t.hashtag_count = require_count(tw, "hashtag_count", line);
    t.mention_count = require_count(tw, "mention_count", line);

    const json& user = require(rec, "user", line);
    if (!user.is_object()) throw ParseError(line, "'user' must be an object");
    UserProfile& u = t.user;
    u.followers = require_count(user, "followers", line);
    u.friends = require_count(user, "friends", line);
    u.tweets_posted = require_count(user, "tweets_posted", line);
    u.photos_posted = require_count(user, "photos_posted", line);
    const json& city = require(user, "city", line);
    if (city.is_string())
        u.city = city.get<std::string>();
    else if (!city.is_null())
        throw ParseError(line, "city must be a string or null");
    u.join_date = require_time(user, "join_date", line);
    u.has_description = require_bool(user, "has_description", line);
    u.verified = require_bool(user, "verified", line);
    return out;
}

}  // namespace

Event make_event(std::string event_id, std::optional<Label> label, std::vector<Tweet> tweets,
                 int interval_count, std::optional<std::string> category) {
    Event ev;
    ev.event_id = std::move(event_id);
    ev.label = label;
    ev.category = std::move(category);

    std::unordered_set<std::string> seen;
    ev.tweets.reserve(tweets.size());
    for (auto& t : tweets)
        if (seen.insert(t.id).second) ev.tweets.push_back(std::move(t));
    std::stable_sort(ev.tweets.begin(), ev.tweets.end(),
                     [](const Tweet& a, const Tweet& b) { return a.created_at < b.created_at; });
    ev.window = select_event_window(ev.tweets, interval_count);
    return ev;
}

std::vector<Event> parse_corpus(std::istream& in, int interval_count) {
    struct Pending {
        std::optional<Label> label;
        std::optional<std::string> category;
        std::vector<Tweet> tweets;
        std::size_t first_line = 0;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, Pending> groups;

    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        ParsedLine rec = parse_line(text, line);
        auto [it, inserted] = groups.try_emplace(rec.event_id);
        Pending& g = it->second;
        if (inserted) {
            order.push_back(rec.event_id);
            g.label = rec.label;
            g.first_line = line;
        } else if (g.label != rec.label) {
            throw ParseError(line, "label disagrees with earlier records of event '" + rec.event_id + "'");
        }
        if (!g.category && rec.category) g.category = rec.category;
        g.tweets.push_back(std::move(rec.tweet));
    }

    std::vector<Event> events;
    events.reserve(order.size());
    for (const auto& id : order) {
        Pending& g = groups.at(id);
        events.push_back(make_event(id, g.label, std::move(g.tweets), interval_count, g.category));
    }
    return events;
}

std::vector<Event> read_corpus_file(const std::string& path, int interval_count) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus '" + path + "'");
    return parse_corpus(in, interval_count);
}

std::string serialize_tweet_line(const Event& event, const Tweet& t) {
    ordered_json rec;
    rec["v"] = kCorpusSchemaVersion;
    rec["event_id"] = event.event_id;
    rec["label"] = event.label ? json(std::string(to_string(*event.label))) : json(nullptr);
    rec["category"] = event.category ? json(*event.category) : json(nullptr);

    ordered_json tw;
    tw["id"] = t.id;
    tw["text"] = t.text;
    tw["created_at"] = format_iso8601(t.created_at);
    tw["is_retweet"] = t.is_retweet;
    tw["retweet_count"] = t.retweet_count;
    tw["urls"] = t.urls;
    tw["hashtag_count"] = t.hashtag_count;
    tw["mention_count"] = t.mention_count;
    rec["tweet"] = std::move(tw);

    ordered_json u;
    u["followers"] = t.user.followers;
    u["friends"] = t.user.friends;
    u["tweets_posted"] = t.user.tweets_posted;
    u["photos_posted"] = t.user.photos_posted;
    u["city"] = t.user.city ? json(*t.user.city) : json(nullptr);
    u["join_date"] = format_iso8601(t.user.join_date);
    u["has_description"] = t.user.has_description;
    u["verified"] = t.user.verified;
    rec["user"] = std::move(u);
    return rec.dump();
}

void write_corpus(std::ostream& out, std::span<const Event> events) {
    for (const auto& ev : events)
        for (const auto& t : ev.tweets) out << serialize_tweet_line(ev, t) << '\n';
}

void write_corpus_file(const std::string& path, std::span<const Event> events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus '" + path + "'");
    write_corpus(out, events);
    if (!out) throw DataError("write failed for '" + path + "'");
}

EventWindow select_event_window(std::span<const Tweet> tweets, int interval_count) {
    using namespace std::chrono;
    if (tweets.empty()) throw DataError("cannot select a window for an event without tweets");
    if (interval_count < 1) throw UsageError("interval count must be >= 1");

    std::map<Timestamp, int> per_hour;
    for (const auto& t : tweets) ++per_hour[floor<hours>(t.created_at)];
    Timestamp t_max = per_hour.begin()->first;
    int best = 0;
    for (const auto& [hour, count] : per_hour) {
        if (count > best) {  // strict: earliest hour wins ties
            best = count;
            t_max = hour;
        }
    }

    const Timestamp lo = t_max - kWindowLength;
    const Timestamp hi = t_max + hours{1};
    std::optional<Timestamp> t_0;
    for (const auto& t : tweets)
        if (t.created_at >= lo && t.created_at < hi && (!t_0 || t.created_at < *t_0)) t_0 = t.created_at;

    EventWindow w;
    w.t_max = t_max;
    w.t_0 = *t_0;
    w.t_end = *t_0 + kWindowLength;
    w.interval_count = interval_count;
    return w;
}

std::vector<IntervalBucket> bucket_intervals(const Event& event, int intervals) {
    if (intervals < 1) throw UsageError("interval count must be >= 1");
    const auto& tw = event.tweets;
    const auto& w = event.window;
    const auto by_time = [](const Tweet& t, Timestamp v) { return t.created_at < v; };
    const auto first = std::lower_bound(tw.begin(), tw.end(), w.t_0, by_time);
    const auto last = std::lower_bound(first, tw.end(), w.t_end, by_time);

    const std::int64_t window_s = kWindowLength.count();
    std::vector<IntervalBucket> buckets(static_cast<std::size_t>(intervals));
    auto it = first;
    for (int k = 0; k < intervals; ++k) {
        auto end = std::find_if(it, last, [&](const Tweet& t) {
            return (t.created_at - w.t_0).count() * intervals >= static_cast<std::int64_t>(k + 1) * window_s;
        });
        buckets[k].index = k;
        buckets[k].tweets = std::span<const Tweet>(tw.data() + (it - tw.begin()), static_cast<std::size_t>(end - it));
        it = end;
    }
    return buckets;
}

Event truncate_at_cutoff(const Event& event, double hours) {
    if (!(hours > 0.0 && hours <= 48.0)) throw UsageError("cutoff hours must lie in (0, 48]");
    Event out;
    out.event_id = event.event_id;
    out.label = event.label;
    out.category = event.category;
    out.window = event.window;
    const double limit = hours * 3600.0;
    for (const auto& t : event.tweets) {
        if (t.created_at < event.window.t_0) continue;
        if (static_cast<double>((t.created_at - event.window.t_0).count()) < limit) out.tweets.push_back(t);
    }
    return out;
}

}  // namespace rumor

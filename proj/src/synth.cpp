#include "rumor/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <string_view>

#include "rumor/errors.hpp"

namespace rumor {

namespace {

using Rng = std::mt19937_64;

constexpr std::array<std::string_view, 40> kFiller{
    "the",    "a",      "in",     "on",      "at",       "people", "city",     "video",   "photo",
    "street", "update", "now",    "today",   "tonight",  "near",   "center",   "local",   "crowd",
    "police", "after",  "before", "this",    "that",     "was",    "is",       "are",     "just",
    "saw",    "seen",   "scene",  "area",    "road",     "station", "building", "morning", "evening",
    "there",  "from",   "with",   "about"};

// Class-specific vocabulary the credibility network can pick up; none of it
// appears in the sentiment, debunking or pronoun lists.
constexpr std::array<std::string_view, 12> kRumorVocab{"allegedly", "apparently", "supposedly", "somebody",
                                                       "whispers",  "anonymous",  "leaked",     "insider",
                                                       "secretly",  "coverup",    "rumoured",   "claims"};
constexpr std::array<std::string_view, 12> kNewsVocab{"officials", "announced", "statement", "spokesperson",
                                                      "ministry",  "confirmed", "briefing",  "according",
                                                      "agency",    "press",     "department", "authorities"};

constexpr std::array<std::string_view, 6> kNegative{"shocking", "panic", "terror", "chaos", "crisis", "danger"};
constexpr std::array<std::string_view, 6> kPositive{"good", "hope", "calm", "glad", "fine", "safe"};
constexpr std::array<std::string_view, 5> kDebunk{"hoax", "fake", "not true", "unconfirmed", "debunked"};
constexpr std::array<std::string_view, 5> kReputable{"reuters.com", "bbc.co.uk", "apnews.com", "nytimes.com",
                                                     "theguardian.com"};
constexpr std::array<std::string_view, 5> kDubious{"viralbuzz.net", "truthleaks.org", "dailyshock.info",
                                                   "blogspot.com", "bit.ly"};
constexpr std::array<std::string_view, 4> kCities{"london", "tokyo", "paris", "munich"};

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

bool chance(Rng& rng, double p) { return uniform(rng) < std::clamp(p, 0.0, 1.0); }

template <std::size_t K>
std::string_view pick(Rng& rng, const std::array<std::string_view, K>& pool) {
    return pool[std::uniform_int_distribution<std::size_t>(0, K - 1)(rng)];
}

std::string padded(int value, int width) {
    std::string s = std::to_string(value);
    return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

struct EventStyle {
    double lean;    // +1 rumor, -1 news
    double margin;  // surface/user/volume separation
    double plant;   // probability of class vocabulary per tweet
};

class EventGenerator {
public:
    EventGenerator(Rng& rng, const SynthConfig& cfg, EventStyle style) : rng_(rng), cfg_(cfg), style_(style) {}

    // Signal strength for a tweet posted `hours` after the first tweet.
    double strength(double hours) const {
        const double ramp = std::clamp(hours / cfg_.growth_hours, 0.0, 1.0);
        return style_.margin * (cfg_.early_signal + (1.0 - cfg_.early_signal) * ramp);
    }

    double arrival_hours() {
        // Rumours carry a secondary burst later in the window.
        const double second = 0.3 * std::min(style_.margin, 1.0) * (style_.lean > 0 ? 1.0 : 0.0);
        for (;;) {
            double h;
            if (chance(rng_, second))
                h = 20.0 + 10.0 * uniform(rng_);
            else
                h = std::gamma_distribution<double>(3.0, 4.0)(rng_);
            if (h < 47.5) return h;
        }
    }

    Tweet tweet(std::string id, Timestamp first, double hours) {
        const double s = strength(hours);
        const double lean = style_.lean;
        Tweet t;
        t.id = std::move(id);
        t.created_at = first + std::chrono::seconds(static_cast<std::int64_t>(hours * 3600.0));

        std::vector<std::string> words;
        const int length = std::uniform_int_distribution<int>(6, 13)(rng_);
        for (int i = 0; i < length; ++i) words.emplace_back(pick(rng_, kFiller));
        auto insert = [&](std::string_view w) {
            const auto at = std::uniform_int_distribution<std::size_t>(0, words.size())(rng_);
            words.insert(words.begin() + static_cast<std::ptrdiff_t>(at), std::string(w));
        };
        if (chance(rng_, style_.plant)) {
            const int count = std::uniform_int_distribution<int>(1, 2)(rng_);
            for (int i = 0; i < count; ++i) insert(lean > 0 ? pick(rng_, kRumorVocab) : pick(rng_, kNewsVocab));
        }
        if (chance(rng_, 0.08 + 0.08 * lean * s)) insert(pick(rng_, kDebunk));
        if (chance(rng_, 0.2 + 0.15 * lean * s)) insert(pick(rng_, kNegative));
        if (chance(rng_, 0.2 - 0.1 * lean * s)) insert(pick(rng_, kPositive));
        if (chance(rng_, 0.15 + 0.1 * lean * s)) insert("i");
        if (chance(rng_, 0.1)) insert("they");

        std::string text;
        for (const auto& w : words) {
            if (!text.empty()) text += ' ';
            text += w;
        }
        if (chance(rng_, 0.15 + 0.12 * lean * s)) text += " ?";
        if (chance(rng_, 0.15 + 0.1 * lean * s)) text += " !";
        if (chance(rng_, 0.05)) text += " :-)";
        if (chance(rng_, 0.1 + 0.08 * lean * s)) text = "BREAKING " + text;

        if (chance(rng_, 0.5 - 0.15 * lean * s)) {
            const bool reputable = chance(rng_, 0.5 - 0.3 * lean * s);
            const std::string_view domain = reputable ? pick(rng_, kReputable) : pick(rng_, kDubious);
            t.urls.emplace_back(domain);
            text += " https://" + std::string(domain) + "/" + padded(static_cast<int>(rng_() % 100000), 5);
        }
        const std::int64_t hashtags = std::poisson_distribution<int>(std::max(0.05, 0.6 + 0.3 * lean * s))(rng_);
        for (std::int64_t i = 0; i < hashtags; ++i) text += " #topic" + std::to_string(rng_() % 20);
        t.hashtag_count = hashtags;
        if (chance(rng_, 0.2)) {
            text = "@user" + std::to_string(rng_() % 1000) + " " + text;
            t.mention_count = 1;
        }
        t.text = std::move(text);

        t.is_retweet = chance(rng_, 0.3 + 0.1 * lean * s);
        t.retweet_count = std::poisson_distribution<int>(std::max(0.1, 3.0 + 1.5 * lean * s))(rng_);

        UserProfile& u = t.user;
        auto lognormal = [&](double mu) {
            return static_cast<std::int64_t>(std::lognormal_distribution<double>(mu, 1.0)(rng_));
        };
        u.followers = lognormal(6.0 - 0.8 * lean * s);
        u.friends = lognormal(5.5 + 0.3 * lean * s);
        u.tweets_posted = lognormal(7.0);
        u.photos_posted = lognormal(3.0);
        if (chance(rng_, 0.3 - 0.1 * lean * s)) u.city = std::string(pick(rng_, kCities));
        const double age_days = std::max(0.0, std::normal_distribution<double>(900.0 - 400.0 * lean * s, 250.0)(rng_));
        u.join_date = t.created_at - std::chrono::seconds(static_cast<std::int64_t>(age_days * 86400.0));
        u.has_description = chance(rng_, 0.6 - 0.15 * lean * s);
        u.verified = chance(rng_, 0.08 - 0.06 * lean * s);
        return t;
    }

private:
    Rng& rng_;
    const SynthConfig& cfg_;
    EventStyle style_;
};

void validate(int n_events, const SynthConfig& c) {
    if (n_events < 2) throw UsageError("a synthetic corpus needs at least 2 events");
    if (!(c.margin >= 0.0) || !std::isfinite(c.margin)) throw UsageError("margin must be a finite value >= 0");
    if (!(c.credit_strength >= 0.0 && c.credit_strength <= 1.0))
        throw UsageError("credit_strength must lie in [0, 1]");
    if (!(c.early_signal >= 0.0 && c.early_signal <= 1.0)) throw UsageError("early_signal must lie in [0, 1]");
    if (!(c.growth_hours > 0.0)) throw UsageError("growth_hours must be positive");
    if (c.min_tweets < 10 || c.max_tweets < c.min_tweets) throw UsageError("need 10 <= min_tweets <= max_tweets");
    if (c.early_tweets < 0 || c.stray_tweets < 0) throw UsageError("tweet counts must be non-negative");
    if (c.interval_count < 1) throw UsageError("interval count must be positive");
}

}  // namespace

std::vector<Event> generate_synthetic_corpus(std::uint64_t seed, int n_events, const SynthConfig& config) {
    validate(n_events, config);
    using namespace std::chrono;
    const Timestamp epoch = sys_days{year{2016} / 1 / 4} + hours{8};
    std::vector<Event> events;
    events.reserve(static_cast<std::size_t>(n_events));
    for (int e = 0; e < n_events; ++e) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(e), std::uint64_t{0x5eed}};
        Rng rng(seq);
        const Label label = e % 2 == 0 ? Label::rumor : Label::news;
        const EventStyle style{label == Label::rumor ? 1.0 : -1.0, config.margin,
                               0.5 * std::min(config.margin, 1.0) * config.credit_strength};
        EventGenerator gen(rng, config, style);

        const std::string id = "synth-" + padded(e + 1, 4);
        const Timestamp first = epoch + hours{96 * e} + minutes{static_cast<int>(rng() % 600)};
        const int body = std::uniform_int_distribution<int>(config.min_tweets, config.max_tweets)(rng);

        std::vector<Tweet> tweets;
        int serial = 0;
        auto next_id = [&] { return id + "-" + padded(serial++, 5); };
        tweets.push_back(gen.tweet(next_id(), first, 0.0));
        for (int i = 0; i < config.early_tweets; ++i) tweets.push_back(gen.tweet(next_id(), first, uniform(rng)));
        for (int i = 0; i < body; ++i) tweets.push_back(gen.tweet(next_id(), first, gen.arrival_hours()));
        for (int i = 0; i < config.stray_tweets; ++i) {
            tweets.push_back(gen.tweet(next_id(), first, -60.0 - 40.0 * uniform(rng)));
            tweets.push_back(gen.tweet(next_id(), first, 50.0 + 20.0 * uniform(rng)));
        }
        events.push_back(make_event(id, label, std::move(tweets), config.interval_count, std::string("synthetic")));
    }
    return events;
}

}  // namespace rumor

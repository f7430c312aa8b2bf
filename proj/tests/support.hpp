#pragma once

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "rumor/corpus.hpp"

namespace rumor::testing {

inline Timestamp base_time() {
    using namespace std::chrono;
    return sys_days{year{2016} / 7 / 22} + hours{16};
}

inline Timestamp at_hours(double h) {
    return base_time() + std::chrono::seconds(static_cast<std::int64_t>(h * 3600.0));
}

inline Tweet make_tweet(std::string id, std::string text, Timestamp when) {
    Tweet t;
    t.id = std::move(id);
    t.text = std::move(text);
    t.created_at = when;
    t.user.followers = 10;
    t.user.friends = 10;
    t.user.join_date = when - std::chrono::hours(24 * 100);
    return t;
}

// Events with random arrival times spread over ~60 hours, some stray early tweets.
inline Event random_event(std::mt19937_64& rng, const std::string& id, int n_tweets) {
    std::uniform_real_distribution<double> hours(0.0, 60.0);
    std::vector<Tweet> tweets;
    for (int i = 0; i < n_tweets; ++i)
        tweets.push_back(make_tweet(id + "-" + std::to_string(i), "tweet number " + std::to_string(i),
                                    at_hours(hours(rng))));
    tweets.push_back(make_tweet(id + "-early", "stray early tweet", at_hours(-200.0)));
    return make_event(id, (rng() & 1) ? Label::rumor : Label::news, std::move(tweets));
}

}  // namespace rumor::testing

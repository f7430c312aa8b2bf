#include <doctest.h>

#include <sstream>

#include "rumor/crossval.hpp"
#include "rumor/errors.hpp"
#include "rumor/lexfeatures.hpp"
#include "rumor/pipeline.hpp"
#include "rumor/synth.hpp"

using namespace rumor;

namespace {

std::string serialized(const std::vector<Event>& events) {
    std::ostringstream out;
    write_corpus(out, events);
    return out.str();
}

double lexical_cv_accuracy(const std::vector<Event>& events, std::uint64_t seed) {
    PipelineConfig config;
    config.seed = seed;
    config.features = {false, true, false, false};
    config.model.forest.n_trees = 100;
    std::vector<std::string> ids;
    for (const auto& e : events) ids.push_back(e.event_id);
    const auto context = FeatureContext::from_config(config);
    const Dataset data = build_dataset(events, ids, 48.0, config, context, nullptr);
    ModelSpec spec = config.model;
    spec.forest.seed = seed;
    return cross_validate(data, make_learner(spec), 10, seed).mean_accuracy;
}

}  // namespace

TEST_CASE("same seed gives a byte-identical corpus") {
    CHECK(serialized(generate_synthetic_corpus(7, 6)) == serialized(generate_synthetic_corpus(7, 6)));
    CHECK(serialized(generate_synthetic_corpus(7, 6)) != serialized(generate_synthetic_corpus(8, 6)));
}

TEST_CASE("classes are balanced and labelled") {
    const auto events = generate_synthetic_corpus(1, 10);
    REQUIRE(events.size() == 10);
    int rumors = 0;
    for (const auto& e : events) {
        REQUIRE(e.label.has_value());
        rumors += *e.label == Label::rumor;
    }
    CHECK(rumors == 5);
}

TEST_CASE("generator rejects too few events") {
    CHECK_THROWS_AS(generate_synthetic_corpus(1, 1), UsageError);
    SynthConfig bad;
    bad.margin = -1.0;
    CHECK_THROWS_AS(generate_synthetic_corpus(1, 4, bad), UsageError);
}

TEST_CASE("window starts at the first in-window tweet and strays fall outside") {
    for (const auto& e : generate_synthetic_corpus(3, 8)) {
        std::size_t inside = 0;
        for (const auto& t : e.tweets) inside += e.window.contains(t.created_at);
        CHECK(inside < e.tweets.size());
        bool found = false;
        for (const auto& t : e.tweets) found = found || t.created_at == e.window.t_0;
        CHECK(found);
        CHECK(e.window.t_end - e.window.t_0 == std::chrono::hours(48));
    }
}

TEST_CASE("rumor events carry more debunking language") {
    const auto events = generate_synthetic_corpus(5, 20);
    double rumor = 0, news = 0;
    for (const auto& e : events) {
        const auto cut = truncate_at_cutoff(e, 48.0);
        std::vector<Tweet> tweets;
        for (const auto& t : cut.tweets)
            if (cut.window.contains(t.created_at)) tweets.push_back(t);
        const double w = crowd_wisdom(tweets, Lexicons::builtin());
        (*e.label == Label::rumor ? rumor : news) += w;
    }
    CHECK(rumor > news);
}

TEST_CASE("margin zero is indistinguishable, full margin separable") {
    SynthConfig null_cfg;
    null_cfg.margin = 0.0;
    const double null_acc = lexical_cv_accuracy(generate_synthetic_corpus(11, 200, null_cfg), 11);
    CHECK(null_acc >= 0.4);
    CHECK(null_acc <= 0.6);
    const double acc = lexical_cv_accuracy(generate_synthetic_corpus(11, 60), 11);
    CHECK(acc >= 0.9);
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rumor/credibility.hpp"
#include "rumor/errors.hpp"
#include "support.hpp"

using namespace rumor;

namespace {

CredibilityHyper tiny_hyper() {
    CredibilityHyper h;
    h.embedding = 4;
    h.window = 2;
    h.filters = 3;
    h.pool = 2;
    h.hidden = 5;
    h.max_length = 6;
    h.seed = 42;
    return h;
}

Vocabulary tiny_vocab() {
    const std::vector<std::string> texts{"alpha beta gamma", "beta delta", "epsilon alpha"};
    return build_vocabulary(texts);
}

CredibilityModel tiny_model() {
    auto model = init_model(tiny_hyper(), tiny_vocab());
    // Larger weights than the default init keep gradients well away from zero.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const auto L = model.layout();
    for (std::size_t i = L.embedding + model.hyper.embedding; i < model.params.size(); ++i) model.params[i] = u(rng);
    return model;
}

// Straightforward re-implementation of the inference pass.
ClassProbabilities naive_forward(const CredibilityModel& model, const std::vector<int>& tokens) {
    const auto& P = model.hyper;
    const auto L = model.layout();
    const auto& w = model.params;
    const int k = P.embedding, h = P.window, m = P.filters, d = P.hidden;
    auto emb = [&](int token, int c) { return w[L.embedding + token * k + c]; };
    std::vector<std::vector<double>> conv;
    for (int j = 0; j + h <= P.max_length; ++j) {
        std::vector<double> row;
        for (int f = 0; f < m; ++f) {
            double z = w[L.conv_b + f];
            for (int r = 0; r < h; ++r)
                for (int c = 0; c < k; ++c) z += w[L.conv_w + f * h * k + r * k + c] * emb(tokens[j + r], c);
            row.push_back(std::tanh(z));
        }
        conv.push_back(row);
    }
    std::vector<std::vector<double>> pooled;
    for (std::size_t t = 0; (t + 1) * P.pool <= conv.size(); ++t) {
        std::vector<double> row(m, -1e300);
        for (int q = 0; q < P.pool; ++q)
            for (int f = 0; f < m; ++f) row[f] = std::max(row[f], conv[t * P.pool + q][f]);
        pooled.push_back(row);
    }
    std::vector<double> hs(d, 0.0), cs(d, 0.0);
    auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    for (const auto& u : pooled) {
        std::vector<double> z(4 * d);
        for (int r = 0; r < 4 * d; ++r) {
            z[r] = w[L.lstm_b + r];
            for (int c = 0; c < m; ++c) z[r] += w[L.lstm_wx + r * m + c] * u[c];
            for (int c = 0; c < d; ++c) z[r] += w[L.lstm_wh + r * d + c] * hs[c];
        }
        for (int j = 0; j < d; ++j) {
            cs[j] = sig(z[d + j]) * cs[j] + sig(z[j]) * std::tanh(z[3 * d + j]);
            hs[j] = sig(z[2 * d + j]) * std::tanh(cs[j]);
        }
    }
    double logit[2];
    for (int c = 0; c < 2; ++c) {
        logit[c] = w[L.out_b + c];
        for (int j = 0; j < d; ++j) logit[c] += w[L.out_w + c * d + j] * hs[j];
    }
    const double z = std::exp(logit[0]) + std::exp(logit[1]);
    return {std::exp(logit[0]) / z, std::exp(logit[1]) / z};
}

const std::vector<std::string> kFiller{"city", "road", "video", "crowd", "tonight", "station", "center", "photo"};

std::vector<LabeledText> template_tweets(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LabeledText> out;
    for (int i = 0; i < count; ++i) {
        const std::string a = kFiller[rng() % kFiller.size()], b = kFiller[rng() % kFiller.size()];
        if (i % 2 == 0)
            out.push_back({"apparently somebody leaked " + a + " secretly near " + b, Label::rumor});
        else
            out.push_back({"officials confirmed " + a + " statement about " + b, Label::news});
    }
    return out;
}

double accuracy(const CredibilityModel& model, const std::vector<LabeledText>& data) {
    int correct = 0;
    for (const auto& x : data) {
        const auto p = forward(model, encode_tweet(x.text, model.vocab, model.hyper.max_length));
        correct += (p.news > p.rumor ? Label::news : Label::rumor) == x.label;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("encoding pads, truncates and maps unknown words") {
    const std::vector<std::string> texts{"one two three"};
    const Vocabulary v = build_vocabulary(texts);
    CHECK(v.size() == 5);
    const auto e = encode_tweet("one two three", v, 5);
    CHECK(e == std::vector<int>{v.lookup("one"), v.lookup("two"), v.lookup("three"), 0, 0});
    CHECK(encode_tweet("xx yy", v, 4) == std::vector<int>{1, 1, 0, 0});
    std::string long_text;
    for (int i = 0; i < 60; ++i) long_text += (i % 2 ? "two " : "one ");
    const auto t = encode_tweet(long_text, v, 40);
    CHECK(t.size() == 40);
    CHECK(t[39] == v.lookup("two"));
}

TEST_CASE("vocabulary order is frequency then alphabetical") {
    const std::vector<std::string> texts{"b a c", "c b", "c"};
    const Vocabulary v = build_vocabulary(texts);
    CHECK(v.words == std::vector<std::string>{"<pad>", "<unk>", "c", "b", "a"});
    CHECK(build_vocabulary(texts, 2).size() == 4);
    CHECK(build_vocabulary(texts, 1, 3).size() == 3);
}

TEST_CASE("loss golden values") {
    CHECK(cross_entropy({0.5, 0.5}, Label::rumor) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(cross_entropy({0.5, 0.5}, Label::news) - std::log(2.0)) <= 1e-9);
    CHECK(cross_entropy({1.0, 0.0}, Label::rumor) <= 1e-11);
    CHECK(std::isfinite(cross_entropy({1.0, 0.0}, Label::news)));
    const double pair = (cross_entropy({0.9, 0.1}, Label::rumor) + cross_entropy({0.2, 0.8}, Label::news)) / 2;
    CHECK(pair == doctest::Approx(0.1643).epsilon(1e-3));
}

TEST_CASE("all-zero parameters give the uniform prediction") {
    auto model = init_model(tiny_hyper(), tiny_vocab());
    std::fill(model.params.begin(), model.params.end(), 0.0);
    const auto p = forward(model, encode_tweet("alpha beta", model.vocab, 6));
    CHECK(p.rumor == 0.5);
    CHECK(p.news == 0.5);
    const std::vector<EncodedTweet> batch{{encode_tweet("alpha", model.vocab, 6), Label::news}};
    CHECK(std::abs(loss(model, batch) - std::log(2.0)) <= 1e-9);
}

TEST_CASE("forward matches an independent implementation and normalises") {
    const auto model = tiny_model();
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> tokens(6);
        for (auto& t : tokens) t = static_cast<int>(rng() % model.vocab.size());
        const auto a = forward(model, tokens);
        const auto b = naive_forward(model, tokens);
        CHECK(a.rumor == doctest::Approx(b.rumor).epsilon(1e-12));
        CHECK(std::abs(a.rumor + a.news - 1.0) <= 1e-9);
    }
    CHECK_THROWS_AS(forward(model, std::vector<int>{1, 2}), UsageError);
}

TEST_CASE("analytic gradient matches central differences") {
    auto model = tiny_model();
    REQUIRE(model.params.size() <= 500);
    const std::vector<EncodedTweet> batch{{encode_tweet("alpha beta gamma", model.vocab, 6), Label::rumor},
                                          {encode_tweet("delta epsilon alpha beta", model.vocab, 6), Label::news},
                                          {encode_tweet("zzz gamma", model.vocab, 6), Label::news}};
    std::vector<double> grad;
    loss_and_gradient(model, batch, grad);
    const std::size_t k = model.hyper.embedding;
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> pick(k, model.params.size() - 1);  // skip the frozen padding row
    double worst = 0.0;
    const double eps = 1e-5;
    for (int c = 0; c < 20; ++c) {
        const std::size_t i = pick(rng);
        const double keep = model.params[i];
        model.params[i] = keep + eps;
        const double up = loss(model, batch);
        model.params[i] = keep - eps;
        const double down = loss(model, batch);
        model.params[i] = keep;
        const double numeric = (up - down) / (2 * eps);
        const double denom = std::max({std::abs(numeric), std::abs(grad[i]), 1e-7});
        worst = std::max(worst, std::abs(numeric - grad[i]) / denom);
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("gradients touch only embedding rows of words in the batch") {
    const auto model = tiny_model();
    const std::vector<EncodedTweet> batch{{encode_tweet("alpha beta", model.vocab, 6), Label::rumor}};
    std::vector<double> grad;
    loss_and_gradient(model, batch, grad);
    const int k = model.hyper.embedding;
    for (int row = 0; row < model.vocab.size(); ++row) {
        double norm = 0.0;
        for (int c = 0; c < k; ++c) norm += std::abs(grad[row * k + c]);
        const bool present = model.vocab.words[row] == "alpha" || model.vocab.words[row] == "beta";
        if (present)
            CHECK(norm > 0.0);
        else
            CHECK(norm == 0.0);
    }
}

TEST_CASE("training separates template classes") {
    const auto data = template_tweets(200, 1);
    CredibilityHyper h;
    h.epochs = 10;
    h.seed = 3;
    TrainLog log;
    const auto model = train_credibility(data, h, &log);
    CHECK(accuracy(model, data) >= 0.95);
    CHECK(log.epoch_loss.size() == 10);
    CHECK(log.epoch_loss.back() < log.epoch_loss.front());

    const auto again = train_credibility(data, h);
    CHECK(again.params == model.params);
}

TEST_CASE("zero learning rate leaves the initial weights") {
    const auto data = template_tweets(40, 2);
    CredibilityHyper h = tiny_hyper();
    h.learning_rate = 0.0;
    h.epochs = 2;
    std::vector<std::string> texts;
    for (const auto& x : data) texts.push_back(x.text);
    const auto initial = init_model(h, build_vocabulary(texts));
    CHECK(train_credibility(data, h).params == initial.params);
}

TEST_CASE("shuffled labels leave held-out accuracy at chance") {
    auto data = template_tweets(400, 5);
    std::mt19937_64 rng(8);
    for (auto& x : data) x.label = (rng() & 1) ? Label::rumor : Label::news;
    const std::vector<LabeledText> train(data.begin(), data.begin() + 200), test(data.begin() + 200, data.end());
    CredibilityHyper h;
    h.epochs = 10;
    h.seed = 1;
    const auto model = train_credibility(train, h);
    CHECK(std::abs(accuracy(model, test) - 0.5) <= 0.1);
}

TEST_CASE("training needs both classes") {
    std::vector<LabeledText> one{{"a b", Label::news}, {"c d", Label::news}};
    CHECK_THROWS_AS(train_credibility(one, tiny_hyper()), UsageError);
}

TEST_CASE("credit score aggregation") {
    const std::vector<std::vector<double>> probs{{0.2, 0.8}, {}, {0.1, 0.4, 0.7}};
    const auto s = aggregate_credit(probs);
    CHECK(s.score[0] == doctest::Approx(0.5));
    CHECK(s.score[1] == 0.5);
    CHECK(s.score[2] == doctest::Approx(0.4));
    CHECK(s.count == std::vector<int>{2, 0, 3});
}

TEST_CASE("credit score over buckets: parallel equals serial, permutation invariant") {
    const auto model = tiny_model();
    std::mt19937_64 rng(12);
    const Event e = testing::random_event(rng, "ev", 80);
    const auto buckets = bucket_intervals(e, 12);
    const auto a = credit_score(model, buckets);
    const auto b = reference::credit_score(model, buckets);
    CHECK(a.score == b.score);
    CHECK(a.count == b.count);
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        if (buckets[i].tweets.empty()) CHECK(a.score[i] == 0.5);
        CHECK(a.score[i] >= 0.0);
        CHECK(a.score[i] <= 1.0);
    }
    std::vector<Tweet> reversed(buckets[0].tweets.rbegin(), buckets[0].tweets.rend());
    const IntervalBucket flipped{0, reversed};
    CHECK(credit_score(model, std::span(&flipped, 1)).score[0] ==
          doctest::Approx(a.score[0]).epsilon(1e-12));
}

TEST_CASE("model files round-trip through float32") {
    const auto model = tiny_model();
    std::stringstream buf;
    save_model(buf, model);
    const auto loaded = load_model(buf);
    CHECK(loaded.hyper == model.hyper);
    CHECK(loaded.vocab == model.vocab);
    REQUIRE(loaded.params.size() == model.params.size());
    for (std::size_t i = 0; i < model.params.size(); ++i)
        CHECK(loaded.params[i] == static_cast<double>(static_cast<float>(model.params[i])));

    std::stringstream again;
    save_model(again, loaded);
    std::stringstream first;
    save_model(first, model);
    CHECK(again.str() == first.str());

    std::stringstream broken(first.str().substr(0, first.str().size() / 2));
    CHECK_THROWS_AS(load_model(broken), DataError);
    std::stringstream garbage("not a model");
    CHECK_THROWS_AS(load_model(garbage), DataError);
}

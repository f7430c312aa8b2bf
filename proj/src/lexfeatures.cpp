#include "rumor/lexfeatures.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "rumor/text.hpp"

namespace rumor {

namespace {

using C = FeatureCategory;
using A = Aggregation;

constexpr std::array<FeatureDescriptor, 51> kCatalog{{
    {"Hashtag", C::twitter, A::fraction},
    {"Mention", C::twitter, A::fraction},
    {"NumUrls", C::twitter, A::mean},
    {"Retweets", C::twitter, A::mean},
    {"IsRetweet", C::twitter, A::fraction},
    {"ContainNEWS", C::twitter, A::fraction},
    {"WotScore", C::twitter, A::mean},
    {"URLRank5000", C::twitter, A::fraction},
    {"ContainNewsURL", C::twitter, A::fraction},
    {"LengthOfTweet", C::text, A::mean},
    {"NumOfChar", C::text, A::mean},
    {"Capital", C::text, A::mean},
    {"Smile", C::text, A::fraction},
    {"Sad", C::text, A::fraction},
    {"NumPositiveWords", C::text, A::mean},
    {"NumNegativeWords", C::text, A::mean},
    {"PolarityScores", C::text, A::mean},
    {"Via", C::text, A::fraction},
    {"Stock", C::text, A::fraction},
    {"Question", C::text, A::fraction},
    {"Exclamation", C::text, A::fraction},
    {"QuestionExclamation", C::text, A::fraction},
    {"I", C::text, A::fraction},
    {"You", C::text, A::fraction},
    {"HeShe", C::text, A::fraction},
    {"UserNumFollowers", C::user, A::mean},
    {"UserNumFriends", C::user, A::mean},
    {"UserNumTweets", C::user, A::mean},
    {"UserNumPhotos", C::user, A::mean},
    {"UserIsInLargeCity", C::user, A::fraction},
    {"UserJoinDate", C::user, A::mean},
    {"UserDescription", C::user, A::fraction},
    {"UserVerified", C::user, A::fraction},
    {"UserReputationScore", C::user, A::mean},
    {"CrowdWisdom", C::crowd, A::fraction},
    {"BetaSIS", C::epidemiological, A::mean},
    {"AlphaSIS", C::epidemiological, A::mean},
    {"BetaSEIZ", C::epidemiological, A::mean},
    {"bSEIZ", C::epidemiological, A::mean},
    {"lSEIZ", C::epidemiological, A::mean},
    {"pSEIZ", C::epidemiological, A::mean},
    {"EpsilonSEIZ", C::epidemiological, A::mean},
    {"RhoSEIZ", C::epidemiological, A::mean},
    {"RSI", C::epidemiological, A::mean},
    {"Ps", C::spikem, A::mean},
    {"Pa", C::spikem, A::mean},
    {"Pp", C::spikem, A::mean},
    {"Qs", C::spikem, A::mean},
    {"Qa", C::spikem, A::mean},
    {"Qp", C::spikem, A::mean},
    {"CreditScore", C::credit, A::mean},
}};

enum Surface : std::size_t {
    kHashtag, kMention, kNumUrls, kRetweets, kIsRetweet, kContainNews, kWotScore, kUrlRank5000, kContainNewsUrl,
    kLength, kNumChar, kCapital, kSmile, kSad, kNumPositive, kNumNegative, kPolarity, kVia, kStock, kQuestion,
    kExclamation, kQuestionExclamation, kFirstPronoun, kSecondPronoun, kThirdPronoun,
    kFollowers, kFriends, kUserTweets, kUserPhotos, kLargeCity, kJoinDays, kDescription, kVerified, kReputation,
};
static_assert(kReputation + 1 == kSurfaceFeatureCount);

constexpr double indicator(bool b) { return b ? 1.0 : 0.0; }

bool contains_any(std::string_view text, std::span<const std::string> needles) {
    return std::any_of(needles.begin(), needles.end(),
                       [&](const std::string& n) { return text.find(n) != std::string_view::npos; });
}

bool any_token_in(std::span<const std::string> tokens, const std::set<std::string>& set) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return set.count(t) > 0; });
}

bool looks_like_news_site(std::string_view domain) {
    return normalize_domain(domain).find("news") != std::string::npos;
}

double capital_fraction(std::string_view text) {
    const std::size_t chars = utf8_length(text);
    if (chars == 0) return 0.0;
    const auto upper = std::count_if(text.begin(), text.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
    return static_cast<double>(upper) / static_cast<double>(chars);
}

std::pair<int, int> sentiment_hits(std::span<const std::string> tokens, const Lexicons& lex) {
    int pos = 0, neg = 0;
    for (const auto& t : tokens) {
        pos += lex.positive_words.count(t) ? 1 : 0;
        neg += lex.negative_words.count(t) ? 1 : 0;
    }
    return {pos, neg};
}

double polarity_from_hits(int pos, int neg) {
    return static_cast<double>(pos - neg) / static_cast<double>(std::max(1, pos + neg));
}

}  // namespace

std::span<const FeatureDescriptor> feature_catalog() { return kCatalog; }

std::span<const FeatureDescriptor> lexical_features() {
    return std::span<const FeatureDescriptor>(kCatalog).first(kLexicalFeatureCount);
}

std::optional<std::size_t> catalog_index(std::string_view name) {
    for (std::size_t i = 0; i < kCatalog.size(); ++i)
        if (kCatalog[i].name == name) return i;
    return std::nullopt;
}

std::string_view to_string(FeatureCategory category) {
    switch (category) {
        case C::twitter: return "twitter";
        case C::text: return "text";
        case C::user: return "user";
        case C::epidemiological: return "epidemiological";
        case C::spikem: return "spikem";
        case C::crowd: return "crowd";
        case C::credit: return "credit";
    }
    return "unknown";
}

const std::array<std::string_view, kSingleTweetFeatureCount>& single_tweet_feature_names() {
    static const auto names = [] {
        std::array<std::string_view, kSingleTweetFeatureCount> out{};
        std::size_t k = 0;
        out[k++] = kCatalog[kHashtag].name;
        out[k++] = kCatalog[kMention].name;
        for (std::size_t i = kLength; i < kSurfaceFeatureCount; ++i) out[k++] = kCatalog[i].name;
        return out;
    }();
    return names;
}

double polarity_score(std::string_view text, const Lexicons& lex) {
    const auto tokens = tokenize(text);
    const auto [pos, neg] = sentiment_hits(tokens, lex);
    return polarity_from_hits(pos, neg);
}

bool contains_debunking_term(std::span<const std::string> tokens, const Lexicons& lex) {
    for (const auto& term : lex.debunking_terms) {
        const auto phrase = tokenize(term);
        if (phrase.empty() || phrase.size() > tokens.size()) continue;
        if (std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end()) return true;
    }
    return false;
}

double crowd_wisdom(std::span<const Tweet> tweets, const Lexicons& lex) {
    if (tweets.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& t : tweets) hits += contains_debunking_term(tokenize(t.text), lex) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(tweets.size());
}

std::array<double, kSurfaceFeatureCount> tweet_surface_features(const Tweet& tweet, const Lexicons& lex,
                                                                const DomainMetadata& meta) {
    std::array<double, kSurfaceFeatureCount> f{};
    const std::string_view text = tweet.text;
    const auto tokens = tokenize(text);

    f[kHashtag] = indicator(tweet.hashtag_count > 0);
    f[kMention] = indicator(tweet.mention_count > 0);
    f[kNumUrls] = static_cast<double>(tweet.urls.size());
    f[kRetweets] = static_cast<double>(tweet.retweet_count);
    f[kIsRetweet] = indicator(tweet.is_retweet);

    bool catalogued_news = false, top_ranked = false, news_site = false;
    double wot_sum = 0.0;
    for (const auto& domain : tweet.urls) {
        const DomainInfo info = meta.lookup(domain);
        catalogued_news = catalogued_news || info.is_news;
        top_ranked = top_ranked || (info.rank && *info.rank < 5000);
        news_site = news_site || looks_like_news_site(domain);
        wot_sum += info.wot_score.value_or(DomainMetadata::kNeutralWot);
    }
    f[kContainNews] = indicator(catalogued_news);
    f[kWotScore] = tweet.urls.empty() ? DomainMetadata::kNeutralWot : wot_sum / static_cast<double>(tweet.urls.size());
    f[kUrlRank5000] = indicator(top_ranked);
    f[kContainNewsUrl] = indicator(news_site);

    f[kLength] = static_cast<double>(tokens.size());
    f[kNumChar] = static_cast<double>(utf8_length(text));
    f[kCapital] = capital_fraction(text);
    f[kSmile] = indicator(contains_any(text, lex.emoticon_smile));
    f[kSad] = indicator(contains_any(text, lex.emoticon_sad));
    const auto [pos, neg] = sentiment_hits(tokens, lex);
    f[kNumPositive] = pos;
    f[kNumNegative] = neg;
    f[kPolarity] = polarity_from_hits(pos, neg);
    f[kVia] = indicator(std::find(tokens.begin(), tokens.end(), "via") != tokens.end());
    f[kStock] = indicator(text.find('$') != std::string_view::npos);
    const auto questions = std::count(text.begin(), text.end(), '?');
    const auto exclamations = std::count(text.begin(), text.end(), '!');
    f[kQuestion] = indicator(questions > 0);
    f[kExclamation] = indicator(exclamations > 0);
    f[kQuestionExclamation] = indicator(questions + exclamations >= 2);
    f[kFirstPronoun] = indicator(any_token_in(tokens, lex.pronouns_first));
    f[kSecondPronoun] = indicator(any_token_in(tokens, lex.pronouns_second));
    f[kThirdPronoun] = indicator(any_token_in(tokens, lex.pronouns_third));

    const UserProfile& u = tweet.user;
    f[kFollowers] = static_cast<double>(u.followers);
    f[kFriends] = static_cast<double>(u.friends);
    f[kUserTweets] = static_cast<double>(u.tweets_posted);
    f[kUserPhotos] = static_cast<double>(u.photos_posted);
    f[kLargeCity] = indicator(u.city && lex.large_cities.count(to_lower_ascii(*u.city)) > 0);
    // Accounts "created" after the tweet are clamped to age 0.
    const auto age = tweet.created_at - u.join_date;
    f[kJoinDays] = age.count() > 0 ? static_cast<double>(age.count()) / 86400.0 : 0.0;
    f[kDescription] = indicator(u.has_description);
    f[kVerified] = indicator(u.verified);
    const double denom = static_cast<double>(u.followers + u.friends);
    f[kReputation] = denom > 0.0 ? static_cast<double>(u.friends) / denom : 0.0;
    return f;
}

double IntervalFeatures::operator[](std::string_view name) const {
    for (std::size_t i = 0; i < kLexicalFeatureCount; ++i)
        if (kCatalog[i].name == name) return values[i];
    throw std::out_of_range("not a lexical feature: " + std::string(name));
}

IntervalFeatures extract_interval_features(const IntervalBucket& bucket, const Lexicons& lex,
                                           const DomainMetadata& meta) {
    IntervalFeatures out;
    if (bucket.tweets.empty()) return out;
    out.empty = false;
    for (const auto& t : bucket.tweets) {
        const auto f = tweet_surface_features(t, lex, meta);
        for (std::size_t i = 0; i < kSurfaceFeatureCount; ++i) out.values[i] += f[i];
    }
    const double n = static_cast<double>(bucket.tweets.size());
    for (std::size_t i = 0; i < kSurfaceFeatureCount; ++i) out.values[i] /= n;
    out.values[kSurfaceFeatureCount] = crowd_wisdom(bucket.tweets, lex);
    return out;
}

std::array<double, kSingleTweetFeatureCount> extract_single_tweet_features(const Tweet& tweet, const Lexicons& lex,
                                                                           const DomainMetadata& meta) {
    const auto f = tweet_surface_features(tweet, lex, meta);
    std::array<double, kSingleTweetFeatureCount> out{};
    std::size_t k = 0;
    out[k++] = f[kHashtag];
    out[k++] = f[kMention];
    for (std::size_t i = kLength; i < kSurfaceFeatureCount; ++i) out[k++] = f[i];
    return out;
}

}  // namespace rumor

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/corpus.hpp"
#include "rumor/lexicons.hpp"

namespace rumor {

enum class FeatureCategory { twitter, text, user, epidemiological, spikem, crowd, credit };
enum class Aggregation { fraction, mean };

struct FeatureDescriptor {
    std::string_view name;
    FeatureCategory category;
    Aggregation aggregation;
};

// Bump whenever the order below changes: DSTS column layout depends on it.
inline constexpr int kFeatureCatalogVersion = 1;

// Full ordered catalog: 34 surface rows, CrowdWisdom, 9 SIS/SEIZ parameters,
// 6 SpikeM parameters and CreditScore (51 entries).
std::span<const FeatureDescriptor> feature_catalog();
std::optional<std::size_t> catalog_index(std::string_view name);
std::string_view to_string(FeatureCategory category);

// Per-tweet surface rows (Twitter, text and user categories) in catalog order.
inline constexpr std::size_t kSurfaceFeatureCount = 34;
// Surface rows plus CrowdWisdom: what extract_interval_features produces.
inline constexpr std::size_t kLexicalFeatureCount = kSurfaceFeatureCount + 1;
inline constexpr std::size_t kSingleTweetFeatureCount = 27;

std::span<const FeatureDescriptor> lexical_features();
// Hashtag, Mention, then the 16 text rows and the 9 user rows.
const std::array<std::string_view, kSingleTweetFeatureCount>& single_tweet_feature_names();

// (pos - neg) / max(1, pos + neg) over lexicon hits.
double polarity_score(std::string_view text, const Lexicons& lex);

// Tokens of `tokens` contain some debunking term as a contiguous subsequence.
bool contains_debunking_term(std::span<const std::string> tokens, const Lexicons& lex);

// Fraction of tweets whose text contains at least one debunking term; 0 for
// an empty list.
double crowd_wisdom(std::span<const Tweet> tweets, const Lexicons& lex);

// The 34 surface rows for one tweet; fraction rows become 0/1 indicators.
std::array<double, kSurfaceFeatureCount> tweet_surface_features(const Tweet& tweet, const Lexicons& lex,
                                                                const DomainMetadata& meta);

struct IntervalFeatures {
    std::array<double, kLexicalFeatureCount> values{};  // lexical_features() order
    bool empty = true;

    double operator[](std::string_view name) const;
};

// Fraction rows are shares of tweets, mean rows arithmetic means; an empty
// bucket yields zeros with empty = true.
IntervalFeatures extract_interval_features(const IntervalBucket& bucket, const Lexicons& lex,
                                           const DomainMetadata& meta);

std::array<double, kSingleTweetFeatureCount> extract_single_tweet_features(const Tweet& tweet, const Lexicons& lex,
                                                                           const DomainMetadata& meta);

}  // namespace rumor

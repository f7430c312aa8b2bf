#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rumor/corpus.hpp"

namespace rumor {

inline constexpr int kPadIndex = 0;
inline constexpr int kUnknownIndex = 1;

struct Vocabulary {
    std::vector<std::string> words{"<pad>", "<unk>"};  // index -> word
    std::unordered_map<std::string, int> index;

    int size() const { return static_cast<int>(words.size()); }
    int lookup(const std::string& token) const;

    bool operator==(const Vocabulary& o) const { return words == o.words; }
};

// Tokens seen at least min_count times, ordered by descending frequency and
// then alphabetically; max_size caps the total size including the two
// reserved rows (0 = no cap).
Vocabulary build_vocabulary(std::span<const std::string> texts, int min_count = 1, int max_size = 0);

// Token indices right-padded with kPadIndex and truncated to `length`.
std::vector<int> encode_tweet(std::string_view text, const Vocabulary& vocab, int length);

struct CredibilityHyper {
    int embedding = 50;   // k
    int window = 3;       // convolution width h
    int filters = 64;     // m
    int pool = 2;         // max-pool width and stride
    int hidden = 64;      // LSTM state size d
    int max_length = 40;  // n
    double dropout = 0.25;
    double learning_rate = 0.05;  // decays as 1/sqrt(epoch)
    int epochs = 20;
    int batch_size = 32;
    int min_count = 1;
    int max_vocabulary = 20000;
    std::uint64_t seed = 0;

    int conv_length() const { return max_length - window + 1; }
    int pooled_length() const { return conv_length() / pool; }
    void validate() const;  // throws UsageError
    bool operator==(const CredibilityHyper&) const = default;
};

// Parameter blocks inside CredibilityModel::params, row-major:
//   embedding [V x k], conv_w [m x h*k], conv_b [m],
//   lstm_wx [4d x m], lstm_wh [4d x d], lstm_b [4d]   (gate order i, f, o, g)
//   out_w [2 x d], out_b [2]                          (class order rumor, news)
struct ParameterLayout {
    std::size_t embedding = 0, conv_w = 0, conv_b = 0, lstm_wx = 0, lstm_wh = 0, lstm_b = 0, out_w = 0, out_b = 0;
    std::size_t total = 0;

    ParameterLayout(const CredibilityHyper& hyper, int vocabulary_size);
};

struct CredibilityModel {
    CredibilityHyper hyper;
    Vocabulary vocab;
    std::vector<double> params;

    ParameterLayout layout() const { return ParameterLayout(hyper, vocab.size()); }
    bool operator==(const CredibilityModel&) const = default;
};

// Small random weights from the hyper seed; the padding row and biases start
// at zero except the forget gate bias (3).
CredibilityModel init_model(const CredibilityHyper& hyper, Vocabulary vocab);

struct ClassProbabilities {
    double rumor = 0.5;
    double news = 0.5;
};

// Inference pass (no dropout). `tokens` must have hyper.max_length entries.
ClassProbabilities forward(const CredibilityModel& model, std::span<const int> tokens);

struct EncodedTweet {
    std::vector<int> tokens;
    Label label = Label::rumor;
};

// Mean cross-entropy with probabilities clamped to [1e-12, 1 - 1e-12].
double cross_entropy(const ClassProbabilities& p, Label label);
double loss(const CredibilityModel& model, std::span<const EncodedTweet> batch);

// Loss of the batch and its gradient with respect to model.params (resized to
// match). Inference mode unless `dropout_seed` is given, in which case each
// example draws a dropout mask on the pooled sequence from that seed.
double loss_and_gradient(const CredibilityModel& model, std::span<const EncodedTweet> batch,
                         std::vector<double>& gradient, const std::uint64_t* dropout_seed = nullptr);

struct LabeledText {
    std::string text;
    Label label = Label::rumor;
};

struct TrainLog {
    std::vector<double> epoch_loss;  // mean training loss per epoch
};

// Builds the vocabulary from `data`, then runs minibatch SGD. Deterministic
// for a fixed hyper.seed. Throws UsageError unless both classes are present
// and NumericalError if the loss becomes non-finite.
CredibilityModel train_credibility(std::span<const LabeledText> data, const CredibilityHyper& hyper,
                                   TrainLog* log = nullptr);

// Every in-window tweet of each event labelled with its event's label.
std::vector<LabeledText> labeled_tweets(std::span<const Event> events);

struct CreditScoreSeries {
    std::vector<double> score;  // mean p_news per interval; 0.5 for an empty interval
    std::vector<int> count;
};

CreditScoreSeries aggregate_credit(std::span<const std::vector<double>> p_news_per_interval);

// Scores tweets in parallel; the aggregation order is fixed.
CreditScoreSeries credit_score(const CredibilityModel& model, std::span<const IntervalBucket> buckets);

namespace reference {
CreditScoreSeries credit_score(const CredibilityModel& model, std::span<const IntervalBucket> buckets);
}

void save_model(std::ostream& out, const CredibilityModel& model);
CredibilityModel load_model(std::istream& in);  // throws DataError
void save_model_file(const std::string& path, const CredibilityModel& model);
CredibilityModel load_model_file(const std::string& path);

}  // namespace rumor

#include "rumor/credibility.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "rumor/container.hpp"
#include "rumor/errors.hpp"
#include "rumor/text.hpp"

namespace rumor {

int Vocabulary::lookup(const std::string& token) const {
    const auto it = index.find(token);
    return it == index.end() ? kUnknownIndex : it->second;
}

Vocabulary build_vocabulary(std::span<const std::string> texts, int min_count, int max_size) {
    std::map<std::string, int> freq;
    for (const auto& text : texts)
        for (auto& token : tokenize(text)) ++freq[std::move(token)];
    std::vector<std::pair<std::string, int>> ranked;
    for (auto& [word, count] : freq)
        if (count >= min_count) ranked.emplace_back(word, count);
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    Vocabulary v;
    for (auto& [word, count] : ranked) {
        if (max_size > 0 && v.size() >= max_size) break;
        v.index.emplace(word, v.size());
        v.words.push_back(word);
    }
    return v;
}

std::vector<int> encode_tweet(std::string_view text, const Vocabulary& vocab, int length) {
    std::vector<int> out(static_cast<std::size_t>(length), kPadIndex);
    const auto tokens = tokenize(text);
    const std::size_t n = std::min(tokens.size(), out.size());
    for (std::size_t i = 0; i < n; ++i) out[i] = vocab.lookup(tokens[i]);
    return out;
}

void CredibilityHyper::validate() const {
    if (embedding < 1 || window < 1 || filters < 1 || pool < 1 || hidden < 1)
        throw UsageError("network sizes must be positive");
    if (max_length < window) throw UsageError("max_length must be at least the convolution window");
    if (pooled_length() < 1) throw UsageError("max_length too short for one pooled step");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw UsageError("dropout must lie in [0, 1)");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw UsageError("learning rate must be >= 0");
    if (epochs < 0 || batch_size < 1) throw UsageError("epochs must be >= 0 and batch size >= 1");
    if (min_count < 1) throw UsageError("min_count must be >= 1");
}

ParameterLayout::ParameterLayout(const CredibilityHyper& p, int vocabulary_size) {
    const auto V = static_cast<std::size_t>(vocabulary_size);
    const auto k = static_cast<std::size_t>(p.embedding), m = static_cast<std::size_t>(p.filters);
    const auto h = static_cast<std::size_t>(p.window), d = static_cast<std::size_t>(p.hidden);
    std::size_t at = 0;
    auto take = [&](std::size_t n) {
        const std::size_t start = at;
        at += n;
        return start;
    };
    embedding = take(V * k);
    conv_w = take(m * h * k);
    conv_b = take(m);
    lstm_wx = take(4 * d * m);
    lstm_wh = take(4 * d * d);
    lstm_b = take(4 * d);
    out_w = take(2 * d);
    out_b = take(2);
    total = at;
}

CredibilityModel init_model(const CredibilityHyper& hyper, Vocabulary vocab) {
    hyper.validate();
    CredibilityModel model{hyper, std::move(vocab), {}};
    const ParameterLayout L = model.layout();
    model.params.assign(L.total, 0.0);
    std::mt19937_64 rng(hyper.seed ^ 0x9e3779b97f4a7c15ull);
    auto fill = [&](std::size_t start, std::size_t count, double limit) {
        std::uniform_real_distribution<double> u(-limit, limit);
        for (std::size_t i = 0; i < count; ++i) model.params[start + i] = u(rng);
    };
    const std::size_t k = hyper.embedding, m = hyper.filters, h = hyper.window, d = hyper.hidden;
    fill(L.embedding + k, (model.vocab.size() - 1) * k, 0.5);
    fill(L.conv_w, m * h * k, std::sqrt(6.0 / static_cast<double>(h * k + m)));
    fill(L.lstm_wx, 4 * d * m, std::sqrt(6.0 / static_cast<double>(m + 4 * d)));
    fill(L.lstm_wh, 4 * d * d, std::sqrt(6.0 / static_cast<double>(d + 4 * d)));
    fill(L.out_w, 2 * d, std::sqrt(6.0 / static_cast<double>(d + 2)));
    for (std::size_t j = 0; j < d; ++j) model.params[L.lstm_b + d + j] = 3.0;
    return model;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Activations of one example, kept for the backward pass.
struct Trace {
    std::vector<double> conv;     // [L x m] tanh activations
    std::vector<int> argmax;      // [T x m] conv row chosen by the pool
    std::vector<double> pooled;   // [T x m] after dropout
    std::vector<double> mask;     // [T x m] dropout scale (empty = none)
    std::vector<double> gates;    // [T x 4d] i, f, o, g after nonlinearity
    std::vector<double> cell;     // [(T+1) x d], row 0 = initial state
    std::vector<double> hidden;   // [(T+1) x d]
    ClassProbabilities probs;
};

class Network {
public:
    explicit Network(const CredibilityModel& model)
        : P(model.hyper), L(model.layout()), w(model.params.data()),
          k(P.embedding), h(P.window), m(P.filters), d(P.hidden), n(P.max_length),
          conv_len(P.conv_length()), steps(P.pooled_length()), vocab(model.vocab.size()) {}

    void run(std::span<const int> tokens, Trace& tr, std::mt19937_64* dropout) const {
        if (static_cast<int>(tokens.size()) != n) throw UsageError("token sequence has the wrong length");
        for (int t : tokens)
            if (t < 0 || t >= vocab) throw UsageError("token index outside the vocabulary");
        const double* E = w + L.embedding;
        const double* W = w + L.conv_w;
        const double* B = w + L.conv_b;
        tr.conv.assign(static_cast<std::size_t>(conv_len * m), 0.0);
        for (int j = 0; j < conv_len; ++j) {
            for (int f = 0; f < m; ++f) {
                double z = B[f];
                const double* wf = W + static_cast<std::size_t>(f) * h * k;
                for (int r = 0; r < h; ++r) {
                    const double* x = E + static_cast<std::size_t>(tokens[j + r]) * k;
                    const double* wr = wf + static_cast<std::size_t>(r) * k;
                    for (int c = 0; c < k; ++c) z += wr[c] * x[c];
                }
                tr.conv[j * m + f] = std::tanh(z);
            }
        }
        tr.argmax.assign(static_cast<std::size_t>(steps * m), 0);
        tr.pooled.assign(static_cast<std::size_t>(steps * m), 0.0);
        for (int t = 0; t < steps; ++t) {
            for (int f = 0; f < m; ++f) {
                int best = t * P.pool;
                for (int j = best + 1; j < (t + 1) * P.pool; ++j)
                    if (tr.conv[j * m + f] > tr.conv[best * m + f]) best = j;
                tr.argmax[t * m + f] = best;
                tr.pooled[t * m + f] = tr.conv[best * m + f];
            }
        }
        tr.mask.clear();
        if (dropout && P.dropout > 0.0) {
            std::bernoulli_distribution keep(1.0 - P.dropout);
            const double scale = 1.0 / (1.0 - P.dropout);
            tr.mask.resize(tr.pooled.size());
            for (std::size_t i = 0; i < tr.pooled.size(); ++i) {
                tr.mask[i] = keep(*dropout) ? scale : 0.0;
                tr.pooled[i] *= tr.mask[i];
            }
        }

        const double* Wx = w + L.lstm_wx;
        const double* Wh = w + L.lstm_wh;
        const double* Bl = w + L.lstm_b;
        tr.gates.assign(static_cast<std::size_t>(steps * 4 * d), 0.0);
        tr.cell.assign(static_cast<std::size_t>((steps + 1) * d), 0.0);
        tr.hidden.assign(static_cast<std::size_t>((steps + 1) * d), 0.0);
        std::vector<double> z(static_cast<std::size_t>(4 * d));
        for (int t = 0; t < steps; ++t) {
            const double* u = &tr.pooled[t * m];
            const double* hp = &tr.hidden[t * d];
            for (int r = 0; r < 4 * d; ++r) {
                double acc = Bl[r];
                const double* wx = Wx + static_cast<std::size_t>(r) * m;
                for (int c = 0; c < m; ++c) acc += wx[c] * u[c];
                const double* wh = Wh + static_cast<std::size_t>(r) * d;
                for (int c = 0; c < d; ++c) acc += wh[c] * hp[c];
                z[r] = acc;
            }
            double* g = &tr.gates[t * 4 * d];
            for (int j = 0; j < 3 * d; ++j) g[j] = sigmoid(z[j]);
            for (int j = 3 * d; j < 4 * d; ++j) g[j] = std::tanh(z[j]);
            const double* cp = &tr.cell[t * d];
            double* cn = &tr.cell[(t + 1) * d];
            double* hn = &tr.hidden[(t + 1) * d];
            for (int j = 0; j < d; ++j) {
                cn[j] = g[d + j] * cp[j] + g[j] * g[3 * d + j];
                hn[j] = g[2 * d + j] * std::tanh(cn[j]);
            }
        }
        const double* hT = &tr.hidden[steps * d];
        const double* Wo = w + L.out_w;
        double logit[2];
        for (int c = 0; c < 2; ++c) {
            logit[c] = w[L.out_b + c];
            for (int j = 0; j < d; ++j) logit[c] += Wo[c * d + j] * hT[j];
        }
        const double top = std::max(logit[0], logit[1]);
        const double e0 = std::exp(logit[0] - top), e1 = std::exp(logit[1] - top);
        tr.probs = {e0 / (e0 + e1), e1 / (e0 + e1)};
    }

    // Accumulates scale * d(loss)/d(params) into grad.
    void backward(std::span<const int> tokens, const Trace& tr, Label label, double scale, double* grad) const {
        const double target[2] = {label == Label::rumor ? 1.0 : 0.0, label == Label::news ? 1.0 : 0.0};
        const double dlogit[2] = {(tr.probs.rumor - target[0]) * scale, (tr.probs.news - target[1]) * scale};
        const double* hT = &tr.hidden[steps * d];
        const double* Wo = w + L.out_w;
        std::vector<double> dh(static_cast<std::size_t>(d), 0.0), dc(static_cast<std::size_t>(d), 0.0);
        for (int c = 0; c < 2; ++c) {
            grad[L.out_b + c] += dlogit[c];
            for (int j = 0; j < d; ++j) {
                grad[L.out_w + c * d + j] += dlogit[c] * hT[j];
                dh[j] += Wo[c * d + j] * dlogit[c];
            }
        }

        const double* Wx = w + L.lstm_wx;
        const double* Wh = w + L.lstm_wh;
        std::vector<double> dz(static_cast<std::size_t>(4 * d));
        std::vector<double> dpooled(static_cast<std::size_t>(steps * m), 0.0);
        std::vector<double> dh_prev(static_cast<std::size_t>(d));
        for (int t = steps - 1; t >= 0; --t) {
            const double* g = &tr.gates[t * 4 * d];
            const double* cp = &tr.cell[t * d];
            const double* cn = &tr.cell[(t + 1) * d];
            for (int j = 0; j < d; ++j) {
                const double tc = std::tanh(cn[j]);
                const double i = g[j], f = g[d + j], o = g[2 * d + j], gg = g[3 * d + j];
                const double dcell = dh[j] * o * (1.0 - tc * tc) + dc[j];
                dz[j] = dcell * gg * i * (1.0 - i);
                dz[d + j] = dcell * cp[j] * f * (1.0 - f);
                dz[2 * d + j] = dh[j] * tc * o * (1.0 - o);
                dz[3 * d + j] = dcell * i * (1.0 - gg * gg);
                dc[j] = dcell * f;
            }
            const double* u = &tr.pooled[t * m];
            const double* hp = &tr.hidden[t * d];
            double* du = &dpooled[t * m];
            std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
            for (int r = 0; r < 4 * d; ++r) {
                const double v = dz[r];
                grad[L.lstm_b + r] += v;
                if (v == 0.0) continue;
                double* gx = grad + L.lstm_wx + static_cast<std::size_t>(r) * m;
                const double* wx = Wx + static_cast<std::size_t>(r) * m;
                for (int c = 0; c < m; ++c) {
                    gx[c] += v * u[c];
                    du[c] += wx[c] * v;
                }
                double* gh = grad + L.lstm_wh + static_cast<std::size_t>(r) * d;
                const double* wh = Wh + static_cast<std::size_t>(r) * d;
                for (int c = 0; c < d; ++c) {
                    gh[c] += v * hp[c];
                    dh_prev[c] += wh[c] * v;
                }
            }
            dh.swap(dh_prev);
        }

        std::vector<double> dconv(static_cast<std::size_t>(conv_len * m), 0.0);
        for (int t = 0; t < steps; ++t)
            for (int f = 0; f < m; ++f) {
                double v = dpooled[t * m + f];
                if (!tr.mask.empty()) v *= tr.mask[t * m + f];
                dconv[tr.argmax[t * m + f] * m + f] += v;
            }

        const double* E = w + L.embedding;
        const double* W = w + L.conv_w;
        for (int j = 0; j < conv_len; ++j) {
            for (int f = 0; f < m; ++f) {
                const double a = tr.conv[j * m + f];
                const double v = dconv[j * m + f] * (1.0 - a * a);
                if (v == 0.0) continue;
                grad[L.conv_b + f] += v;
                const std::size_t wf = static_cast<std::size_t>(f) * h * k;
                for (int r = 0; r < h; ++r) {
                    const int token = tokens[j + r];
                    const double* x = E + static_cast<std::size_t>(token) * k;
                    double* gw = grad + L.conv_w + wf + static_cast<std::size_t>(r) * k;
                    for (int c = 0; c < k; ++c) gw[c] += v * x[c];
                    if (token == kPadIndex) continue;  // padding row stays frozen at zero
                    double* ge = grad + L.embedding + static_cast<std::size_t>(token) * k;
                    const double* wr = W + wf + static_cast<std::size_t>(r) * k;
                    for (int c = 0; c < k; ++c) ge[c] += v * wr[c];
                }
            }
        }
    }

private:
    const CredibilityHyper& P;
    ParameterLayout L;
    const double* w;
    int k, h, m, d, n, conv_len, steps, vocab;
};

std::mt19937_64 example_rng(std::uint64_t seed, std::size_t example) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(example), std::uint64_t{0xd20}};
    return std::mt19937_64(seq);
}

}  // namespace

ClassProbabilities forward(const CredibilityModel& model, std::span<const int> tokens) {
    Trace tr;
    Network(model).run(tokens, tr, nullptr);
    return tr.probs;
}

double cross_entropy(const ClassProbabilities& p, Label label) {
    const double q = label == Label::rumor ? p.rumor : p.news;
    return -std::log(std::clamp(q, 1e-12, 1.0 - 1e-12));
}

double loss(const CredibilityModel& model, std::span<const EncodedTweet> batch) {
    if (batch.empty()) return 0.0;
    const Network net(model);
    Trace tr;
    double total = 0.0;
    for (const auto& ex : batch) {
        net.run(ex.tokens, tr, nullptr);
        total += cross_entropy(tr.probs, ex.label);
    }
    return total / static_cast<double>(batch.size());
}

double loss_and_gradient(const CredibilityModel& model, std::span<const EncodedTweet> batch,
                         std::vector<double>& gradient, const std::uint64_t* dropout_seed) {
    gradient.assign(model.params.size(), 0.0);
    if (batch.empty()) return 0.0;
    const Network net(model);
    const double scale = 1.0 / static_cast<double>(batch.size());
    Trace tr;
    double total = 0.0;
    for (std::size_t e = 0; e < batch.size(); ++e) {
        if (dropout_seed) {
            auto rng = example_rng(*dropout_seed, e);
            net.run(batch[e].tokens, tr, &rng);
        } else {
            net.run(batch[e].tokens, tr, nullptr);
        }
        total += cross_entropy(tr.probs, batch[e].label);
        net.backward(batch[e].tokens, tr, batch[e].label, scale, gradient.data());
    }
    return total * scale;
}

std::vector<LabeledText> labeled_tweets(std::span<const Event> events) {
    std::vector<LabeledText> out;
    for (const auto& e : events) {
        if (!e.label) continue;
        for (const auto& t : e.tweets)
            if (e.window.contains(t.created_at)) out.push_back({t.text, *e.label});
    }
    return out;
}

CredibilityModel train_credibility(std::span<const LabeledText> data, const CredibilityHyper& hyper, TrainLog* log) {
    hyper.validate();
    const bool has_rumor = std::any_of(data.begin(), data.end(), [](const auto& x) { return x.label == Label::rumor; });
    const bool has_news = std::any_of(data.begin(), data.end(), [](const auto& x) { return x.label == Label::news; });
    if (!has_rumor || !has_news) throw UsageError("credibility training needs tweets of both classes");

    std::vector<std::string> texts;
    texts.reserve(data.size());
    for (const auto& x : data) texts.push_back(x.text);
    CredibilityModel model = init_model(hyper, build_vocabulary(texts, hyper.min_count, hyper.max_vocabulary));

    std::vector<EncodedTweet> encoded;
    encoded.reserve(data.size());
    for (const auto& x : data) encoded.push_back({encode_tweet(x.text, model.vocab, hyper.max_length), x.label});

    std::vector<std::size_t> order(encoded.size());
    std::vector<EncodedTweet> batch;
    std::vector<double> grad;
    for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 shuffler(hyper.seed + 7919ull * static_cast<std::uint64_t>(epoch));
        std::shuffle(order.begin(), order.end(), shuffler);
        const double rate = hyper.learning_rate / std::sqrt(static_cast<double>(epoch));
        double epoch_loss = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += hyper.batch_size, ++batch_index) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(hyper.batch_size));
            batch.clear();
            for (std::size_t i = start; i < stop; ++i) batch.push_back(encoded[order[i]]);
            const std::uint64_t dropout_seed =
                hyper.seed ^ (static_cast<std::uint64_t>(epoch) << 40) ^ static_cast<std::uint64_t>(batch_index);
            const double l = loss_and_gradient(model, batch, grad, &dropout_seed);
            if (!std::isfinite(l))
                throw NumericalError("credibility training diverged in epoch " + std::to_string(epoch));
            epoch_loss += l * static_cast<double>(batch.size());
            for (std::size_t p = 0; p < model.params.size(); ++p) model.params[p] -= rate * grad[p];
        }
        if (log) log->epoch_loss.push_back(encoded.empty() ? 0.0 : epoch_loss / static_cast<double>(encoded.size()));
    }
    for (double v : model.params)
        if (!std::isfinite(v)) throw NumericalError("credibility training produced non-finite weights");
    return model;
}

CreditScoreSeries aggregate_credit(std::span<const std::vector<double>> p_news) {
    CreditScoreSeries s;
    for (const auto& probs : p_news) {
        s.count.push_back(static_cast<int>(probs.size()));
        if (probs.empty()) {
            s.score.push_back(0.5);
            continue;
        }
        double sum = 0.0;
        for (double p : probs) sum += p;
        s.score.push_back(sum / static_cast<double>(probs.size()));
    }
    return s;
}

namespace {

CreditScoreSeries score_buckets(const CredibilityModel& model, std::span<const IntervalBucket> buckets, bool parallel) {
    std::vector<const Tweet*> flat;
    for (const auto& b : buckets)
        for (const auto& t : b.tweets) flat.push_back(&t);
    std::vector<double> p(flat.size());
    const auto n = static_cast<std::ptrdiff_t>(flat.size());
    const int length = model.hyper.max_length;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i)
            p[i] = forward(model, encode_tweet(flat[i]->text, model.vocab, length)).news;
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            p[i] = forward(model, encode_tweet(flat[i]->text, model.vocab, length)).news;
    }
    std::vector<std::vector<double>> grouped;
    std::size_t at = 0;
    for (const auto& b : buckets) {
        grouped.emplace_back(p.begin() + static_cast<std::ptrdiff_t>(at),
                             p.begin() + static_cast<std::ptrdiff_t>(at + b.tweets.size()));
        at += b.tweets.size();
    }
    return aggregate_credit(grouped);
}

constexpr const char* kModelKind = "credibility-cnn-lstm";

}  // namespace

CreditScoreSeries credit_score(const CredibilityModel& model, std::span<const IntervalBucket> buckets) {
    return score_buckets(model, buckets, true);
}

CreditScoreSeries reference::credit_score(const CredibilityModel& model, std::span<const IntervalBucket> buckets) {
    return score_buckets(model, buckets, false);
}

void save_model(std::ostream& out, const CredibilityModel& model) {
    const auto& p = model.hyper;
    const ParameterLayout L = model.layout();
    Container c;
    c.header["kind"] = kModelKind;
    c.header["schema_version"] = 1;
    c.header["hyper"] = {{"embedding", p.embedding}, {"window", p.window},     {"filters", p.filters},
                         {"pool", p.pool},           {"hidden", p.hidden},     {"max_length", p.max_length},
                         {"dropout", p.dropout},     {"learning_rate", p.learning_rate},
                         {"epochs", p.epochs},       {"batch_size", p.batch_size},
                         {"min_count", p.min_count}, {"max_vocabulary", p.max_vocabulary},
                         {"seed", p.seed}};
    c.header["vocabulary"] = model.vocab.words;
    const auto V = static_cast<std::int64_t>(model.vocab.size());
    const std::int64_t k = p.embedding, m = p.filters, h = p.window, d = p.hidden;
    auto block = [&](const char* name, std::size_t start, std::vector<std::int64_t> shape) {
        std::int64_t count = 1;
        for (auto s : shape) count *= s;
        c.tensors.push_back(make_f32(name, std::move(shape),
                                     std::vector<double>(model.params.begin() + static_cast<std::ptrdiff_t>(start),
                                                         model.params.begin() + static_cast<std::ptrdiff_t>(start + count))));
    };
    block("embedding", L.embedding, {V, k});
    block("conv_w", L.conv_w, {m, h * k});
    block("conv_b", L.conv_b, {m});
    block("lstm_wx", L.lstm_wx, {4 * d, m});
    block("lstm_wh", L.lstm_wh, {4 * d, d});
    block("lstm_b", L.lstm_b, {4 * d});
    block("out_w", L.out_w, {2, d});
    block("out_b", L.out_b, {2});
    write_container(out, c);
}

CredibilityModel load_model(std::istream& in) {
    const Container c = read_container(in);
    CredibilityModel model;
    try {
        if (c.header.at("kind").get<std::string>() != kModelKind) throw DataError("not a credibility model file");
        if (c.header.at("schema_version").get<int>() != 1) throw DataError("unsupported credibility model version");
        const auto& j = c.header.at("hyper");
        auto& p = model.hyper;
        p.embedding = j.at("embedding");
        p.window = j.at("window");
        p.filters = j.at("filters");
        p.pool = j.at("pool");
        p.hidden = j.at("hidden");
        p.max_length = j.at("max_length");
        p.dropout = j.at("dropout");
        p.learning_rate = j.at("learning_rate");
        p.epochs = j.at("epochs");
        p.batch_size = j.at("batch_size");
        p.min_count = j.at("min_count");
        p.max_vocabulary = j.at("max_vocabulary");
        p.seed = j.at("seed");
        model.vocab.words = c.header.at("vocabulary").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("credibility model header: ") + e.what());
    }
    try {
        model.hyper.validate();
    } catch (const UsageError& e) {
        throw DataError(std::string("credibility model header: ") + e.what());
    }
    auto& v = model.vocab;
    if (v.words.size() < 2) throw DataError("credibility vocabulary lacks the reserved rows");
    for (int i = 2; i < v.size(); ++i)
        if (!v.index.emplace(v.words[i], i).second) throw DataError("duplicate vocabulary entry '" + v.words[i] + "'");

    const ParameterLayout L = model.layout();
    model.params.assign(L.total, 0.0);
    const std::pair<const char*, std::size_t> blocks[] = {{"embedding", L.embedding}, {"conv_w", L.conv_w},
                                                          {"conv_b", L.conv_b},       {"lstm_wx", L.lstm_wx},
                                                          {"lstm_wh", L.lstm_wh},     {"lstm_b", L.lstm_b},
                                                          {"out_w", L.out_w},         {"out_b", L.out_b}};
    for (std::size_t b = 0; b < std::size(blocks); ++b) {
        const Tensor& t = c.tensor(blocks[b].first);
        const std::size_t end = b + 1 < std::size(blocks) ? blocks[b + 1].second : L.total;
        if (t.dtype != DType::f32 || t.values.size() != end - blocks[b].second)
            throw DataError(std::string("tensor '") + blocks[b].first + "' has the wrong size");
        std::copy(t.values.begin(), t.values.end(), model.params.begin() + static_cast<std::ptrdiff_t>(blocks[b].second));
    }
    for (double x : model.params)
        if (!std::isfinite(x)) throw DataError("credibility model contains non-finite weights");
    return model;
}

void save_model_file(const std::string& path, const CredibilityModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    save_model(out, model);
}

CredibilityModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    return load_model(in);
}

}  // namespace rumor

#include "literal_forge/text_lda.hpp"

#include "literal_forge/baselines.hpp"
#include "literal_forge/error.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lforge {

namespace {

// Decodes one UTF-8 sequence; invalid bytes decode to U+FFFD and advance by one.
char32_t next_code_point(std::string_view s, std::size_t& pos) {
    auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    unsigned char c = byte(pos);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || pos + len > s.size()) {
        ++pos;
        return 0xFFFD;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (std::size_t i = 1; i < len; ++i) {
        if ((byte(pos + i) & 0xC0) != 0x80) {
            ++pos;
            return 0xFFFD;
        }
        cp = (cp << 6) | (byte(pos + i) & 0x3F);
    }
    pos += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

char32_t to_lower(char32_t c) {
    if (c >= 'A' && c <= 'Z') return c + 32;
    if (c < 0x80) return c;
    if ((c >= 0xC0 && c <= 0xDE && c != 0xD7)) return c + 32;
    if (c >= 0x100 && c <= 0x137 && (c % 2 == 0)) return c + 1;
    if (c >= 0x139 && c <= 0x148 && (c % 2 == 1)) return c + 1;
    if (c >= 0x14A && c <= 0x177 && (c % 2 == 0)) return c + 1;
    if (c == 0x178) return 0xFF;
    if ((c == 0x179 || c == 0x17B || c == 0x17D)) return c + 1;
    if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
    if (c >= 0x410 && c <= 0x42F) return c + 32;
    if (c >= 0x400 && c <= 0x40F) return c + 80;
    return c;
}

bool is_word_char(char32_t c) {
    if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    if (c == 0xFFFD) return false;
    if (c <= 0xBF) return c == 0xAA || c == 0xB5 || c == 0xBA;  // Latin-1 punctuation and symbols
    if (c == 0xD7 || c == 0xF7) return false;
    if (c >= 0x2000 && c <= 0x2BFF) return false;  // punctuation, symbols, arrows, math
    if (c >= 0x3000 && c <= 0x303F) return false;  // CJK punctuation
    if (c >= 0xFE30 && c <= 0xFE4F) return false;
    if (c >= 0xFF00 && c <= 0xFF0F) return false;
    if (c >= 0x1F000) return false;                // emoji and pictographs
    return true;
}

std::string primary_subtag(std::string_view language) {
    std::string out;
    for (char c : language) {
        if (c == '-') break;
        out.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c));
    }
    return out;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text, std::string_view language, const TokenizerSettings& settings) {
    std::vector<std::string> tokens;
    const std::unordered_set<std::string>* stop = nullptr;
    if (!settings.stopwords.empty()) {
        if (auto it = settings.stopwords.find(primary_subtag(language)); it != settings.stopwords.end())
            stop = &it->second;
    }
    std::string current;
    std::size_t length = 0;
    auto flush = [&] {
        if (length >= settings.min_length && !(stop && stop->contains(current))) tokens.push_back(current);
        current.clear();
        length = 0;
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = next_code_point(text, pos);
        if (is_word_char(cp)) {
            append_utf8(current, to_lower(cp));
            ++length;
        } else if (length > 0) {
            flush();
        }
    }
    if (length > 0) flush();
    return tokens;
}

std::size_t Corpus::add_document(std::span<const std::string> tokens) {
    std::vector<std::uint32_t> doc;
    doc.reserve(tokens.size());
    for (const auto& t : tokens) {
        auto [it, inserted] = ids_.try_emplace(t, static_cast<std::uint32_t>(words_.size()));
        if (inserted) words_.push_back(t);
        doc.push_back(it->second);
    }
    documents_.push_back(std::move(doc));
    return documents_.size() - 1;
}

std::size_t Corpus::non_empty_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(documents_.begin(), documents_.end(), [](const auto& d) { return !d.empty(); }));
}

void LdaSettings::validate() const {
    if (topics < 1) throw ConfigError("lda: topics must be >= 1");
    if (!(effective_alpha() > 0.0)) throw ConfigError("lda: alpha must be > 0");
    if (!(beta > 0.0)) throw ConfigError("lda: beta must be > 0");
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("lda: threshold must be in (0, 1]");
}

std::span<const double> TopicModel::topic_words(std::size_t topic) const {
    if (topic >= topics) throw std::out_of_range("unknown topic");
    return std::span<const double>(phi).subspan(topic * vocabulary_size, vocabulary_size);
}

TopicModel train_lda(const Corpus& corpus, const LdaSettings& settings) {
    settings.validate();
    if (corpus.non_empty_count() == 0) throw std::invalid_argument("train_lda: corpus has no tokens");

    const std::size_t T = settings.topics;
    const std::size_t V = corpus.vocabulary_size();
    const std::size_t D = corpus.document_count();
    const double alpha = settings.effective_alpha();
    const double beta = settings.beta;
    const double vbeta = static_cast<double>(V) * beta;

    std::mt19937_64 rng(settings.seed);
    std::vector<std::uint32_t> doc_topic(D * T, 0);
    std::vector<std::uint32_t> topic_word(T * V, 0);
    std::vector<std::uint32_t> topic_total(T, 0);
    std::vector<std::vector<std::uint32_t>> assignment(D);

    for (std::size_t d = 0; d < D; ++d) {
        const auto& doc = corpus.document(d);
        assignment[d].resize(doc.size());
        for (std::size_t i = 0; i < doc.size(); ++i) {
            auto k = static_cast<std::uint32_t>(rng() % T);
            assignment[d][i] = k;
            ++doc_topic[d * T + k];
            ++topic_word[k * V + doc[i]];
            ++topic_total[k];
        }
    }

    std::vector<double> cumulative(T);
    for (std::size_t sweep = 0; sweep < settings.iterations; ++sweep) {
        for (std::size_t d = 0; d < D; ++d) {
            const auto& doc = corpus.document(d);
            std::uint32_t* nd = &doc_topic[d * T];
            for (std::size_t i = 0; i < doc.size(); ++i) {
                const std::uint32_t w = doc[i];
                std::uint32_t k = assignment[d][i];
                --nd[k];
                --topic_word[k * V + w];
                --topic_total[k];

                double total = 0.0;
                for (std::size_t t = 0; t < T; ++t) {
                    total += (nd[t] + alpha) * (topic_word[t * V + w] + beta) / (topic_total[t] + vbeta);
                    cumulative[t] = total;
                }
                double u = unit_interval(rng) * total;
                k = static_cast<std::uint32_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                               cumulative.begin());
                if (k >= T) k = static_cast<std::uint32_t>(T - 1);

                assignment[d][i] = k;
                ++nd[k];
                ++topic_word[k * V + w];
                ++topic_total[k];
            }
        }
    }

    TopicModel model;
    model.topics = T;
    model.vocabulary_size = V;
    model.documents = D;
    model.alpha = alpha;
    model.beta = beta;
    model.seed = settings.seed;
    model.iterations = settings.iterations;
    model.phi.resize(T * V);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t w = 0; w < V; ++w)
            model.phi[t * V + w] = (topic_word[t * V + w] + beta) / (topic_total[t] + vbeta);
    model.theta.resize(D * T);
    model.empty_document.resize(D);
    for (std::size_t d = 0; d < D; ++d) {
        const double n = static_cast<double>(corpus.document(d).size());
        model.empty_document[d] = n == 0;
        for (std::size_t t = 0; t < T; ++t)
            model.theta[d * T + t] = (doc_topic[d * T + t] + alpha) / (n + static_cast<double>(T) * alpha);
    }
    return model;
}

std::span<const double> document_topics(const TopicModel& model, std::size_t document) {
    if (document >= model.documents) throw std::out_of_range("unknown document " + std::to_string(document));
    return std::span<const double>(model.theta).subspan(document * model.topics, model.topics);
}

Augmentation emit_topic_triples(const GroupInput& in, const TopicModel& model, double threshold) {
    Augmentation out;
    const Term predicate = in.predicate();
    std::size_t below = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (model.empty_document.at(i)) {
            out.link({in.subject(i), predicate, any_value_entity(in)});
            ++out.fallback_statements;
            continue;
        }
        auto theta = document_topics(model, i);
        bool linked = false;
        for (std::size_t t = 0; t < theta.size(); ++t) {
            if (theta[t] >= threshold) {
                out.link({in.subject(i), predicate, in.minter.entity(in.stem() + "Topic" + pad_index(t, model.topics))},
                         theta[t]);
                linked = true;
            }
        }
        if (!linked) {
            auto best = static_cast<std::size_t>(std::max_element(theta.begin(), theta.end()) - theta.begin());
            out.link({in.subject(i), predicate, in.minter.entity(in.stem() + "Topic" + pad_index(best, model.topics))},
                     theta[best]);
            ++below;
        }
    }
    if (out.fallback_statements > 0)
        out.warnings.push_back(in.predicate_iri() + ": " + std::to_string(out.fallback_statements) +
                               " text value(s) without tokens linked with ONEENTITY");
    if (below > 0)
        out.warnings.push_back(in.predicate_iri() + ": " + std::to_string(below) +
                               " statement(s) had no topic above threshold; linked to best topic");
    return out;
}

Augmentation txtlda(const GroupInput& in, const LdaSettings& settings, const TokenizerSettings& tokenizer) {
    Corpus corpus;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Term& value = in.value(i);
        corpus.add_document(tokenize(value.value, value.language, tokenizer));
    }
    if (corpus.non_empty_count() == 0)
        throw StrategyError(in.predicate_iri() + ": LDA corpus has no tokens");
    TopicModel model = train_lda(corpus, settings);
    Augmentation out = emit_topic_triples(in, model, settings.threshold);
    if (settings.topics > corpus.non_empty_count())
        out.warnings.push_back(in.predicate_iri() + ": " + std::to_string(settings.topics) + " topics for " +
                               std::to_string(corpus.non_empty_count()) + " non-empty documents");

    nlohmann::json topics = nlohmann::json::array();
    for (std::size_t t = 0; t < model.topics; ++t) {
        auto row = model.topic_words(t);
        std::vector<std::size_t> order(row.size());
        std::iota(order.begin(), order.end(), 0);
        std::size_t n = std::min(settings.top_words, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                          [&](std::size_t a, std::size_t b) { return row[a] > row[b] || (row[a] == row[b] && a < b); });
        nlohmann::json words = nlohmann::json::array();
        for (std::size_t j = 0; j < n; ++j) words.push_back(corpus.word(static_cast<std::uint32_t>(order[j])));
        topics.push_back(std::move(words));
    }
    out.details = {{"topics", model.topics},
                   {"alpha", model.alpha},
                   {"beta", model.beta},
                   {"iterations", model.iterations},
                   {"seed", model.seed},
                   {"documents", model.documents},
                   {"vocabulary", model.vocabulary_size},
                   {"top_words", topics}};
    return out;
}

}  // namespace lforge

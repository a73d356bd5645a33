#pragma once
// TXTLDA: one LDA topic model per text predicate, trained with collapsed
// Gibbs sampling; subjects link to every topic at or above a threshold.

#include "literal_forge/mint.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lforge {

struct TokenizerSettings {
    std::size_t min_length = 2;  // in code points
    /// Stopwords keyed by lowercase primary language subtag ("en").
    std::map<std::string, std::unordered_set<std::string>> stopwords;
};

/// Lowercases (ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic), splits on
/// runs of non-alphanumeric characters, drops short tokens and stopwords.
std::vector<std::string> tokenize(std::string_view text, std::string_view language = {},
                                  const TokenizerSettings& settings = {});

class Corpus {
public:
    /// Adds a document; returns its id.
    std::size_t add_document(std::span<const std::string> tokens);

    std::size_t document_count() const noexcept { return documents_.size(); }
    std::size_t non_empty_count() const noexcept;
    std::size_t vocabulary_size() const noexcept { return words_.size(); }
    const std::vector<std::uint32_t>& document(std::size_t id) const { return documents_.at(id); }
    const std::string& word(std::uint32_t id) const { return words_.at(id); }

private:
    std::vector<std::vector<std::uint32_t>> documents_;
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

struct LdaSettings {
    std::size_t topics = 20;
    std::optional<double> alpha;  // default 50 / topics
    double beta = 0.01;
    std::size_t iterations = 500;
    std::uint64_t seed = 1;
    double threshold = 0.10;
    std::size_t top_words = 10;

    double effective_alpha() const { return alpha.value_or(50.0 / static_cast<double>(topics)); }
    void validate() const;
};

struct TopicModel {
    std::size_t topics = 0;
    std::size_t vocabulary_size = 0;
    std::size_t documents = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    std::vector<double> phi;    // topics x vocabulary, row-major
    std::vector<double> theta;  // documents x topics, row-major
    std::vector<bool> empty_document;

    std::span<const double> topic_words(std::size_t topic) const;
};

/// Collapsed Gibbs sampling for `iterations` sweeps; deterministic given the
/// seed. Throws std::invalid_argument when no document has a token.
/// Empty documents get a uniform theta row and are flagged.
TopicModel train_lda(const Corpus& corpus, const LdaSettings& settings);

/// Theta row of a document. Throws std::out_of_range for unknown ids.
std::span<const double> document_topics(const TopicModel& model, std::size_t document);

/// One link per topic with probability >= threshold, object
/// new:<stem>Topic<NN>, weighted by the probability. When no topic reaches
/// the threshold the best topic is linked. Empty documents fall back to
/// ONEENTITY. Statement i of the group is document i of the model.
Augmentation emit_topic_triples(const GroupInput& in, const TopicModel& model, double threshold = 0.10);

/// Tokenize, train and emit for one text group.
Augmentation txtlda(const GroupInput& in, const LdaSettings& settings, const TokenizerSettings& tokenizer = {});

}  // namespace lforge

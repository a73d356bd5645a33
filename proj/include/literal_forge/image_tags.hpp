#pragma once
// Image statements tagged with the most likely label of an image classifier.
// The classifier runs out of process; a TagProvider supplies its output,
// either from a precomputed tag map or from a remote endpoint.

#include "literal_forge/mint.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lforge {

enum class PayloadKind { Iri, Embedded, Malformed };

struct ImageRef {
    std::size_t statement = 0;  // index into the group
    PayloadKind kind = PayloadKind::Iri;
    std::string iri;                   // Iri payloads
    std::vector<unsigned char> bytes;  // Embedded payloads
    std::string sha256;                // hex digest of `bytes`

    /// Tag-map key: the IRI, or "sha256:<hex>" for embedded payloads.
    std::string key() const;
};

/// Strict base64 (whitespace ignored, padding required). nullopt when malformed.
std::optional<std::vector<unsigned char>> decode_base64(std::string_view text);
std::string encode_base64(std::span<const unsigned char> bytes);
std::string sha256_hex(std::span<const unsigned char> bytes);

/// One ImageRef per statement. IRI objects and non-binary literals are IRI
/// payloads; literals with an image datatype are decoded as base64.
std::vector<ImageRef> resolve_image_refs(const GroupInput& in);

struct Label {
    std::string name;
    double score = 0.0;

    friend bool operator==(const Label&, const Label&) = default;
};

struct LabelDistribution {
    std::vector<Label> labels;  // score descending, then name ascending
    std::string provider;

    /// Sorts into ranked order. Throws std::invalid_argument when empty, when
    /// a name is empty or when a score lies outside [0, 1].
    void normalize();
};

/// Highest score; ties go to the lexicographically smallest name.
const std::string& top_label(const LabelDistribution& distribution);

class TagProvider {
public:
    virtual ~TagProvider() = default;
    virtual std::string id() const = 0;
    /// Bound on distinct labels this provider can return.
    virtual std::size_t vocabulary_size() const = 0;
    virtual std::optional<LabelDistribution> lookup(const ImageRef& ref) const = 0;
    /// Lookups for a batch, results in input order.
    virtual std::vector<std::optional<LabelDistribution>> lookup_all(std::span<const ImageRef> refs) const;
};

/// JSON object: key -> [{"name": ..., "score": ...}, ...].
class TagMapProvider final : public TagProvider {
public:
    explicit TagMapProvider(const nlohmann::json& map, std::string id = "tag-map");
    static TagMapProvider from_file(const std::filesystem::path& path);

    std::string id() const override { return id_; }
    std::size_t vocabulary_size() const override { return vocabulary_; }
    std::optional<LabelDistribution> lookup(const ImageRef& ref) const override;

private:
    std::string id_;
    std::unordered_map<std::string, LabelDistribution> entries_;
    std::size_t vocabulary_ = 0;
};

struct RemoteProviderSettings {
    std::string url;  // http://host[:port]/path
    std::chrono::milliseconds timeout{10000};
    unsigned retries = 3;
    std::chrono::milliseconds backoff{200};  // doubled after every failed attempt
    std::size_t max_in_flight = 8;
    std::size_t vocabulary = 1000;
};

/// POSTs {"iri": ...} or {"content_base64": ..., "sha256": ...} and expects
/// {"labels": [{"name", "score"}, ...]}. HTTP 404 is a miss. Throws
/// StrategyError when the endpoint stays unreachable or answers garbage.
class RemoteTagProvider final : public TagProvider {
public:
    explicit RemoteTagProvider(RemoteProviderSettings settings);

    std::string id() const override { return "remote:" + settings_.url; }
    std::size_t vocabulary_size() const override { return settings_.vocabulary; }
    std::optional<LabelDistribution> lookup(const ImageRef& ref) const override;
    std::vector<std::optional<LabelDistribution>> lookup_all(std::span<const ImageRef> refs) const override;

private:
    RemoteProviderSettings settings_;
    std::string origin_;
    std::string path_;
};

struct ImageTagSettings {
    std::string prefix = "VGG_";
    std::size_t top_k = 1;
};

/// One link per statement to new:<prefix><label> (top_k links when top_k > 1),
/// weighted by the label score. Label entities are global, shared across
/// predicates. Misses and malformed payloads fall back to ONEENTITY.
Augmentation emit_image_triples(const GroupInput& in, const TagProvider& provider,
                                const ImageTagSettings& settings = {});

}  // namespace lforge

#pragma once
// Minting of new IRIs under a reserved namespace, and the Augmentation record
// every strategy returns.

#include "literal_forge/graph.hpp"
#include "literal_forge/rdf_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lforge {

inline constexpr std::size_t kMaxValueChars = 64;

/// Keeps RFC 3986 unreserved bytes, writes everything else as %XX.
std::string percent_encode(std::string_view text);

/// 32-bit FNV-1a.
std::uint32_t content_hash32(std::string_view text);

/// Percent-encoded value; values longer than 64 bytes are cut to 64 bytes and
/// suffixed with "_" and the 8-hex-digit hash of the full value.
std::string sanitize_value(std::string_view lexical);

/// Part of an IRI after the last '#', '/' or ':'.
std::string_view local_name(std::string_view iri);

/// Zero-padded index, at least two digits and wide enough for count - 1.
std::string pad_index(std::size_t index, std::size_t count);

class Minter {
public:
    explicit Minter(std::string ns) : ns_(std::move(ns)) {}

    const std::string& ns() const noexcept { return ns_; }
    bool owns(std::string_view iri) const noexcept { return iri.starts_with(ns_); }

    /// Assigns the naming stem for a predicate. The first predicate with a
    /// given local name keeps it; later ones get a hash suffix.
    const std::string& register_predicate(const std::string& predicate_iri);

    /// Stem for a predicate; auto-registers on first use.
    const std::string& stem(const std::string& predicate_iri);
    /// Stem for an already registered predicate; throws std::out_of_range otherwise.
    const std::string& stem(const std::string& predicate_iri) const;

    Term entity(std::string_view local) const { return Term::iri(ns_ + std::string(local)); }

private:
    std::string ns_;
    std::unordered_map<std::string, std::string> stems_;
    std::unordered_map<std::string, std::string> stem_owner_;
};

struct Augmentation {
    /// Subject links replacing literal statements.
    std::vector<Triple> statements;
    /// Score per statement for score-bearing strategies, else nullopt.
    std::vector<std::optional<double>> weights;
    /// Links among minted entities (adjacency, hierarchy, calendar structure).
    std::vector<Triple> structural;
    std::size_t removed = 0;
    /// Statements handled by a per-statement fallback (TRANSFORM or ONEENTITY).
    std::size_t fallback_statements = 0;
    std::vector<std::string> warnings;
    /// Strategy-specific audit data for the report.
    nlohmann::json details = nlohmann::json::object();

    void link(Triple t, std::optional<double> weight = std::nullopt) {
        statements.push_back(std::move(t));
        weights.push_back(weight);
    }
    /// Distinct minted objects of `statements`, in first-use order.
    std::vector<std::string> minted_entities() const;
    void append(Augmentation&& other);
};

/// Shared view of one literal group during strategy application.
struct GroupInput {
    const IndexedGraph& graph;
    const LiteralGroup& group;
    const Minter& minter;

    const std::string& predicate_iri() const { return graph.relation(group.predicate); }
    Term predicate() const { return Term::iri(predicate_iri()); }
    const std::string& stem() const { return minter.stem(predicate_iri()); }
    const Term& subject(std::size_t i) const { return graph.entity(group.statements[i].subject); }
    const Term& value(std::size_t i) const { return group.statements[i].object; }
    std::size_t size() const { return group.statements.size(); }
};

}  // namespace lforge

#pragma once
// Dictionary-encoded in-memory graph.
//
// Relational statements (entity objects) go into CSR adjacency in both
// directions. Literal statements, and IRI objects of configured image
// predicates, are grouped by (predicate, modality) in first-encounter order.

#include "literal_forge/rdf_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lforge {

using EntityId = std::uint64_t;
using RelationId = std::uint64_t;

enum class Modality : std::uint8_t { Numeric, Temporal, Text, Image, Other };

inline constexpr Modality kAllModalities[] = {Modality::Numeric, Modality::Temporal, Modality::Text,
                                              Modality::Image, Modality::Other};

std::string_view to_string(Modality m);
std::optional<Modality> modality_from_string(std::string_view name);

struct ModalityRules {
    std::unordered_set<std::string> image_predicates;
    std::unordered_set<std::string> image_datatypes{"http://www.w3.org/2001/XMLSchema#base64Binary"};
    /// Per-predicate modality; wins over datatype rules.
    std::unordered_map<std::string, Modality> predicate_modalities;
};

/// Modality of a literal object. Non-literal objects are only meaningful for
/// image predicates; callers route other IRIs to the relational side.
Modality classify_modality(const Term& object, std::string_view predicate, const ModalityRules& rules);

/// True when the statement belongs to the literal side of the graph.
bool is_literal_statement(const Term& object, std::string_view predicate, const ModalityRules& rules);

/// Bijective key <-> dense id mapping, ids in first-encounter order.
template <class Key, class Hash = std::hash<Key>>
class Dictionary {
public:
    std::uint64_t add(const Key& key) {
        auto [it, inserted] = ids_.try_emplace(key, keys_.size());
        if (inserted) keys_.push_back(&it->first);
        return it->second;
    }

    std::optional<std::uint64_t> find(const Key& key) const {
        auto it = ids_.find(key);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const Key& operator[](std::uint64_t id) const { return *keys_.at(id); }
    std::size_t size() const noexcept { return keys_.size(); }

    Dictionary() = default;
    Dictionary(const Dictionary&) = delete;
    Dictionary& operator=(const Dictionary&) = delete;
    Dictionary(Dictionary&&) noexcept = default;
    Dictionary& operator=(Dictionary&&) noexcept = default;

private:
    std::unordered_map<Key, std::uint64_t, Hash> ids_;
    std::vector<const Key*> keys_;
};

struct Edge {
    EntityId subject;
    RelationId relation;
    EntityId object;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// (relation, neighbor) as seen from one endpoint.
struct Adjacent {
    RelationId relation;
    EntityId neighbor;
};

struct LiteralStatement {
    EntityId subject;
    Term object;
};

struct LiteralGroup {
    RelationId predicate = 0;
    Modality modality = Modality::Other;
    std::vector<LiteralStatement> statements;
};

class IndexedGraph {
public:
    const Term& entity(EntityId id) const { return entities_[id]; }
    const std::string& relation(RelationId id) const { return relations_[id]; }
    std::optional<EntityId> find_entity(const Term& t) const { return entities_.find(t); }
    std::optional<RelationId> find_relation(const std::string& iri) const { return relations_.find(iri); }

    std::size_t entity_count() const noexcept { return entities_.size(); }
    std::size_t relation_count() const noexcept { return relations_.size(); }

    /// Deduplicated relational edges in input order.
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const Adjacent> outgoing(EntityId id) const;
    std::span<const Adjacent> incoming(EntityId id) const;

    std::span<const LiteralGroup> literal_groups() const noexcept { return groups_; }
    std::size_t literal_statement_count() const noexcept;
    /// Distinct literal-side object terms that are not also entities.
    std::size_t literal_node_count() const noexcept { return literal_nodes_; }

    std::size_t duplicates() const noexcept { return duplicates_; }
    const ModalityRules& rules() const noexcept { return rules_; }

    /// Original relational triples, reconstructed from the dictionaries.
    Triple edge_triple(const Edge& e) const;

private:
    friend IndexedGraph build_index(std::span<const Triple>, const ModalityRules&);

    Dictionary<Term, TermHash> entities_;
    Dictionary<std::string> relations_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offsets_, in_offsets_;
    std::vector<Adjacent> out_, in_;
    std::vector<LiteralGroup> groups_;
    std::size_t duplicates_ = 0;
    std::size_t literal_nodes_ = 0;
    ModalityRules rules_;
};

/// Ids are assigned in first-encounter order (subject, then object); exact
/// duplicate statements are stored once and counted.
IndexedGraph build_index(std::span<const Triple> triples, const ModalityRules& rules = {});

struct GraphProfile {
    std::uint64_t relations = 0;
    std::uint64_t nodes = 0;
    std::uint64_t triples = 0;
    std::uint64_t relational_edges = 0;
    std::uint64_t literal_statements = 0;
    // syntactic object kinds; sum to `triples`
    std::uint64_t object_iris = 0;
    std::uint64_t object_blank_nodes = 0;
    std::uint64_t object_literals = 0;
    // literal-side statements by modality; sum to `literal_statements`
    std::uint64_t numbers = 0;
    std::uint64_t dates = 0;
    std::uint64_t text = 0;
    std::uint64_t images = 0;
    std::uint64_t others = 0;

    friend bool operator==(const GraphProfile&, const GraphProfile&) = default;
};

GraphProfile profile(const IndexedGraph& graph);

/// Streaming profile accumulator: memory grows with the number of distinct
/// terms, not with the number of statements. Statements are counted as seen.
class GraphProfiler {
public:
    explicit GraphProfiler(ModalityRules rules = {}) : rules_(std::move(rules)) {}
    void add(const Triple& triple);
    GraphProfile result() const;

private:
    ModalityRules rules_;
    GraphProfile counts_;
    std::unordered_set<std::string> predicates_;
    std::unordered_set<Term, TermHash> nodes_;
};

nlohmann::json to_json(const GraphProfile& p);
std::string render_table(const GraphProfile& p);

}  // namespace lforge

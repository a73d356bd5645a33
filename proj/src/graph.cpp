#include "literal_forge/graph.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <tuple>

namespace lforge {

namespace {

constexpr std::array<std::string_view, 17> kNumericTypes = {
    "integer",         "decimal",      "float",           "double",        "nonNegativeInteger",
    "positiveInteger", "negativeInteger", "nonPositiveInteger", "long",     "int",
    "short",           "byte",         "unsignedLong",    "unsignedInt",   "unsignedShort",
    "unsignedByte",    "precisionDecimal"};

constexpr std::array<std::string_view, 5> kTemporalTypes = {"date", "dateTime", "dateTimeStamp",
                                                            "gYear", "gYearMonth"};

bool xsd_local_in(std::string_view datatype, std::span<const std::string_view> names) {
    if (!datatype.starts_with(vocab::xsd)) return false;
    auto local = datatype.substr(vocab::xsd.size());
    return std::find(names.begin(), names.end(), local) != names.end();
}

struct StatementKey {
    EntityId subject;
    RelationId relation;
    std::uint64_t object;
    bool literal;

    friend bool operator==(const StatementKey&, const StatementKey&) = default;
};

struct StatementKeyHash {
    std::size_t operator()(const StatementKey& k) const noexcept {
        std::size_t h = std::hash<std::uint64_t>{}(k.subject);
        h = h * 1000003u ^ std::hash<std::uint64_t>{}(k.relation);
        h = h * 1000003u ^ std::hash<std::uint64_t>{}(k.object);
        return h * 2u + (k.literal ? 1u : 0u);
    }
};

void count_object(GraphProfile& p, const Term& object) {
    switch (object.kind) {
        case TermKind::Iri: ++p.object_iris; break;
        case TermKind::BlankNode: ++p.object_blank_nodes; break;
        case TermKind::Literal: ++p.object_literals; break;
    }
}

void count_modality(GraphProfile& p, Modality m, std::uint64_t n = 1) {
    switch (m) {
        case Modality::Numeric: p.numbers += n; break;
        case Modality::Temporal: p.dates += n; break;
        case Modality::Text: p.text += n; break;
        case Modality::Image: p.images += n; break;
        case Modality::Other: p.others += n; break;
    }
}

}  // namespace

std::string_view to_string(Modality m) {
    switch (m) {
        case Modality::Numeric: return "numeric";
        case Modality::Temporal: return "temporal";
        case Modality::Text: return "text";
        case Modality::Image: return "image";
        case Modality::Other: return "other";
    }
    return "other";
}

std::optional<Modality> modality_from_string(std::string_view name) {
    for (Modality m : kAllModalities)
        if (to_string(m) == name) return m;
    return std::nullopt;
}

Modality classify_modality(const Term& object, std::string_view predicate, const ModalityRules& rules) {
    if (auto it = rules.predicate_modalities.find(std::string(predicate));
        it != rules.predicate_modalities.end())
        return it->second;
    if (rules.image_predicates.contains(std::string(predicate))) return Modality::Image;
    if (!object.is_literal()) return Modality::Other;
    if (rules.image_datatypes.contains(object.datatype)) return Modality::Image;
    if (xsd_local_in(object.datatype, kNumericTypes)) return Modality::Numeric;
    if (xsd_local_in(object.datatype, kTemporalTypes)) return Modality::Temporal;
    if (object.datatype == vocab::xsd_string || object.datatype == vocab::rdf_lang_string)
        return Modality::Text;
    return Modality::Other;
}

bool is_literal_statement(const Term& object, std::string_view predicate, const ModalityRules& rules) {
    return object.is_literal() || (object.is_iri() && rules.image_predicates.contains(std::string(predicate)));
}

std::span<const Adjacent> IndexedGraph::outgoing(EntityId id) const {
    if (id + 1 >= out_offsets_.size()) return {};
    return std::span<const Adjacent>(out_).subspan(out_offsets_[id], out_offsets_[id + 1] - out_offsets_[id]);
}

std::span<const Adjacent> IndexedGraph::incoming(EntityId id) const {
    if (id + 1 >= in_offsets_.size()) return {};
    return std::span<const Adjacent>(in_).subspan(in_offsets_[id], in_offsets_[id + 1] - in_offsets_[id]);
}

std::size_t IndexedGraph::literal_statement_count() const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups_) n += g.statements.size();
    return n;
}

Triple IndexedGraph::edge_triple(const Edge& e) const {
    return Triple{entity(e.subject), Term::iri(relation(e.relation)), entity(e.object)};
}

IndexedGraph build_index(std::span<const Triple> triples, const ModalityRules& rules) {
    IndexedGraph g;
    g.rules_ = rules;
    Dictionary<Term, TermHash> literal_terms;
    std::unordered_set<StatementKey, StatementKeyHash> seen;
    std::map<std::pair<RelationId, Modality>, std::size_t> group_index;

    for (const auto& t : triples) {
        EntityId s = g.entities_.add(t.subject);
        RelationId p = g.relations_.add(t.predicate.value);
        if (is_literal_statement(t.object, t.predicate.value, rules)) {
            std::uint64_t lit = literal_terms.add(t.object);
            if (!seen.insert({s, p, lit, true}).second) {
                ++g.duplicates_;
                continue;
            }
            Modality m = classify_modality(t.object, t.predicate.value, rules);
            auto [it, inserted] = group_index.try_emplace({p, m}, g.groups_.size());
            if (inserted) g.groups_.push_back(LiteralGroup{p, m, {}});
            g.groups_[it->second].statements.push_back({s, t.object});
        } else {
            EntityId o = g.entities_.add(t.object);
            if (!seen.insert({s, p, o, false}).second) {
                ++g.duplicates_;
                continue;
            }
            g.edges_.push_back({s, p, o});
        }
    }

    for (std::size_t i = 0; i < literal_terms.size(); ++i)
        if (!g.entities_.find(literal_terms[i])) ++g.literal_nodes_;

    const std::size_t n = g.entities_.size();
    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (const auto& e : g.edges_) {
        ++g.out_offsets_[e.subject + 1];
        ++g.in_offsets_[e.object + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        g.out_offsets_[i + 1] += g.out_offsets_[i];
        g.in_offsets_[i + 1] += g.in_offsets_[i];
    }
    g.out_.resize(g.edges_.size());
    g.in_.resize(g.edges_.size());
    std::vector<std::size_t> out_fill(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    std::vector<std::size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (const auto& e : g.edges_) {
        g.out_[out_fill[e.subject]++] = {e.relation, e.object};
        g.in_[in_fill[e.object]++] = {e.relation, e.subject};
    }
    return g;
}

GraphProfile profile(const IndexedGraph& graph) {
    GraphProfile p;
    p.relations = graph.relation_count();
    p.relational_edges = graph.edges().size();
    p.literal_statements = graph.literal_statement_count();
    p.triples = p.relational_edges + p.literal_statements;
    p.nodes = graph.entity_count() + graph.literal_node_count();
    for (const auto& e : graph.edges()) count_object(p, graph.entity(e.object));
    for (const auto& group : graph.literal_groups()) {
        count_modality(p, group.modality, group.statements.size());
        for (const auto& st : group.statements) count_object(p, st.object);
    }
    return p;
}

void GraphProfiler::add(const Triple& triple) {
    ++counts_.triples;
    predicates_.insert(triple.predicate.value);
    nodes_.insert(triple.subject);
    nodes_.insert(triple.object);
    count_object(counts_, triple.object);
    if (is_literal_statement(triple.object, triple.predicate.value, rules_)) {
        ++counts_.literal_statements;
        count_modality(counts_, classify_modality(triple.object, triple.predicate.value, rules_));
    } else {
        ++counts_.relational_edges;
    }
}

GraphProfile GraphProfiler::result() const {
    GraphProfile p = counts_;
    p.relations = predicates_.size();
    p.nodes = nodes_.size();
    return p;
}

nlohmann::json to_json(const GraphProfile& p) {
    return {
        {"relations", p.relations},
        {"nodes", p.nodes},
        {"triples", p.triples},
        {"relational_edges", p.relational_edges},
        {"literal_statements", p.literal_statements},
        {"objects", {{"iris", p.object_iris}, {"blank_nodes", p.object_blank_nodes}, {"literals", p.object_literals}}},
        {"literal_statements_by_modality",
         {{"numbers", p.numbers}, {"dates", p.dates}, {"text", p.text}, {"images", p.images}, {"others", p.others}}},
    };
}

std::string render_table(const GraphProfile& p) {
    const std::pair<const char*, std::uint64_t> rows[] = {
        {"Relations", p.relations},
        {"Nodes", p.nodes},
        {"Triples", p.triples},
        {"objects thereof...", 0},
        {"...IRIs", p.object_iris},
        {"...blank nodes", p.object_blank_nodes},
        {"...literals", p.object_literals},
        {"literal statements", p.literal_statements},
        {"...numbers", p.numbers},
        {"...dates", p.dates},
        {"...text", p.text},
        {"...images", p.images},
        {"...others", p.others},
    };
    std::string out;
    char line[96];
    for (const auto& [label, value] : rows) {
        if (std::string_view(label) == "objects thereof...")
            std::snprintf(line, sizeof line, "%-20s\n", label);
        else
            std::snprintf(line, sizeof line, "%-20s %14llu\n", label, static_cast<unsigned long long>(value));
        out += line;
    }
    return out;
}

}  // namespace lforge

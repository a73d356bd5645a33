#pragma once
// KL-REL / KL-RELENT: split a numeric predicate's population by the relation
// (or relation-entity) signatures of its subjects, then bin every leaf.
//
// The split tree is greedy and binary. A node is split on the presence of one
// signature feature, picking the feature whose split maximizes
// KL(P_with || P_without) between the two children's smoothed feature
// distributions. Recursion stops below the value threshold, when no feature
// splits the node non-trivially, or when the best divergence is < 1e-6.

#include "literal_forge/binning.hpp"

#include <compare>
#include <optional>
#include <span>
#include <vector>

namespace lforge {

enum class SignatureMode { Rel, RelEnt };

/// One signature element. Direction distinguishes outgoing from incoming
/// edges; `neighbor` is only used in RelEnt mode.
struct Feature {
    RelationId relation = 0;
    bool incoming = false;
    EntityId neighbor = 0;

    friend bool operator==(const Feature&, const Feature&) = default;
    friend auto operator<=>(const Feature&, const Feature&) = default;
};

/// Sorted, duplicate-free features of an entity, from relational edges only.
std::vector<Feature> entity_signature(const IndexedGraph& graph, EntityId entity, SignatureMode mode);

struct RelationDistribution {
    std::vector<Feature> support;      // sorted
    std::vector<double> probabilities; // parallel to support, strictly positive, sums to 1
    double smoothing = 0.0;
};

/// Smoothed distribution from per-feature counts over a fixed vocabulary:
/// frequencies c_f / sum(c), plus eps = 1 / (10 |V|), renormalized.
RelationDistribution smoothed_distribution(std::span<const Feature> vocabulary, std::span<const double> counts);

/// Empirical feature distribution of a subject multiset over the union of
/// their signatures.
RelationDistribution relation_distribution(std::span<const EntityId> subjects, const IndexedGraph& graph,
                                           SignatureMode mode);

/// Sum P(i) ln(P(i)/Q(i)) in nats. Throws std::invalid_argument when the
/// supports differ.
double kl_divergence(const RelationDistribution& p, const RelationDistribution& q);

struct SplitNode {
    std::vector<std::size_t> members;  // statement indices into the group
    std::optional<Feature> feature;    // set on inner nodes
    double divergence = 0.0;
    bool indivisible = false;
    std::size_t with_child = 0;        // valid on inner nodes
    std::size_t without_child = 0;
    bool leaf() const { return !feature.has_value(); }
};

struct PopulationSplit {
    std::vector<SplitNode> nodes;  // nodes[0] is the root
    /// Leaf node indices, preorder with the "with feature" branch first.
    std::vector<std::size_t> leaves() const;
};

struct SplitSettings {
    SignatureMode mode = SignatureMode::Rel;
    std::size_t threshold = 300;
    double min_divergence = 1e-6;
};

/// Splits the given statements of a group (the values' subjects).
PopulationSplit split_population(const GroupInput& in, std::span<const std::size_t> statements,
                                 const SplitSettings& settings);

/// Split over every statement of the group.
PopulationSplit split_population(const GroupInput& in, const SplitSettings& settings);

nlohmann::json split_json(const PopulationSplit& split, const IndexedGraph& graph, SignatureMode mode);

/// Split, then optional LOF and binning per leaf. Bin entities are minted per
/// (predicate, leaf): <stem>Sub<NN>Bin<NN> when there are several leaves, the
/// plain nBINS names otherwise.
Augmentation kl_rel_binning(const GroupInput& in, const SplitSettings& settings, const BinningSpec& spec,
                            const LofSettings& lof = {});

}  // namespace lforge

#pragma once
// Strategy application over a whole graph: per-group strategy resolution,
// parallel execution, fallbacks, merge, report and weight sidecar.

#include "literal_forge/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lforge {

/// Inputs of the size bound for one group, and the bound itself.
struct SizeBound {
    std::uint64_t max_entities = 0;
    std::uint64_t min_statements = 0;
    std::uint64_t max_statements = 0;
    /// Documented departures from the plain per-strategy bound, e.g. "overlap".
    std::vector<std::string> exceptions;
    std::string formula;
};

struct GroupReport {
    std::string predicate;
    Modality modality = Modality::Other;
    std::string strategy;          // configured, e.g. "KL-REL+LOF"
    std::string applied;           // what produced the output (differs after a group fallback)
    std::uint64_t statements = 0;  // S
    std::uint64_t distinct_values = 0;  // V
    std::uint64_t minted_entities = 0;   // delta E
    std::uint64_t minted_statements = 0; // delta S
    std::uint64_t removed = 0;
    std::uint64_t fallback_statements = 0;
    std::uint64_t structural = 0;
    /// Parameters the bound depends on: n, levels, lof, leaves, topics, ...
    nlohmann::json bound_inputs = nlohmann::json::object();
    SizeBound bound;
    bool bound_ok = true;
    std::vector<std::string> warnings;
    nlohmann::json details = nlohmann::json::object();
};

struct ReportTotals {
    std::uint64_t input_triples = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t relational = 0;
    std::uint64_t literal_statements = 0;
    std::uint64_t minted_statements = 0;
    std::uint64_t minted_entities_sum = 0;  // sum over group rows
    std::uint64_t distinct_minted_entities = 0;  // entities shared by groups counted once
    std::uint64_t removed = 0;
    std::uint64_t structural = 0;
    std::uint64_t output_triples = 0;
};

/// Union over every group of one predicate, as recomputable from the output.
struct PredicateSummary {
    std::uint64_t minted_entities = 0;
    std::uint64_t minted_statements = 0;
    std::uint64_t removed = 0;

    friend bool operator==(const PredicateSummary&, const PredicateSummary&) = default;
};

/// Groups sharing an applied strategy; R is the number of their predicates.
struct StrategySummary {
    std::uint64_t relations = 0;
    std::uint64_t max_distinct_values = 0;
    std::uint64_t statements = 0;
    std::uint64_t minted_entities = 0;  // distinct over the groups
    std::uint64_t minted_statements = 0;
    std::uint64_t max_entities = 0;     // sum of group bounds
    std::uint64_t min_statements = 0;
    std::uint64_t max_statements = 0;
    bool bound_ok = true;
};

struct AugmentationReport {
    std::string ns;
    std::uint64_t seed = 0;
    std::vector<GroupReport> groups;
    std::map<std::string, PredicateSummary> predicates;
    std::map<std::string, StrategySummary> strategies;
    ReportTotals totals;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    /// Throws ConfigError when required fields are missing.
    static AugmentationReport from_json(const nlohmann::json& doc);
};

struct WeightedEdge {
    Triple triple;
    double weight = 0.0;
};

struct PipelineResult {
    /// Relational triples in input order, then minted statements in group
    /// order, then structural triples (deduplicated) in first-use order.
    std::vector<Triple> triples;
    AugmentationReport report;
    std::vector<WeightedEdge> weights;
};

struct ApplyOptions {
    /// 0 means std::thread::hardware_concurrency().
    std::size_t workers = 0;
    /// Image provider; when null one is built from the config.
    const TagProvider* provider = nullptr;
};

/// Size bound for one group row, extended with the documented exceptions.
SizeBound size_bound(const GroupReport& row);

/// Seed of one group, independent of scheduling.
std::uint64_t group_seed(std::uint64_t seed, const std::string& predicate, Modality modality);

/// Builds the provider described by the config, or nullptr for none.
std::unique_ptr<TagProvider> make_provider(const ImageProviderConfig& config);

/// Runs every literal group through its strategy. Strategy failures fall
/// back per the config policy (StrategyError when the policy is none).
/// Throws ConfigError when the input already uses the minted namespace.
PipelineResult apply(const IndexedGraph& graph, const StrategyConfig& config, const ApplyOptions& options = {});

/// "<triple>\t<weight>\n" lines.
std::string serialize_weights(std::span<const WeightedEdge> weights);

}  // namespace lforge

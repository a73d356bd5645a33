#pragma once
// Independent checks of a transform run: bound verdicts recomputed from the
// report rows, and deltas recomputed from the output graph.

#include "literal_forge/pipeline.hpp"

#include <span>
#include <string>
#include <vector>

namespace lforge {

struct BoundVerdict {
    std::string predicate;
    Modality modality = Modality::Other;
    std::string strategy;
    bool ok = true;
    std::vector<std::string> exceptions;
    std::string message;
};

/// Recomputes each row's bound from its S, V, fallback count and bound
/// inputs and checks delta E / delta S against it.
std::vector<BoundVerdict> verify_bounds(const AugmentationReport& report);

struct VerifyResult {
    std::vector<std::string> problems;
    std::vector<std::string> offending_predicates;
    std::uint64_t relational = 0;
    std::uint64_t minted_statements = 0;
    std::uint64_t structural = 0;
    std::uint64_t literals = 0;

    bool ok() const { return problems.empty(); }
};

/// Classifies every output triple (relational, minted statement or
/// structural), recounts per-predicate deltas and compares them, the totals
/// and the bound verdicts with the report.
VerifyResult verify_output(std::span<const Triple> output, const AugmentationReport& report);

}  // namespace lforge

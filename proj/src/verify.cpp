#include "literal_forge/verify.hpp"

#include <map>
#include <set>
#include <unordered_set>

namespace lforge {

std::vector<BoundVerdict> verify_bounds(const AugmentationReport& report) {
    std::vector<BoundVerdict> out;
    for (const auto& row : report.groups) {
        BoundVerdict v;
        v.predicate = row.predicate;
        v.modality = row.modality;
        v.strategy = row.applied;
        SizeBound b = size_bound(row);
        v.exceptions = b.exceptions;
        std::string why;
        if (b.formula == "unknown strategy") why = "unknown strategy " + row.applied;
        else if (row.minted_entities > b.max_entities)
            why = "delta E " + std::to_string(row.minted_entities) + " > " + std::to_string(b.max_entities);
        else if (row.minted_statements < b.min_statements || row.minted_statements > b.max_statements)
            why = "delta S " + std::to_string(row.minted_statements) + " outside [" + std::to_string(b.min_statements) +
                  ", " + std::to_string(b.max_statements) + "]";
        else if (row.applied == "EXCLUDE" && row.removed != row.statements)
            why = "EXCLUDE removed " + std::to_string(row.removed) + " of " + std::to_string(row.statements);
        else if (b.max_entities != row.bound.max_entities || b.min_statements != row.bound.min_statements ||
                 b.max_statements != row.bound.max_statements)
            why = "recorded bound differs from the recomputed one";
        else if (!row.bound_ok)
            why = "row is marked as violating its bound";
        v.ok = why.empty();
        v.message = why.empty() ? b.formula : why;
        out.push_back(std::move(v));
    }
    return out;
}

VerifyResult verify_output(std::span<const Triple> output, const AugmentationReport& report) {
    VerifyResult r;
    const std::string& ns = report.ns;
    auto minted = [&](const Term& t) { return t.is_iri() && t.value.starts_with(ns); };
    std::map<std::string, std::unordered_set<std::string>> objects;
    std::map<std::string, std::uint64_t> statements;
    std::set<std::string> offending;
    std::size_t stray = 0;

    for (const auto& t : output) {
        if (t.object.is_literal()) {
            ++r.literals;
            offending.insert(t.predicate.value);
            continue;
        }
        const bool s = minted(t.subject), p = minted(t.predicate), o = minted(t.object);
        if (!s && !p && !o) {
            ++r.relational;
        } else if (!s && !p && o) {
            ++r.minted_statements;
            ++statements[t.predicate.value];
            objects[t.predicate.value].insert(t.object.value);
        } else if (s && p && o) {
            ++r.structural;
        } else {
            ++stray;
            offending.insert(t.predicate.value);
        }
    }
    if (r.literals > 0) r.problems.push_back(std::to_string(r.literals) + " literal statement(s) in output");
    if (stray > 0)
        r.problems.push_back(std::to_string(stray) + " triple(s) mix minted and original terms in unexpected positions");

    std::set<std::string> predicates;
    for (const auto& [p, _] : report.predicates) predicates.insert(p);
    for (const auto& [p, _] : statements) predicates.insert(p);
    for (const auto& p : predicates) {
        auto it = report.predicates.find(p);
        PredicateSummary recorded = it != report.predicates.end() ? it->second : PredicateSummary{};
        std::uint64_t de = objects.contains(p) ? objects[p].size() : 0;
        std::uint64_t ds = statements.contains(p) ? statements[p] : 0;
        if (de != recorded.minted_entities || ds != recorded.minted_statements) {
            r.problems.push_back(p + ": output has delta E " + std::to_string(de) + ", delta S " + std::to_string(ds) +
                                 "; report says " + std::to_string(recorded.minted_entities) + ", " +
                                 std::to_string(recorded.minted_statements));
            offending.insert(p);
        }
    }

    std::map<std::string, PredicateSummary> from_rows;
    std::uint64_t sum_s = 0, sum_e = 0, sum_removed = 0, sum_statements = 0;
    for (const auto& g : report.groups) {
        from_rows[g.predicate].minted_statements += g.minted_statements;
        from_rows[g.predicate].removed += g.removed;
        sum_s += g.minted_statements;
        sum_e += g.minted_entities;
        sum_removed += g.removed;
        sum_statements += g.statements;
    }
    for (const auto& [p, s] : from_rows) {
        auto it = report.predicates.find(p);
        if (it == report.predicates.end() || it->second.minted_statements != s.minted_statements ||
            it->second.removed != s.removed) {
            r.problems.push_back(p + ": predicate summary disagrees with its group rows");
            offending.insert(p);
        }
    }
    const auto& t = report.totals;
    auto expect = [&](std::uint64_t actual, std::uint64_t recorded, const std::string& what) {
        if (actual != recorded)
            r.problems.push_back(what + ": " + std::to_string(actual) + " vs report " + std::to_string(recorded));
    };
    expect(sum_s, t.minted_statements, "sum of group delta S");
    expect(sum_e, t.minted_entities_sum, "sum of group delta E");
    expect(sum_removed, t.removed, "sum of removed statements");
    expect(sum_statements, t.literal_statements, "sum of group statements");
    expect(r.relational, t.relational, "relational triples in output");
    expect(r.minted_statements, t.minted_statements, "minted statements in output");
    expect(r.structural, t.structural, "structural triples in output");
    expect(output.size(), t.output_triples, "output triples");
    std::unordered_set<std::string> distinct;
    for (const auto& [_, set] : objects) distinct.insert(set.begin(), set.end());
    expect(distinct.size(), t.distinct_minted_entities, "distinct minted entities in statements");

    for (const auto& v : verify_bounds(report)) {
        if (!v.ok) {
            r.problems.push_back(v.predicate + " (" + v.strategy + "): " + v.message);
            offending.insert(v.predicate);
        }
    }
    r.offending_predicates.assign(offending.begin(), offending.end());
    return r;
}

}  // namespace lforge

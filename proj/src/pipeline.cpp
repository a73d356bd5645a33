#include "literal_forge/pipeline.hpp"

#include "literal_forge/baselines.hpp"
#include "literal_forge/error.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace lforge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

bool uses_binning(StrategyKind k) {
    return k == StrategyKind::NBins || k == StrategyKind::PercentBins || k == StrategyKind::KlRel ||
           k == StrategyKind::KlRelEnt || k == StrategyKind::Datbin;
}

std::uint64_t hierarchy_bins(std::uint64_t n, std::uint64_t depth) {
    std::uint64_t total = 0, count = n;
    for (std::uint64_t j = 0; j <= depth; ++j) {
        total += count;
        if (count <= 1) break;
        count = (count + 1) / 2;
    }
    return total;
}

struct GroupOutcome {
    Augmentation aug;
    GroupReport row;
    std::set<int> years;  // for the global year chain
};

nlohmann::json bound_inputs_for(const StrategyChoice& c, std::uint64_t distinct_values, const Augmentation& aug,
                                const TagProvider* provider) {
    nlohmann::json j = nlohmann::json::object();
    if (uses_binning(c.kind)) {
        std::uint64_t n = c.binning.mode == BinMode::FixedCount
                              ? c.binning.n
                              : static_cast<std::uint64_t>(std::max<long long>(
                                    1, std::llround(c.binning.percent * static_cast<double>(distinct_values))));
        j["n"] = n;
        j["hierarchy_depth"] = c.binning.hierarchy_depth;
        j["overlap"] = c.binning.overlap > 0.0;
        j["lof"] = c.lof.enabled;
        std::uint64_t leaves = 1;
        if ((c.kind == StrategyKind::KlRel || c.kind == StrategyKind::KlRelEnt) && aug.details.contains("leaves"))
            leaves = std::max<std::uint64_t>(1, aug.details["leaves"].size());
        j["leaves"] = leaves;
    } else if (c.kind == StrategyKind::Datfeat) {
        j["distinct_years"] = aug.details.value("distinct_years", std::uint64_t{0});
    } else if (c.kind == StrategyKind::Lda) {
        j["topics"] = c.lda.topics;
    } else if (c.kind == StrategyKind::Image) {
        j["vocabulary"] = provider ? provider->vocabulary_size() : 0;
        j["top_k"] = c.image.top_k;
    }
    return j;
}

Augmentation run_strategy(const GroupInput& in, const StrategyChoice& c, std::uint64_t seed,
                          const TagProvider* provider) {
    switch (c.kind) {
        case StrategyKind::Exclude: return exclude(in);
        case StrategyKind::Transform: return transform_literal2entity(in);
        case StrategyKind::OneEntity: return one_entity(in);
        case StrategyKind::NBins:
        case StrategyKind::PercentBins: return nbins(in, c.binning, c.lof);
        case StrategyKind::KlRel:
        case StrategyKind::KlRelEnt: return kl_rel_binning(in, c.split, c.binning, c.lof);
        case StrategyKind::Datbin: return datbin(in, c.binning, c.lof);
        case StrategyKind::Datfeat: {
            DatfeatSettings s = c.datfeat;
            s.year_chain = false;  // one global chain, minted by the pipeline
            return emit_datfeat_triples(in, s);
        }
        case StrategyKind::Lda: {
            LdaSettings s = c.lda;
            s.seed = seed;
            return txtlda(in, s, c.tokenizer);
        }
        case StrategyKind::Image:
            if (!provider) throw StrategyError(in.predicate_iri() + ": no image provider configured");
            return emit_image_triples(in, *provider, c.image);
    }
    throw StrategyError("unhandled strategy");
}

GroupOutcome run_group(const IndexedGraph& graph, const LiteralGroup& group, const StrategyConfig& config,
                       const Minter& minter, const TagProvider* provider) {
    GroupInput in{graph, group, minter};
    GroupOutcome out;
    GroupReport& row = out.row;
    row.predicate = in.predicate_iri();
    row.modality = group.modality;
    const StrategyChoice& choice = config.resolve(row.predicate, group.modality);
    if (auto it = config.overrides.find(row.predicate);
        it != config.overrides.end() && !compatible(it->second.kind, group.modality))
        row.warnings.push_back(row.predicate + ": override " + it->second.label() + " does not fit " +
                               std::string(to_string(group.modality)) + " literals; using the modality default");
    row.strategy = choice.label();
    row.applied = row.strategy;
    row.statements = group.statements.size();
    {
        std::unordered_set<Term, TermHash> values;
        for (const auto& st : group.statements) values.insert(st.object);
        row.distinct_values = values.size();
    }

    try {
        out.aug = run_strategy(in, choice, group_seed(config.seed, row.predicate, group.modality), provider);
        row.bound_inputs = bound_inputs_for(choice, row.distinct_values, out.aug, provider);
        if (choice.kind == StrategyKind::Datfeat && choice.datfeat.year_chain)
            for (const auto& y : out.aug.details.at("years")) out.years.insert(y.get<int>());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        if (config.fallback == FallbackPolicy::None)
            throw StrategyError(row.predicate + " (" + row.strategy + "): " + e.what());
        out.aug = config.fallback == FallbackPolicy::Exclude ? exclude(in) : one_entity(in);
        row.applied = std::string(to_string(config.fallback));
        row.bound_inputs = nlohmann::json::object();
        out.aug.warnings.push_back(row.predicate + ": " + row.strategy + " failed (" + e.what() + "); applied " +
                                   row.applied);
    }

    row.minted_entities = out.aug.minted_entities().size();
    row.minted_statements = out.aug.statements.size();
    row.removed = out.aug.removed;
    row.fallback_statements = out.aug.fallback_statements;
    row.structural = out.aug.structural.size();
    row.details = std::move(out.aug.details);
    out.aug.details = nlohmann::json::object();
    for (auto& w : out.aug.warnings) row.warnings.push_back(w);
    row.bound = size_bound(row);
    row.bound_ok = row.minted_entities <= row.bound.max_entities && row.minted_statements >= row.bound.min_statements &&
                   row.minted_statements <= row.bound.max_statements &&
                   (row.applied != "EXCLUDE" || row.removed == row.statements);
    return out;
}

void check_namespace(const IndexedGraph& graph, const Minter& minter) {
    auto clash = [&](const std::string& iri) {
        if (minter.owns(iri))
            throw ConfigError("input already contains IRI <" + iri + "> under the minted namespace " + minter.ns());
    };
    for (std::size_t r = 0; r < graph.relation_count(); ++r) clash(graph.relation(r));
    for (std::size_t e = 0; e < graph.entity_count(); ++e)
        if (graph.entity(e).is_iri()) clash(graph.entity(e).value);
    for (const auto& g : graph.literal_groups())
        for (const auto& st : g.statements)
            if (st.object.is_iri()) clash(st.object.value);
}

}  // namespace

std::uint64_t group_seed(std::uint64_t seed, const std::string& predicate, Modality modality) {
    return splitmix64(seed ^ splitmix64(fnv64(predicate) ^ static_cast<std::uint64_t>(modality)));
}

SizeBound size_bound(const GroupReport& row) {
    SizeBound b;
    const std::uint64_t S = row.statements, V = row.distinct_values, F = row.fallback_statements;
    std::string name = row.applied;
    bool lof_suffix = name.ends_with("+LOF");
    if (lof_suffix) name.resize(name.size() - 4);
    auto kind = strategy_from_string(name);
    const auto& in = row.bound_inputs;
    auto num = [&](const char* key) { return in.value(key, std::uint64_t{0}); };
    if (F > 0) b.exceptions.push_back("fallback");

    if (!kind) {
        b.formula = "unknown strategy";
        return b;
    }
    switch (*kind) {
        case StrategyKind::Exclude:
            b.formula = "--";
            break;
        case StrategyKind::Transform:
            b.max_entities = V;
            b.min_statements = b.max_statements = S;
            b.formula = "V*R / S";
            break;
        case StrategyKind::OneEntity:
            b.max_entities = 1;
            b.min_statements = b.max_statements = S;
            b.formula = "R / S";
            break;
        case StrategyKind::NBins:
        case StrategyKind::PercentBins:
        case StrategyKind::KlRel:
        case StrategyKind::KlRelEnt:
        case StrategyKind::Datbin: {
            const std::uint64_t n = num("n"), depth = num("hierarchy_depth"), leaves = std::max<std::uint64_t>(1, num("leaves"));
            const bool lof = in.value("lof", false), overlap = in.value("overlap", false);
            std::uint64_t per_leaf = hierarchy_bins(n, depth) + (lof ? 2 : 0);
            b.max_entities = per_leaf * leaves + F;
            b.min_statements = S;
            b.max_statements = S;
            if (overlap || depth > 0) b.max_statements = 3 * S * (depth + 1);
            if (overlap) b.exceptions.push_back("overlap");
            if (depth > 0) b.exceptions.push_back("hierarchy");
            if (lof) b.exceptions.push_back("lof_outlier_entities");
            if (leaves > 1) b.exceptions.push_back("subpopulations");
            b.formula = "n*R / S";
            break;
        }
        case StrategyKind::Datfeat:
            b.max_entities = 7 + 31 + 12 + 4 + num("distinct_years") + F;
            b.min_statements = b.max_statements = 5 * (S - F) + F;
            b.formula = "DW+DD+DM+DQ+DY / 5*S";
            break;
        case StrategyKind::Lda:
            b.max_entities = num("topics") + (F > 0 ? 1 : 0);
            b.min_statements = S;
            b.max_statements = num("topics") * (S - F) + F;
            b.formula = "T / T*S";
            break;
        case StrategyKind::Image: {
            const std::uint64_t k = std::max<std::uint64_t>(1, num("top_k"));
            b.max_entities = num("vocabulary") + (F > 0 ? 1 : 0);
            b.min_statements = S;
            b.max_statements = k * (S - F) + F;
            if (k > 1) b.exceptions.push_back("top_k");
            b.formula = "vocabulary / S";
            break;
        }
    }
    return b;
}

std::unique_ptr<TagProvider> make_provider(const ImageProviderConfig& config) {
    switch (config.kind) {
        case ImageProviderConfig::Kind::None: return nullptr;
        case ImageProviderConfig::Kind::TagMap:
            return std::make_unique<TagMapProvider>(TagMapProvider::from_file(config.tag_map));
        case ImageProviderConfig::Kind::Remote: return std::make_unique<RemoteTagProvider>(config.remote);
    }
    return nullptr;
}

PipelineResult apply(const IndexedGraph& graph, const StrategyConfig& config, const ApplyOptions& options) {
    config.validate();
    Minter minter(config.ns);
    check_namespace(graph, minter);
    const auto groups = graph.literal_groups();
    for (const auto& g : groups) minter.register_predicate(graph.relation(g.predicate));

    std::unique_ptr<TagProvider> owned;
    const TagProvider* provider = options.provider;
    if (!provider) {
        bool needs = std::any_of(groups.begin(), groups.end(), [&](const LiteralGroup& g) {
            return config.resolve(graph.relation(g.predicate), g.modality).kind == StrategyKind::Image;
        });
        if (needs) {
            owned = make_provider(config.image_provider);
            provider = owned.get();
        }
    }

    std::vector<std::optional<GroupOutcome>> outcomes(groups.size());
    {
        std::size_t workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min(workers, std::max<std::size_t>(1, groups.size()));
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto work = [&] {
            for (std::size_t i = next++; i < groups.size() && !failed; i = next++) {
                try {
                    outcomes[i] = run_group(graph, groups[i], config, minter, provider);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        };
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        pool.clear();
        if (error) std::rethrow_exception(error);
    }

    PipelineResult result;
    AugmentationReport& report = result.report;
    report.ns = config.ns;
    report.seed = config.seed;
    auto& totals = report.totals;
    totals.duplicates = graph.duplicates();
    totals.relational = graph.edges().size();
    totals.literal_statements = graph.literal_statement_count();
    totals.input_triples = totals.relational + totals.literal_statements + totals.duplicates;

    result.triples.reserve(graph.edges().size());
    for (const auto& e : graph.edges()) result.triples.push_back(graph.edge_triple(e));

    std::unordered_set<Triple, TripleHash> structural_seen;
    std::vector<Triple> structural;
    std::set<int> years;
    std::unordered_set<std::string> all_minted;
    std::map<std::string, std::unordered_set<std::string>> per_predicate;
    std::map<std::string, std::unordered_set<std::string>> per_strategy;
    std::map<std::string, std::set<std::string>> strategy_relations;

    for (auto& slot : outcomes) {
        GroupOutcome& o = *slot;
        GroupReport& row = o.row;
        auto& pred_set = per_predicate[row.predicate];
        auto& strat_set = per_strategy[row.applied];
        for (std::size_t i = 0; i < o.aug.statements.size(); ++i) {
            Triple& t = o.aug.statements[i];
            all_minted.insert(t.object.value);
            pred_set.insert(t.object.value);
            strat_set.insert(t.object.value);
            if (config.emit_weights && o.aug.weights[i] && *o.aug.weights[i] > 0.0)
                result.weights.push_back({t, *o.aug.weights[i]});
            result.triples.push_back(std::move(t));
        }
        for (auto& t : o.aug.structural)
            if (structural_seen.insert(t).second) structural.push_back(std::move(t));
        years.insert(o.years.begin(), o.years.end());

        auto& ps = report.predicates[row.predicate];
        ps.minted_statements += row.minted_statements;
        ps.removed += row.removed;

        auto& ss = report.strategies[row.applied];
        strategy_relations[row.applied].insert(row.predicate);
        ss.max_distinct_values = std::max(ss.max_distinct_values, row.distinct_values);
        ss.statements += row.statements;
        ss.minted_statements += row.minted_statements;
        ss.max_entities += row.bound.max_entities;
        ss.min_statements += row.bound.min_statements;
        ss.max_statements += row.bound.max_statements;
        ss.bound_ok = ss.bound_ok && row.bound_ok;

        totals.minted_statements += row.minted_statements;
        totals.minted_entities_sum += row.minted_entities;
        totals.removed += row.removed;
        for (const auto& w : row.warnings) report.warnings.push_back(w);
        report.groups.push_back(std::move(row));
    }
    for (auto& t : year_chain(minter, years))
        if (structural_seen.insert(t).second) structural.push_back(std::move(t));

    for (auto& [pred, set] : per_predicate) report.predicates[pred].minted_entities = set.size();
    for (auto& [name, ss] : report.strategies) {
        ss.relations = strategy_relations[name].size();
        ss.minted_entities = per_strategy[name].size();
        ss.bound_ok = ss.bound_ok && ss.minted_entities <= ss.max_entities &&
                      ss.minted_statements >= ss.min_statements && ss.minted_statements <= ss.max_statements;
    }
    totals.distinct_minted_entities = all_minted.size();
    totals.structural = structural.size();
    for (auto& t : structural) result.triples.push_back(std::move(t));
    totals.output_triples = result.triples.size();
    return result;
}

std::string serialize_weights(std::span<const WeightedEdge> weights) {
    std::string out;
    char buf[32];
    for (const auto& w : weights) {
        out += to_ntriples(w.triple);
        out.push_back('\t');
        auto res = std::to_chars(buf, buf + sizeof buf, w.weight);
        out.append(buf, res.ptr);
        out.push_back('\n');
    }
    return out;
}

nlohmann::json AugmentationReport::to_json() const {
    nlohmann::json groups_json = nlohmann::json::array();
    for (const auto& g : groups) {
        groups_json.push_back({
            {"predicate", g.predicate},
            {"modality", to_string(g.modality)},
            {"strategy", g.strategy},
            {"applied", g.applied},
            {"S", g.statements},
            {"V", g.distinct_values},
            {"delta_e", g.minted_entities},
            {"delta_s", g.minted_statements},
            {"removed", g.removed},
            {"fallback_statements", g.fallback_statements},
            {"structural", g.structural},
            {"bound_inputs", g.bound_inputs},
            {"bound",
             {{"formula", g.bound.formula},
              {"max_delta_e", g.bound.max_entities},
              {"min_delta_s", g.bound.min_statements},
              {"max_delta_s", g.bound.max_statements},
              {"exceptions", g.bound.exceptions},
              {"ok", g.bound_ok}}},
            {"warnings", g.warnings},
            {"details", g.details},
        });
    }
    nlohmann::json preds = nlohmann::json::object();
    for (const auto& [p, s] : predicates)
        preds[p] = {{"delta_e", s.minted_entities}, {"delta_s", s.minted_statements}, {"removed", s.removed}};
    nlohmann::json strats = nlohmann::json::object();
    for (const auto& [name, s] : strategies)
        strats[name] = {{"R", s.relations},
                        {"V", s.max_distinct_values},
                        {"S", s.statements},
                        {"delta_e", s.minted_entities},
                        {"delta_s", s.minted_statements},
                        {"max_delta_e", s.max_entities},
                        {"min_delta_s", s.min_statements},
                        {"max_delta_s", s.max_statements},
                        {"ok", s.bound_ok}};
    return {
        {"namespace", ns},
        {"seed", seed},
        {"groups", groups_json},
        {"predicates", preds},
        {"strategies", strats},
        {"totals",
         {{"input_triples", totals.input_triples},
          {"duplicates", totals.duplicates},
          {"relational", totals.relational},
          {"literal_statements", totals.literal_statements},
          {"delta_s", totals.minted_statements},
          {"delta_e_sum", totals.minted_entities_sum},
          {"delta_e_distinct", totals.distinct_minted_entities},
          {"removed", totals.removed},
          {"structural", totals.structural},
          {"output_triples", totals.output_triples}}},
        {"warnings", warnings},
    };
}

AugmentationReport AugmentationReport::from_json(const nlohmann::json& doc) {
    AugmentationReport r;
    try {
        r.ns = doc.at("namespace").get<std::string>();
        r.seed = doc.at("seed").get<std::uint64_t>();
        for (const auto& g : doc.at("groups")) {
            GroupReport row;
            row.predicate = g.at("predicate").get<std::string>();
            auto m = modality_from_string(g.at("modality").get<std::string>());
            if (!m) throw ConfigError("report: unknown modality");
            row.modality = *m;
            row.strategy = g.at("strategy").get<std::string>();
            row.applied = g.at("applied").get<std::string>();
            row.statements = g.at("S").get<std::uint64_t>();
            row.distinct_values = g.at("V").get<std::uint64_t>();
            row.minted_entities = g.at("delta_e").get<std::uint64_t>();
            row.minted_statements = g.at("delta_s").get<std::uint64_t>();
            row.removed = g.at("removed").get<std::uint64_t>();
            row.fallback_statements = g.at("fallback_statements").get<std::uint64_t>();
            row.structural = g.at("structural").get<std::uint64_t>();
            row.bound_inputs = g.at("bound_inputs");
            const auto& b = g.at("bound");
            row.bound.formula = b.at("formula").get<std::string>();
            row.bound.max_entities = b.at("max_delta_e").get<std::uint64_t>();
            row.bound.min_statements = b.at("min_delta_s").get<std::uint64_t>();
            row.bound.max_statements = b.at("max_delta_s").get<std::uint64_t>();
            row.bound.exceptions = b.at("exceptions").get<std::vector<std::string>>();
            row.bound_ok = b.at("ok").get<bool>();
            row.warnings = g.value("warnings", std::vector<std::string>{});
            row.details = g.value("details", nlohmann::json::object());
            r.groups.push_back(std::move(row));
        }
        for (const auto& [p, s] : doc.at("predicates").items())
            r.predicates[p] = {s.at("delta_e").get<std::uint64_t>(), s.at("delta_s").get<std::uint64_t>(),
                               s.at("removed").get<std::uint64_t>()};
        for (const auto& [name, s] : doc.at("strategies").items()) {
            StrategySummary ss;
            ss.relations = s.at("R").get<std::uint64_t>();
            ss.max_distinct_values = s.at("V").get<std::uint64_t>();
            ss.statements = s.at("S").get<std::uint64_t>();
            ss.minted_entities = s.at("delta_e").get<std::uint64_t>();
            ss.minted_statements = s.at("delta_s").get<std::uint64_t>();
            ss.max_entities = s.at("max_delta_e").get<std::uint64_t>();
            ss.min_statements = s.at("min_delta_s").get<std::uint64_t>();
            ss.max_statements = s.at("max_delta_s").get<std::uint64_t>();
            ss.bound_ok = s.at("ok").get<bool>();
            r.strategies[name] = ss;
        }
        const auto& t = doc.at("totals");
        r.totals.input_triples = t.at("input_triples").get<std::uint64_t>();
        r.totals.duplicates = t.at("duplicates").get<std::uint64_t>();
        r.totals.relational = t.at("relational").get<std::uint64_t>();
        r.totals.literal_statements = t.at("literal_statements").get<std::uint64_t>();
        r.totals.minted_statements = t.at("delta_s").get<std::uint64_t>();
        r.totals.minted_entities_sum = t.at("delta_e_sum").get<std::uint64_t>();
        r.totals.distinct_minted_entities = t.at("delta_e_distinct").get<std::uint64_t>();
        r.totals.removed = t.at("removed").get<std::uint64_t>();
        r.totals.structural = t.at("structural").get<std::uint64_t>();
        r.totals.output_triples = t.at("output_triples").get<std::uint64_t>();
        r.warnings = doc.value("warnings", std::vector<std::string>{});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed report: ") + e.what());
    }
    return r;
}

}  // namespace lforge

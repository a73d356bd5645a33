#include "literal_forge/subpopulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace lforge {

std::vector<Feature> entity_signature(const IndexedGraph& graph, EntityId entity, SignatureMode mode) {
    std::vector<Feature> sig;
    bool with_neighbor = mode == SignatureMode::RelEnt;
    for (const auto& a : graph.outgoing(entity)) sig.push_back({a.relation, false, with_neighbor ? a.neighbor : 0});
    for (const auto& a : graph.incoming(entity)) sig.push_back({a.relation, true, with_neighbor ? a.neighbor : 0});
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
}

RelationDistribution smoothed_distribution(std::span<const Feature> vocabulary, std::span<const double> counts) {
    RelationDistribution d;
    d.support.assign(vocabulary.begin(), vocabulary.end());
    const std::size_t n = vocabulary.size();
    if (n == 0) return d;
    d.smoothing = 1.0 / (10.0 * static_cast<double>(n));
    double total = 0.0;
    for (double c : counts) total += c;
    d.probabilities.resize(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double freq = total > 0.0 ? counts[i] / total : 0.0;
        d.probabilities[i] = freq + d.smoothing;
        norm += d.probabilities[i];
    }
    for (double& p : d.probabilities) p /= norm;
    return d;
}

RelationDistribution relation_distribution(std::span<const EntityId> subjects, const IndexedGraph& graph,
                                           SignatureMode mode) {
    std::map<Feature, double> counts;
    for (EntityId s : subjects)
        for (const auto& f : entity_signature(graph, s, mode)) counts[f] += 1.0;
    std::vector<Feature> vocabulary;
    std::vector<double> values;
    for (const auto& [f, c] : counts) {
        vocabulary.push_back(f);
        values.push_back(c);
    }
    return smoothed_distribution(vocabulary, values);
}

double kl_divergence(const RelationDistribution& p, const RelationDistribution& q) {
    if (p.support != q.support || p.probabilities.size() != q.probabilities.size())
        throw std::invalid_argument("kl_divergence: distributions have different supports");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
        double pi = p.probabilities[i];
        if (pi > 0.0) sum += pi * std::log(pi / q.probabilities[i]);
    }
    return std::max(sum, 0.0);
}

std::vector<std::size_t> PopulationSplit::leaves() const {
    std::vector<std::size_t> out;
    if (nodes.empty()) return out;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        std::size_t id = stack.back();
        stack.pop_back();
        const auto& node = nodes[id];
        if (node.leaf()) {
            out.push_back(id);
        } else {
            stack.push_back(node.without_child);
            stack.push_back(node.with_child);
        }
    }
    return out;
}

namespace {

class Splitter {
public:
    Splitter(const GroupInput& in, const SplitSettings& settings) : in_(in), settings_(settings) {}

    PopulationSplit run(std::span<const std::size_t> statements) {
        PopulationSplit split;
        split.nodes.push_back(SplitNode{{statements.begin(), statements.end()}, std::nullopt, 0.0, false, 0, 0});
        std::vector<std::size_t> work{0};
        while (!work.empty()) {
            std::size_t id = work.back();
            work.pop_back();
            if (split.nodes[id].members.size() < settings_.threshold) continue;
            auto best = best_split(split.nodes[id].members);
            if (!best) {
                split.nodes[id].indivisible = true;
                continue;
            }
            SplitNode with, without;
            for (std::size_t m : split.nodes[id].members) {
                const auto& sig = signature(m);
                (std::binary_search(sig.begin(), sig.end(), best->first) ? with : without).members.push_back(m);
            }
            std::size_t with_id = split.nodes.size();
            split.nodes.push_back(std::move(with));
            split.nodes.push_back(std::move(without));
            auto& node = split.nodes[id];
            node.feature = best->first;
            node.divergence = best->second;
            node.with_child = with_id;
            node.without_child = with_id + 1;
            work.push_back(with_id + 1);
            work.push_back(with_id);
        }
        return split;
    }

private:
    const std::vector<Feature>& signature(std::size_t statement) {
        EntityId s = in_.group.statements[statement].subject;
        auto it = cache_.find(s);
        if (it == cache_.end()) it = cache_.emplace(s, entity_signature(in_.graph, s, settings_.mode)).first;
        return it->second;
    }

    std::optional<std::pair<Feature, double>> best_split(const std::vector<std::size_t>& members) {
        std::map<Feature, double> totals;
        for (std::size_t m : members)
            for (const auto& f : signature(m)) totals[f] += 1.0;
        if (settings_.mode == SignatureMode::RelEnt)
            std::erase_if(totals, [](const auto& kv) { return kv.second < 2.0; });
        const std::size_t F = totals.size();
        if (F == 0) return std::nullopt;

        std::vector<Feature> vocabulary;
        std::vector<double> total_counts;
        for (const auto& [f, c] : totals) {
            vocabulary.push_back(f);
            total_counts.push_back(c);
        }
        // member signatures as vocabulary indices, and the inverted index
        std::vector<std::vector<std::uint32_t>> sigs(members.size());
        std::vector<std::vector<std::uint32_t>> postings(F);
        for (std::size_t k = 0; k < members.size(); ++k) {
            for (const auto& f : signature(members[k])) {
                auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), f);
                if (it == vocabulary.end() || *it != f) continue;
                auto idx = static_cast<std::uint32_t>(it - vocabulary.begin());
                sigs[k].push_back(idx);
                postings[idx].push_back(static_cast<std::uint32_t>(k));
            }
        }

        // Smoothed KL(with || without) over the whole vocabulary, evaluated
        // sparsely: features absent from the "with" side share one P value,
        // and their Q values only depend on the total count, so they are
        // summed through a histogram of totals.
        const double eps = 1.0 / (10.0 * static_cast<double>(F));
        const double z = 1.0 + static_cast<double>(F) * eps;
        const double grand = std::accumulate(total_counts.begin(), total_counts.end(), 0.0);
        std::map<double, double> histogram;
        for (double t : total_counts) histogram[t] += 1.0;

        std::vector<double> with(F, 0.0);
        std::vector<std::uint32_t> touched;
        std::optional<std::pair<Feature, double>> best;
        for (std::size_t fi = 0; fi < F; ++fi) {
            if (postings[fi].size() >= members.size()) continue;  // every member has it: trivial split
            touched.clear();
            for (auto k : postings[fi])
                for (auto idx : sigs[k]) {
                    if (with[idx] == 0.0) touched.push_back(idx);
                    with[idx] += 1.0;
                }
            double w_total = 0.0;
            for (auto idx : touched) w_total += with[idx];
            const double u_total = grand - w_total;
            auto q_of = [&](double u) { return u_total > 0.0 ? (u / u_total + eps) / z : 1.0 / static_cast<double>(F); };

            const double p0 = eps / z;
            double log_q_all = 0.0;
            for (const auto& [t, mult] : histogram) log_q_all += mult * std::log(q_of(t));
            double sum = 0.0, log_q_touched = 0.0;
            for (auto idx : touched) {
                double p = (with[idx] / w_total + eps) / z;
                double q = q_of(total_counts[idx] - with[idx]);
                sum += p * std::log(p / q);
                log_q_touched += std::log(q_of(total_counts[idx]));
            }
            const double untouched = static_cast<double>(F - touched.size());
            sum += untouched * p0 * std::log(p0) - p0 * (log_q_all - log_q_touched);
            const double divergence = std::max(sum, 0.0);
            for (auto idx : touched) with[idx] = 0.0;

            // near-equal divergences keep the lexicographically first feature
            if (!best || divergence > best->second + 1e-12 * std::max(1.0, best->second))
                best = std::pair{vocabulary[fi], divergence};
        }
        if (!best || best->second < settings_.min_divergence) return std::nullopt;
        return best;
    }

    const GroupInput& in_;
    const SplitSettings& settings_;
    std::unordered_map<EntityId, std::vector<Feature>> cache_;
};

std::string feature_label(const Feature& f, const IndexedGraph& graph, bool with_neighbor) {
    std::string label = (f.incoming ? "in:" : "out:") + graph.relation(f.relation);
    if (with_neighbor) label += " " + graph.entity(f.neighbor).value;
    return label;
}

}  // namespace

PopulationSplit split_population(const GroupInput& in, std::span<const std::size_t> statements,
                                 const SplitSettings& settings) {
    return Splitter(in, settings).run(statements);
}

PopulationSplit split_population(const GroupInput& in, const SplitSettings& settings) {
    std::vector<std::size_t> all(in.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return split_population(in, all, settings);
}

nlohmann::json split_json(const PopulationSplit& split, const IndexedGraph& graph, SignatureMode mode) {
    std::function<nlohmann::json(std::size_t)> node_json = [&](std::size_t id) {
        const auto& n = split.nodes[id];
        nlohmann::json j = {{"size", n.members.size()}};
        if (n.leaf()) {
            j["indivisible"] = n.indivisible;
            return j;
        }
        j["feature"] = feature_label(*n.feature, graph, mode == SignatureMode::RelEnt);
        j["divergence"] = n.divergence;
        j["with"] = node_json(n.with_child);
        j["without"] = node_json(n.without_child);
        return j;
    };
    return split.nodes.empty() ? nlohmann::json() : node_json(0);
}

Augmentation kl_rel_binning(const GroupInput& in, const SplitSettings& settings, const BinningSpec& spec,
                            const LofSettings& lof) {
    spec.validate();
    Augmentation out;
    BinnedPopulation population = collect_numeric(in, out);
    PopulationSplit split = split_population(in, population.statements, settings);

    std::unordered_map<std::size_t, double> value_of;
    for (std::size_t i = 0; i < population.statements.size(); ++i)
        value_of.emplace(population.statements[i], population.values[i]);

    auto leaves = split.leaves();
    nlohmann::json leaf_details = nlohmann::json::array();
    for (std::size_t li = 0; li < leaves.size(); ++li) {
        const auto& node = split.nodes[leaves[li]];
        if (node.members.empty()) continue;
        BinnedPopulation sub;
        for (std::size_t m : node.members) {
            sub.statements.push_back(m);
            sub.values.push_back(value_of.at(m));
        }
        std::string prefix = in.stem();
        if (leaves.size() > 1) prefix += "Sub" + pad_index(li, leaves.size());
        Augmentation binned = bin_population(in, std::move(sub), spec, lof, prefix);
        leaf_details.push_back(std::move(binned.details));
        out.append(std::move(binned));
    }
    out.details = {{"split", split_json(split, in.graph, settings.mode)}, {"leaves", leaf_details}};
    return out;
}

}  // namespace lforge

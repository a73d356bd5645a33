#include "literal_forge/binning.hpp"

#include "literal_forge/baselines.hpp"
#include "literal_forge/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace lforge {

void BinningSpec::validate() const {
    if (mode == BinMode::FixedCount && n < 1) throw ConfigError("bins: n must be >= 1");
    if (mode == BinMode::Percent && !(percent > 0.0 && percent <= 1.0))
        throw ConfigError("bins: percent must be in (0, 1]");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("bins: overlap must be in [0, 1)");
}

std::optional<double> parse_numeric(std::string_view lexical) {
    // xsd numeric lexical spaces collapse surrounding whitespace and allow '+'
    while (!lexical.empty() && (lexical.front() == ' ' || lexical.front() == '\t' || lexical.front() == '\n' ||
                                lexical.front() == '\r'))
        lexical.remove_prefix(1);
    while (!lexical.empty() && (lexical.back() == ' ' || lexical.back() == '\t' || lexical.back() == '\n' ||
                                lexical.back() == '\r'))
        lexical.remove_suffix(1);
    if (!lexical.empty() && lexical.front() == '+') {
        lexical.remove_prefix(1);
        if (!lexical.empty() && lexical.front() == '-') return std::nullopt;
    }
    if (lexical.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(lexical.data(), lexical.data() + lexical.size(), value);
    if (ec != std::errc{} || ptr != lexical.data() + lexical.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::size_t bin_count(std::size_t /*occurrences*/, std::size_t unique, const BinningSpec& spec) {
    if (unique == 0) return 1;
    if (spec.mode == BinMode::FixedCount) return std::min(spec.n, unique);
    auto k = static_cast<std::size_t>(std::llround(spec.percent * static_cast<double>(unique)));
    return std::max<std::size_t>(1, k);
}

std::size_t BinLayout::total_bins() const {
    std::size_t total = 0;
    for (auto c : level_counts) total += c;
    return total;
}

std::pair<double, double> BinLayout::member_interval(std::size_t leaf) const {
    double lo = boundaries[leaf];
    double hi = boundaries[leaf + 1];
    double widen = overlap * (hi - lo);
    if (leaf > 0) lo -= widen;
    if (leaf + 1 < leaf_count()) hi += widen;
    return {lo, hi};
}

std::pair<double, double> BinLayout::level_interval(std::size_t level, std::size_t index) const {
    std::size_t span = std::size_t{1} << level;
    std::size_t first = index * span;
    std::size_t last = std::min(first + span, leaf_count());
    return {boundaries[first], boundaries[last]};
}

BinLayout compute_bins(std::span<const double> values, const BinningSpec& spec) {
    if (values.empty()) throw std::invalid_argument("compute_bins: no values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    std::size_t unique = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    std::size_t k = bin_count(values.size(), unique, spec);

    BinLayout layout;
    layout.overlap = spec.overlap;
    layout.connect_adjacent = spec.connect_adjacent;
    layout.boundaries.push_back(lo);
    if (lo < hi && k > 1) {
        if (spec.scheme == BinScheme::EqualWidth) {
            for (std::size_t i = 1; i < k; ++i) {
                double b = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k);
                if (b > layout.boundaries.back() && b < hi) layout.boundaries.push_back(b);
            }
        } else {
            std::vector<double> all(values.begin(), values.end());
            std::sort(all.begin(), all.end());
            for (std::size_t i = 1; i < k; ++i) {
                double b = all[i * all.size() / k];
                if (b > layout.boundaries.back() && b < hi) layout.boundaries.push_back(b);
            }
        }
    }
    layout.boundaries.push_back(hi);

    std::size_t leaves = layout.leaf_count();
    layout.level_counts.push_back(leaves);
    for (std::size_t j = 1; j <= spec.hierarchy_depth && layout.level_counts.back() > 1; ++j)
        layout.level_counts.push_back((leaves + (std::size_t{1} << j) - 1) >> j);
    return layout;
}

std::size_t leaf_index(double value, const BinLayout& layout) {
    const auto& b = layout.boundaries;
    // interior boundaries b1..b_{k-1}: count of those <= value
    auto first = b.begin() + 1;
    auto last = b.end() - 1;
    if (first >= last) return 0;
    return static_cast<std::size_t>(std::upper_bound(first, last, value) - first);
}

std::vector<BinRef> assign_bins(double value, const BinLayout& layout) {
    std::set<BinRef> bins;
    const std::size_t k = layout.leaf_count();
    if (layout.overlap > 0.0 && k > 1) {
        for (std::size_t i = 0; i < k; ++i) {
            auto [lo, hi] = layout.member_interval(i);
            bool last = i + 1 == k;
            if (value >= lo && (value < hi || (last && value <= hi))) bins.insert({0, i});
        }
    }
    if (bins.empty()) bins.insert({0, leaf_index(value, layout)});
    std::vector<BinRef> leaves(bins.begin(), bins.end());
    for (std::size_t j = 1; j < layout.level_count(); ++j)
        for (const auto& leaf : leaves) bins.insert({j, leaf.index >> j});
    return {bins.begin(), bins.end()};
}

std::string bin_local_name(std::string_view prefix, const BinLayout& layout, BinRef bin) {
    std::string name(prefix);
    if (bin.level > 0) name += "L" + std::to_string(bin.level);
    name += "Bin" + pad_index(bin.index, layout.level_counts[bin.level]);
    return name;
}

Augmentation emit_bin_triples(const GroupInput& in, const BinnedPopulation& population, const BinLayout& layout,
                              std::string_view prefix) {
    Augmentation out;
    const Term predicate = in.predicate();
    auto bin_term = [&](BinRef ref) { return in.minter.entity(bin_local_name(prefix, layout, ref)); };

    for (std::size_t i = 0; i < population.statements.size(); ++i) {
        const Term& subject = in.subject(population.statements[i]);
        OutlierSide side = population.outlier.empty() ? OutlierSide::None : population.outlier[i];
        if (side != OutlierSide::None) {
            std::string name(prefix);
            name += side == OutlierSide::Low ? "OutlierLow" : "OutlierHigh";
            out.link({subject, predicate, in.minter.entity(name)});
            continue;
        }
        for (const auto& ref : assign_bins(population.values[i], layout)) out.link({subject, predicate, bin_term(ref)});
    }

    const Term next = in.minter.entity(kNextBin);
    const Term parent = in.minter.entity(kParentBin);
    for (std::size_t level = 0; level < layout.level_count(); ++level) {
        std::size_t count = layout.level_counts[level];
        if (layout.connect_adjacent)
            for (std::size_t i = 0; i + 1 < count; ++i)
                out.structural.push_back({bin_term({level, i}), next, bin_term({level, i + 1})});
        if (level + 1 < layout.level_count())
            for (std::size_t i = 0; i < count; ++i)
                out.structural.push_back({bin_term({level, i}), parent, bin_term({level + 1, i >> 1})});
    }
    return out;
}

BinnedPopulation collect_numeric(const GroupInput& in, Augmentation& out) {
    BinnedPopulation population;
    const Term predicate = in.predicate();
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Term& value = in.value(i);
        std::optional<double> parsed = value.is_literal() ? parse_numeric(value.value) : std::nullopt;
        if (!parsed) {
            out.link({in.subject(i), predicate, transform_entity(in, value)});
            ++out.fallback_statements;
            continue;
        }
        population.statements.push_back(i);
        population.values.push_back(*parsed);
    }
    if (out.fallback_statements > 0)
        out.warnings.push_back(in.predicate_iri() + ": " + std::to_string(out.fallback_statements) +
                               " unparseable numeric value(s) linked with TRANSFORM");
    return population;
}

nlohmann::json layout_json(const BinLayout& layout, std::span<const double> values) {
    std::vector<std::size_t> counts(layout.leaf_count(), 0);
    for (double v : values) ++counts[leaf_index(v, layout)];
    return {{"bins", layout.leaf_count()},
            {"boundaries", layout.boundaries},
            {"counts", counts},
            {"overlap", layout.overlap},
            {"levels", layout.level_counts}};
}

Augmentation bin_population(const GroupInput& in, BinnedPopulation population, const BinningSpec& spec,
                            const LofSettings& lof, std::string_view prefix) {
    Augmentation out;
    if (population.values.empty()) return out;
    nlohmann::json details = nlohmann::json::object();

    std::vector<double> retained_values = population.values;
    if (lof.enabled) {
        LofResult scored = lof_scores(population.values, lof.k, lof.threshold);
        if (scored.skipped) out.warnings.push_back(in.predicate_iri() + ": " + scored.warning);
        retained_values.clear();
        for (auto idx : scored.retained) retained_values.push_back(population.values[idx]);
        if (!scored.outliers.empty()) {
            auto [min_it, max_it] = std::minmax_element(retained_values.begin(), retained_values.end());
            population.outlier.assign(population.values.size(), OutlierSide::None);
            for (auto idx : scored.outliers) {
                double v = population.values[idx];
                if (v < *min_it)
                    population.outlier[idx] = OutlierSide::Low;
                else if (v > *max_it)
                    population.outlier[idx] = OutlierSide::High;
            }
        }
        details["lof"] = {{"k", lof.k},
                          {"threshold", lof.threshold},
                          {"skipped", scored.skipped},
                          {"outliers", scored.outliers.size()}};
    }

    BinLayout layout = compute_bins(retained_values, spec);
    Augmentation emitted = emit_bin_triples(in, population, layout, prefix);
    details["layout"] = layout_json(layout, retained_values);
    out.append(std::move(emitted));
    out.details = std::move(details);
    return out;
}

Augmentation nbins(const GroupInput& in, const BinningSpec& spec, const LofSettings& lof) {
    spec.validate();
    Augmentation out;
    BinnedPopulation population = collect_numeric(in, out);
    Augmentation binned = bin_population(in, std::move(population), spec, lof, in.stem());
    nlohmann::json details = std::move(binned.details);
    out.append(std::move(binned));
    out.details = std::move(details);
    return out;
}

}  // namespace lforge

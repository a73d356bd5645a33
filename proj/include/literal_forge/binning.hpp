#pragma once
// Numeric binning: nBINS, p%BINS, overlapping and hierarchical bins, with an
// optional LOF pre-filter.

#include "literal_forge/lof.hpp"
#include "literal_forge/mint.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lforge {

enum class BinMode { FixedCount, Percent };
enum class BinScheme { EqualWidth, EqualFrequency };

struct BinningSpec {
    BinMode mode = BinMode::FixedCount;
    std::size_t n = 10;     // FixedCount
    double percent = 0.1;   // Percent: fraction of unique values, in (0, 1]
    double overlap = 0.0;   // fraction of a bin's width added on each shared edge, in [0, 1)
    std::size_t hierarchy_depth = 0;
    bool connect_adjacent = true;
    BinScheme scheme = BinScheme::EqualWidth;

    /// Throws ConfigError on out-of-range parameters.
    void validate() const;
};

/// Binary64 value of a numeric lexical form (correctly rounded), or nullopt
/// for unparseable or non-finite forms.
std::optional<double> parse_numeric(std::string_view lexical);

/// fixed-n: min(n, unique); percent: max(1, round(p * unique)).
std::size_t bin_count(std::size_t occurrences, std::size_t unique, const BinningSpec& spec);

struct BinLayout {
    /// Leaf boundaries b0 < b1 < ... < bk; bin i is [b_i, b_{i+1}), the last
    /// bin is closed. A degenerate layout (all values equal) is {v, v}.
    std::vector<double> boundaries;
    double overlap = 0.0;
    /// Bin counts per level; level 0 is the leaf level, level j has
    /// ceil(k / 2^j) bins and bin m covers leaves [m*2^j, (m+1)*2^j).
    std::vector<std::size_t> level_counts;
    bool connect_adjacent = true;

    std::size_t leaf_count() const { return boundaries.size() - 1; }
    std::size_t level_count() const { return level_counts.size(); }
    std::size_t total_bins() const;
    bool degenerate() const { return boundaries.front() == boundaries.back(); }
    /// Leaf bin i widened by the overlap fraction on its shared edges.
    std::pair<double, double> member_interval(std::size_t leaf) const;
    /// Value range covered by bin `index` of `level`.
    std::pair<double, double> level_interval(std::size_t level, std::size_t index) const;
};

struct BinRef {
    std::size_t level = 0;
    std::size_t index = 0;

    friend bool operator==(const BinRef&, const BinRef&) = default;
    friend auto operator<=>(const BinRef&, const BinRef&) = default;
};

/// Requires non-empty values. k = bin_count(values, unique, spec).
BinLayout compute_bins(std::span<const double> values, const BinningSpec& spec);

/// Leaf index for a flat disjoint layout; values outside the covered range
/// clamp to the nearest end bin.
std::size_t leaf_index(double value, const BinLayout& layout);

/// Every bin containing `value`: the leaf bin(s), widened by overlap, plus
/// their ancestors at every hierarchy level. Sorted by (level, index).
std::vector<BinRef> assign_bins(double value, const BinLayout& layout);

enum class OutlierSide : unsigned char { None, Low, High };

/// Values of one (sub)population with the statement each came from.
struct BinnedPopulation {
    std::vector<std::size_t> statements;  // indices into the group
    std::vector<double> values;           // parallel to `statements`
    std::vector<OutlierSide> outlier;     // parallel; empty means no outliers
};

/// Bin entity name: <prefix>Bin<NN> at the leaf level, <prefix>L<j>Bin<NN> above.
std::string bin_local_name(std::string_view prefix, const BinLayout& layout, BinRef bin);

/// One statement per (statement, assigned bin); nextBin links between
/// neighbouring bins of each level when connect_adjacent; parentBin links
/// from every child to its parent. Outliers link to <prefix>OutlierLow/High.
Augmentation emit_bin_triples(const GroupInput& in, const BinnedPopulation& population,
                              const BinLayout& layout, std::string_view prefix);

/// Parses the group's values; unparseable ones are linked with the TRANSFORM
/// rule and counted as fallbacks in `out`.
BinnedPopulation collect_numeric(const GroupInput& in, Augmentation& out);

/// Optional LOF, compute_bins and emit_bin_triples for one population.
/// Outliers that fall outside the retained range link to the outlier entities;
/// outliers inside it keep their regular bin.
Augmentation bin_population(const GroupInput& in, BinnedPopulation population, const BinningSpec& spec,
                            const LofSettings& lof, std::string_view prefix);

/// nBINS / p%BINS over a whole numeric group.
Augmentation nbins(const GroupInput& in, const BinningSpec& spec, const LofSettings& lof = {});

nlohmann::json layout_json(const BinLayout& layout, std::span<const double> values);

inline constexpr std::string_view kNextBin = "nextBin";
inline constexpr std::string_view kParentBin = "parentBin";

}  // namespace lforge

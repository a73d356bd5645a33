#include "literal_forge/binning.hpp"
#include "literal_forge/error.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace lforge;
using fixtures::kNs;
using fixtures::kXsd;

namespace {

struct NumericGroup {
    std::vector<Triple> triples;
    IndexedGraph graph;
    Minter minter{kNs};

    explicit NumericGroup(const std::vector<double>& values, const std::string& pred = "http://ex.org/height") {
        for (std::size_t i = 0; i < values.size(); ++i) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", values[i]);
            triples.push_back(fixtures::lit("http://ex.org/s" + std::to_string(i), pred, buf, kXsd + "double"));
        }
        graph = build_index(triples);
        minter.register_predicate(pred);
    }
    GroupInput in() const { return {graph, graph.literal_groups()[0], minter}; }
};

BinningSpec fixed(std::size_t n) {
    BinningSpec s;
    s.n = n;
    return s;
}

}  // namespace

TEST_CASE("numeric lexical forms") {
    CHECK(parse_numeric("42") == 42.0);
    CHECK(parse_numeric(" +1.5e2 ") == 150.0);
    CHECK(parse_numeric("-0.25") == -0.25);
    CHECK(parse_numeric(".5") == 0.5);
    CHECK_FALSE(parse_numeric("").has_value());
    CHECK_FALSE(parse_numeric("abc").has_value());
    CHECK_FALSE(parse_numeric("1.5x").has_value());
    CHECK_FALSE(parse_numeric("INF").has_value());
    CHECK_FALSE(parse_numeric("NaN").has_value());
    CHECK_FALSE(parse_numeric("+-1").has_value());
    CHECK(parse_numeric("0.1") == 0.1);  // correctly rounded
}

TEST_CASE("bin counts") {
    BinningSpec pct;
    pct.mode = BinMode::Percent;
    pct.percent = 0.10;
    CHECK(bin_count(1000, 200, pct) == 20);
    CHECK(bin_count(10, 3, pct) == 1);
    CHECK(bin_count(100, 5, fixed(10)) == 5);
    CHECK(bin_count(100, 50, fixed(10)) == 10);
}

TEST_CASE("spec validation") {
    BinningSpec s;
    s.n = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.mode = BinMode::Percent;
    s.percent = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.overlap = 1.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("equal-width layout over 0..100") {
    std::vector<double> v;
    for (int i = 0; i <= 100; ++i) v.push_back(i);
    BinLayout l = compute_bins(v, fixed(4));
    CHECK(l.boundaries == std::vector<double>{0, 25, 50, 75, 100});
    CHECK(leaf_index(0, l) == 0);
    CHECK(leaf_index(24.9, l) == 0);
    CHECK(leaf_index(25, l) == 1);
    CHECK(leaf_index(100, l) == 3);
    CHECK(leaf_index(-5, l) == 0);
    CHECK(leaf_index(500, l) == 3);
}

TEST_CASE("equal-frequency layout splits at order statistics") {
    std::vector<double> v = {1, 2, 3, 4, 100, 200, 300, 400};
    BinningSpec s = fixed(2);
    s.scheme = BinScheme::EqualFrequency;
    BinLayout l = compute_bins(v, s);
    CHECK(l.boundaries == std::vector<double>{1, 100, 400});
}

TEST_CASE("degenerate layout when all values are equal") {
    std::vector<double> v(5, 7.0);
    BinLayout l = compute_bins(v, fixed(10));
    CHECK(l.degenerate());
    CHECK(l.leaf_count() == 1);
    CHECK(assign_bins(7.0, l) == std::vector<BinRef>{{0, 0}});
}

TEST_CASE("overlap places boundary values in both neighbours") {
    std::vector<double> v;
    for (int i = 0; i <= 100; ++i) v.push_back(i);
    BinningSpec s = fixed(4);
    s.overlap = 0.2;  // 5 units on each shared edge
    BinLayout l = compute_bins(v, s);
    CHECK(assign_bins(12, l) == std::vector<BinRef>{{0, 0}});
    CHECK(assign_bins(23, l) == std::vector<BinRef>{{0, 0}, {0, 1}});
    CHECK(assign_bins(27, l) == std::vector<BinRef>{{0, 0}, {0, 1}});
    CHECK(assign_bins(100, l) == std::vector<BinRef>{{0, 3}});
}

TEST_CASE("hierarchy levels halve the bin count") {
    std::vector<double> v;
    for (int i = 0; i < 100; ++i) v.push_back(i);
    BinningSpec s = fixed(5);
    s.hierarchy_depth = 5;
    BinLayout l = compute_bins(v, s);
    CHECK(l.level_counts == std::vector<std::size_t>{5, 3, 2, 1});
    CHECK(l.total_bins() == 11);
    auto refs = assign_bins(99, l);
    CHECK(refs == std::vector<BinRef>{{0, 4}, {1, 2}, {2, 1}, {3, 0}});
    CHECK(bin_local_name("height", l, {0, 4}) == "heightBin04");
    CHECK(bin_local_name("height", l, {2, 1}) == "heightL2Bin01");
}

TEST_CASE("nBINS over a group: one link per statement, adjacency and names") {
    std::vector<double> values;
    for (int i = 0; i < 50; ++i) values.push_back(i * 2.0);
    NumericGroup g(values);
    Augmentation a = nbins(g.in(), fixed(5));
    CHECK(a.statements.size() == 50);
    CHECK(a.minted_entities().size() == 5);
    CHECK(a.structural.size() == 4);  // nextBin chain
    CHECK(a.statements[0].object.value == kNs + "heightBin00");
    CHECK(a.statements[49].object.value == kNs + "heightBin04");
    CHECK(a.structural[0].predicate.value == kNs + "nextBin");
    CHECK(a.details["layout"]["bins"] == 5);

    BinningSpec no_links = fixed(5);
    no_links.connect_adjacent = false;
    CHECK(nbins(g.in(), no_links).structural.empty());
}

TEST_CASE("unparseable values fall back to TRANSFORM") {
    std::vector<Triple> triples = {
        fixtures::lit("http://ex.org/a", "http://ex.org/h", "1", kXsd + "double"),
        fixtures::lit("http://ex.org/b", "http://ex.org/h", "tall", kXsd + "double"),
        fixtures::lit("http://ex.org/c", "http://ex.org/h", "3", kXsd + "double"),
    };
    IndexedGraph graph = build_index(triples);
    Minter m(kNs);
    m.register_predicate("http://ex.org/h");
    Augmentation a = nbins({graph, graph.literal_groups()[0], m}, fixed(2));
    CHECK(a.statements.size() == 3);
    CHECK(a.fallback_statements == 1);
    CHECK(a.warnings.size() == 1);
    CHECK(std::any_of(a.statements.begin(), a.statements.end(),
                      [](const Triple& t) { return t.object.value == kNs + "htall"; }));
}

TEST_CASE("LOF pre-filter links far outliers to outlier entities") {
    std::vector<double> values;
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) values.push_back(std::normal_distribution<double>(100, 5)(rng));
    values.push_back(5000);
    values.push_back(-4000);
    NumericGroup g(values);
    LofSettings lof;
    lof.enabled = true;
    Augmentation a = nbins(g.in(), fixed(10), lof);
    CHECK(a.statements.size() == values.size());
    CHECK(a.statements[200].object.value == kNs + "heightOutlierHigh");
    CHECK(a.statements[201].object.value == kNs + "heightOutlierLow");
    double top = a.details["layout"]["boundaries"].back().get<double>();
    CHECK(top < 5000);
    CHECK(a.details["lof"]["outliers"].get<std::size_t>() >= 2);
}

TEST_CASE("property: flat bins give delta S == S and delta E <= n") {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 40; ++round) {
        std::uniform_int_distribution<int> size(1, 300), nd(1, 30);
        std::vector<double> values;
        int count = size(rng);
        for (int i = 0; i < count; ++i)
            values.push_back(round % 3 == 0 ? std::floor(std::uniform_real_distribution<double>(0, 10)(rng))
                                            : std::exponential_distribution<double>(0.1)(rng));
        NumericGroup g(values);
        BinningSpec spec = fixed(static_cast<std::size_t>(nd(rng)));
        spec.scheme = round % 2 ? BinScheme::EqualFrequency : BinScheme::EqualWidth;
        Augmentation a = nbins(g.in(), spec);
        CHECK(a.statements.size() == values.size());
        CHECK(a.minted_entities().size() <= spec.n);

        // every value lies inside its leaf's interval
        BinLayout l = compute_bins(values, spec);
        for (double v : values) {
            auto i = leaf_index(v, l);
            CHECK(v >= l.boundaries[i]);
            CHECK(v <= l.boundaries[i + 1]);
        }
    }
}

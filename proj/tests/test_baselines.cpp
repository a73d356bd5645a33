#include "literal_forge/baselines.hpp"
#include "literal_forge/graph.hpp"
#include "literal_forge/mint.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace lforge;
using fixtures::kNs;

namespace {

struct Bench {
    IndexedGraph graph;
    Minter minter{kNs};

    explicit Bench(const std::vector<Triple>& triples, ModalityRules rules = {}) : graph(build_index(triples, rules)) {
        for (const auto& g : graph.literal_groups()) minter.register_predicate(graph.relation(g.predicate));
    }
    GroupInput group(std::size_t i) const { return {graph, graph.literal_groups()[i], minter}; }
    std::size_t find(const std::string& predicate) const {
        auto groups = graph.literal_groups();
        for (std::size_t i = 0; i < groups.size(); ++i)
            if (graph.relation(groups[i].predicate) == predicate) return i;
        FAIL("no group for " << predicate);
        return 0;
    }
};

}  // namespace

TEST_CASE("minting helpers") {
    CHECK(percent_encode("a b/c~") == "a%20b%2Fc~");
    CHECK(percent_encode("\xC3\xA9") == "%C3%A9");
    CHECK(local_name("http://dbpedia.org/ontology/populationMetro") == "populationMetro");
    CHECK(local_name("http://xmlns.com/foaf/0.1/depiction") == "depiction");
    CHECK(local_name("http://ex.org/x#frag") == "frag");
    CHECK(local_name("urn:isbn:123") == "123");
    CHECK(pad_index(2, 10) == "02");
    CHECK(pad_index(14, 20) == "14");
    CHECK(pad_index(7, 101) == "007");
    CHECK(pad_index(0, 1) == "00");
    CHECK(content_hash32("") == 2166136261u);
    CHECK(content_hash32("a") == 0xe40c292cu);  // FNV-1a reference value

    std::string long_value(100, 'x');
    std::string s = sanitize_value(long_value);
    CHECK(s.size() == 64 + 1 + 8);
    CHECK(s.starts_with(std::string(64, 'x') + "_"));
    CHECK(sanitize_value(std::string(99, 'x') + "y") != s);
    CHECK(sanitize_value("2362046") == "2362046");
}

TEST_CASE("stems: first predicate keeps the local name, later ones get a hash") {
    Minter m(kNs);
    CHECK(m.register_predicate("http://a.org/name") == "name");
    std::string second = m.register_predicate("http://b.org/name");
    CHECK(second.starts_with("name_"));
    CHECK(second.size() == 5 + 8);
    CHECK(m.register_predicate("http://a.org/name") == "name");
    CHECK(m.register_predicate("http://c.org/") .starts_with("p"));
    const Minter& cm = m;
    CHECK_THROWS_AS(cm.stem("http://never.org/x"), std::out_of_range);
    CHECK(m.entity("nameAnyValue").value == kNs + "nameAnyValue");
    CHECK(m.owns(kNs + "x"));
    CHECK_FALSE(m.owns("http://a.org/name"));
}

TEST_CASE("Mannheim TRANSFORM and ONEENTITY examples") {
    Bench b(fixtures::mannheim());
    auto in = b.group(b.find(fixtures::kDbo + "populationMetro"));
    Augmentation t = transform_literal2entity(in);
    REQUIRE(t.statements.size() == 1);
    CHECK(t.statements[0].subject.value == fixtures::kDbr + "Mannheim");
    CHECK(t.statements[0].predicate.value == fixtures::kDbo + "populationMetro");
    CHECK(t.statements[0].object.value == kNs + "populationMetro2362046");

    Augmentation o = one_entity(in);
    REQUIRE(o.statements.size() == 1);
    CHECK(o.statements[0].object.value == kNs + "populationMetroAnyValue");

    Augmentation x = exclude(in);
    CHECK(x.statements.empty());
    CHECK(x.removed == 1);
}

TEST_CASE("property: baseline delta counts match their definitions") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 25; ++round) {
        std::vector<Triple> triples;
        std::set<std::string> values;
        std::set<std::pair<int, std::string>> seen;
        std::uniform_int_distribution<int> subj(0, 40), val(0, 25);
        for (int i = 0; i < 200; ++i) {
            int s = subj(rng);
            std::string v = "v" + std::to_string(val(rng)) + (i % 7 == 0 ? " with space" : "");
            if (!seen.insert({s, v}).second) continue;
            values.insert(v);
            triples.push_back(fixtures::lit("http://ex.org/s" + std::to_string(s), "http://ex.org/p", v,
                                            "http://ex.org/dt"));
        }
        Bench b(triples);
        auto in = b.group(0);
        const std::size_t S = in.size();
        Augmentation t = transform_literal2entity(in);
        CHECK(t.statements.size() == S);
        CHECK(t.minted_entities().size() == values.size());
        Augmentation o = one_entity(in);
        CHECK(o.statements.size() == S);
        CHECK(o.minted_entities().size() == 1);
        for (const auto& st : t.statements) CHECK(b.minter.owns(st.object.value));
    }
}

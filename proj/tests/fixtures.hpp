#pragma once
// Graph fixtures shared by the unit tests and the acceptance suite.

#include "literal_forge/rdf_io.hpp"

#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using lforge::Term;
using lforge::Triple;

inline const std::string kXsd = "http://www.w3.org/2001/XMLSchema#";
inline const std::string kNs = "http://example.org/new#";
inline const std::string kDbr = "http://dbpedia.org/resource/";
inline const std::string kDbo = "http://dbpedia.org/ontology/";
inline const std::string kDepiction = "http://xmlns.com/foaf/0.1/depiction";
inline const std::string kMannheimImage = "http://commons.wikimedia.org/wiki/Special:FilePath/NUB_Mannheim_2014-03-13.jpg";

inline Triple rel(const std::string& s, const std::string& p, const std::string& o) {
    return {Term::iri(s), Term::iri(p), Term::iri(o)};
}
inline Triple lit(const std::string& s, const std::string& p, const std::string& value, const std::string& type) {
    return {Term::iri(s), Term::iri(p), Term::literal(value, type)};
}

inline std::vector<Triple> mannheim() {
    return {
        rel(kDbr + "Mannheim", kDbo + "country", kDbr + "Germany"),
        rel(kDbr + "University_of_Mannheim", "http://dbpedia.org/property/city", kDbr + "Mannheim"),
        lit(kDbr + "Mannheim", kDbo + "populationMetro", "2362046", kXsd + "nonNegativeInteger"),
        lit(kDbr + "Mannheim", kDbo + "foundingDate", "1607-01-24", kXsd + "date"),
        {Term::iri(kDbr + "Mannheim"), Term::iri(kDbo + "abstract"),
         Term::lang_literal("Mannheim [...] officially the University City of Mannheim (German: Universit\xC3\xA4tsstadt "
                            "Mannheim), is the second-largest city in the German state of Baden-W\xC3\xBCrttemberg...",
                            "en")},
        rel(kDbr + "Mannheim", kDepiction, kMannheimImage),
    };
}

inline std::string mannheim_tag_map() {
    return R"({")" + kMannheimImage +
           R"(": [{"name": "building", "score": 0.7}, {"name": "person", "score": 0.2}, {"name": "tree", "score": 0.1}]})";
}

/// Known shape of one literal predicate of the synthetic graph.
struct PredicateShape {
    std::string iri;
    std::string kind;  // numeric, date, text, image, other
    std::size_t statements = 0;
    std::size_t distinct = 0;
};

struct SyntheticGraph {
    std::vector<Triple> triples;
    std::vector<PredicateShape> predicates;
    std::size_t relational = 0;
    std::string tag_map;  // JSON for every image IRI
};

inline std::string date_string(int day_offset) {
    // 2000-01-01 plus offset days, without calendar libraries.
    static const int md[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int y = 2000, m = 1, d = 1 + day_offset;
    for (;;) {
        bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        int len = md[m - 1] + (m == 2 && leap ? 1 : 0);
        if (d <= len) break;
        d -= len;
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

/// 10,000 literal statements over 1,000 subjects with known S and V per
/// predicate, plus a relational backbone. Statement j of a predicate uses
/// subject j % 1000 and value j % V; V never divides 1000, so no statement
/// repeats.
inline SyntheticGraph synthetic_graph(std::uint64_t seed = 1) {
    SyntheticGraph g;
    std::mt19937_64 rng(seed);
    const std::string ex = "http://example.org/data/";
    auto subject = [&](std::size_t j) { return ex + "e" + std::to_string(j % 1000); };

    for (std::size_t i = 0; i < 1000; ++i) {
        g.triples.push_back(rel(ex + "e" + std::to_string(i), ex + "type", ex + (i % 3 == 0 ? "A" : "B")));
        g.triples.push_back(rel(ex + "e" + std::to_string(i), ex + "link", ex + "e" + std::to_string((i * 7 + 1) % 1000)));
    }
    g.relational = g.triples.size();

    auto add = [&](PredicateShape shape, auto&& value_of, const std::string& type) {
        for (std::size_t j = 0; j < shape.statements; ++j)
            g.triples.push_back(lit(subject(j), shape.iri, value_of(j % shape.distinct), type));
        g.predicates.push_back(shape);
    };
    std::vector<double> pool(1500);
    for (auto& v : pool) v = std::uniform_real_distribution<double>(0, 1e6)(rng);
    auto number = [&](std::size_t v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.3f", pool[v] + static_cast<double>(v) * 1e-3);
        return std::string(buf);
    };
    add({ex + "num0", "numeric", 1500, 300}, number, kXsd + "decimal");
    add({ex + "num1", "numeric", 1500, 70}, number, kXsd + "decimal");
    add({ex + "num2", "numeric", 1500, 1500}, number, kXsd + "decimal");
    add({ex + "date0", "date", 1000, 365}, [](std::size_t v) { return date_string(static_cast<int>(v) * 3); },
        kXsd + "date");
    add({ex + "date1", "date", 1000, 999}, [](std::size_t v) { return date_string(static_cast<int>(v) * 11); },
        kXsd + "date");

    static const char* words_a[] = {"river", "bridge", "harbor", "canal", "boat", "shore", "water", "ferry"};
    static const char* words_b[] = {"castle", "tower", "knight", "crown", "throne", "wall", "gate", "king"};
    std::vector<std::string> docs(123);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (int w = 0; w < 12; ++w) {
            const char* word = (d % 2 ? words_a : words_b)[(d * 5 + static_cast<std::size_t>(w) * 3) % 8];
            docs[d] += std::string(word) + (w % 4 == 3 ? ". " : " ");
        }
        docs[d] += std::to_string(d);
    }
    add({ex + "text0", "text", 1000, 123}, [&](std::size_t v) { return docs[v]; }, kXsd + "string");

    std::map<std::size_t, std::string> labels;
    static const char* label_pool[] = {"building", "person", "tree", "car", "dog", "bridge", "church", "ship"};
    for (std::size_t j = 0; j < 1000; ++j) {
        std::size_t v = j % 199;
        g.triples.push_back(rel(subject(j), ex + "img0", ex + "images/" + std::to_string(v) + ".jpg"));
    }
    g.predicates.push_back({ex + "img0", "image", 1000, 199});
    g.tag_map = "{";
    for (std::size_t v = 0; v < 199; ++v) {
        if (v) g.tag_map += ",";
        g.tag_map += "\"" + ex + "images/" + std::to_string(v) + ".jpg\": [{\"name\": \"" + label_pool[v % 8] +
                     "\", \"score\": 0.6}, {\"name\": \"" + label_pool[(v + 1) % 8] + "\", \"score\": 0.3}]";
    }
    g.tag_map += "}";

    add({ex + "other0", "other", 1500, 251}, [](std::size_t v) { return "code-" + std::to_string(v); },
        "http://example.org/datatype/code");
    return g;
}

/// Two structurally distinct subject groups sharing a height predicate:
/// persons (birthPlace edges, heights around 1.75) and buildings (locatedIn
/// edges, heights 10 to 300).
struct HeightPopulation {
    std::vector<Triple> triples;
    std::vector<std::string> persons, buildings;
    std::string height, birth_place, located_in;
};

inline HeightPopulation height_population(std::uint64_t seed = 3, std::size_t per_group = 400) {
    HeightPopulation h;
    const std::string ex = "http://example.org/hp/";
    h.height = ex + "height";
    h.birth_place = ex + "birthPlace";
    h.located_in = ex + "locatedIn";
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> person(1.75, 0.1);
    std::uniform_real_distribution<double> building(10.0, 300.0);
    for (std::size_t i = 0; i < per_group; ++i) {
        std::string p = ex + "person" + std::to_string(i), b = ex + "building" + std::to_string(i);
        h.persons.push_back(p);
        h.buildings.push_back(b);
        h.triples.push_back(rel(p, ex + "type", ex + "Thing"));
        h.triples.push_back(rel(p, h.birth_place, ex + "city" + std::to_string(i % 17)));
        h.triples.push_back(rel(b, ex + "type", ex + "Thing"));
        h.triples.push_back(rel(b, h.located_in, ex + "city" + std::to_string(i % 23)));
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", person(rng));
        h.triples.push_back(lit(p, h.height, buf, kXsd + "double"));
        std::snprintf(buf, sizeof buf, "%.2f", building(rng));
        h.triples.push_back(lit(b, h.height, buf, kXsd + "double"));
    }
    return h;
}

/// Documents drawn from two disjoint vocabularies; group A is even ids.
struct TwoVocabularyCorpus {
    std::vector<std::string> documents;
    std::vector<int> group;
};

inline TwoVocabularyCorpus two_vocabulary_corpus(std::uint64_t seed = 11, std::size_t docs = 60,
                                                 std::size_t tokens = 400) {
    TwoVocabularyCorpus c;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 24);
    for (std::size_t d = 0; d < docs; ++d) {
        int g = static_cast<int>(d % 2);
        std::string text;
        for (std::size_t t = 0; t < tokens; ++t) text += (g == 0 ? "alpha" : "omega") + std::to_string(pick(rng)) + " ";
        c.documents.push_back(text);
        c.group.push_back(g);
    }
    return c;
}

}  // namespace fixtures

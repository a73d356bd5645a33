#pragma once
// N-Triples terms, parsing and canonical serialization.
//
// Terms keep their lexical forms byte-exact: escapes are decoded on input and
// re-applied on output, nothing else is normalized.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lforge {

namespace vocab {
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view xsd_string = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view rdf_lang_string =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}  // namespace vocab

enum class TermKind : std::uint8_t { Iri, BlankNode, Literal };

struct Term {
    TermKind kind = TermKind::Iri;
    std::string value;     // IRI text, blank node label (without "_:"), or lexical form
    std::string datatype;  // literals only
    std::string language;  // literals only; non-empty implies rdf:langString

    static Term iri(std::string text);
    static Term blank(std::string label);
    static Term literal(std::string lexical, std::string datatype = std::string(vocab::xsd_string));
    static Term lang_literal(std::string lexical, std::string language);

    bool is_iri() const noexcept { return kind == TermKind::Iri; }
    bool is_blank() const noexcept { return kind == TermKind::BlankNode; }
    bool is_literal() const noexcept { return kind == TermKind::Literal; }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept;
};

struct Triple {
    Term subject;
    Term predicate;
    Term object;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept;
};

struct ParseDiagnostic {
    std::size_t line = 0;  // 1-based
    std::string message;
};

enum class ParseMode { Lenient, Strict };

struct ParseResult {
    std::vector<Triple> triples;
    std::vector<ParseDiagnostic> diagnostics;
};

/// Describes why `term` is not a valid RDF term, or nullopt when it is.
std::optional<std::string> term_violation(const Term& term);
std::optional<std::string> triple_violation(const Triple& triple);

/// Parses one N-Triples line. Returns nullopt for blank and comment-only lines;
/// throws nothing, reporting malformed input through `error`.
std::optional<Triple> parse_ntriples_line(std::string_view line, std::string& error);

/// Parses a whole in-memory N-Triples document. Lenient mode skips malformed
/// lines and records a diagnostic; strict mode throws ParseError on the first.
ParseResult parse_ntriples(std::string_view input, ParseMode mode = ParseMode::Lenient);

/// Streams triples from a file, decompressing gzip input (detected by magic
/// bytes). Returns the diagnostics collected in lenient mode.
std::vector<ParseDiagnostic> read_ntriples_file(const std::filesystem::path& path, ParseMode mode,
                                                const std::function<void(Triple&&)>& sink);

ParseResult read_ntriples_file(const std::filesystem::path& path, ParseMode mode = ParseMode::Lenient);

/// Appends the canonical N-Triples form of `term`. Throws SerializeError
/// naming the term when it violates the term invariants.
void append_term(std::string& out, const Term& term);

/// One canonical statement without the trailing newline.
std::string to_ntriples(const Triple& triple);

/// Canonical N-Triples: one statement per line, single spaces, " ." and "\n".
std::string serialize_ntriples(std::span<const Triple> triples);

}  // namespace lforge

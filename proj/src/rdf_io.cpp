#include "literal_forge/rdf_io.hpp"

#include "literal_forge/error.hpp"

#include <zlib.h>

#include <array>
#include <charconv>
#include <cstring>
#include <memory>

namespace lforge {

Term Term::iri(std::string text) { return Term{TermKind::Iri, std::move(text), {}, {}}; }

Term Term::blank(std::string label) { return Term{TermKind::BlankNode, std::move(label), {}, {}}; }

Term Term::literal(std::string lexical, std::string datatype) {
    return Term{TermKind::Literal, std::move(lexical), std::move(datatype), {}};
}

Term Term::lang_literal(std::string lexical, std::string language) {
    return Term{TermKind::Literal, std::move(lexical), std::string(vocab::rdf_lang_string),
                std::move(language)};
}

namespace {

inline void hash_combine(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ws(char c) { return c == ' ' || c == '\t'; }

bool has_scheme(std::string_view iri) {
    if (iri.empty() || !is_alpha(iri[0])) return false;
    for (std::size_t i = 1; i < iri.size(); ++i) {
        char c = iri[i];
        if (c == ':') return true;
        if (!(is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.')) return false;
    }
    return false;
}

bool iri_char_forbidden(unsigned char c) {
    return c <= 0x20 || c == '<' || c == '>';
}

// Characters the IRIREF production disallows unescaped; written as \u00XX.
bool iri_char_needs_escape(unsigned char c) {
    return c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`' || c == '\\';
}

bool blank_char(unsigned char c) {
    return is_alpha(static_cast<char>(c)) || is_digit(static_cast<char>(c)) || c == '_' ||
           c == '-' || c == '.' || c >= 0x80;
}

bool valid_blank_label(std::string_view label) {
    if (label.empty()) return false;
    unsigned char first = static_cast<unsigned char>(label.front());
    if (!(is_alpha(label.front()) || is_digit(label.front()) || first == '_' || first >= 0x80))
        return false;
    if (label.back() == '.') return false;
    for (char c : label)
        if (!blank_char(static_cast<unsigned char>(c))) return false;
    return true;
}

bool valid_language(std::string_view tag) {
    std::size_t i = 0;
    std::size_t n = 0;
    while (i < tag.size() && is_alpha(tag[i])) ++i, ++n;
    if (n == 0) return false;
    while (i < tag.size()) {
        if (tag[i] != '-') return false;
        ++i;
        n = 0;
        while (i < tag.size() && (is_alpha(tag[i]) || is_digit(tag[i]))) ++i, ++n;
        if (n == 0) return false;
    }
    return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

void append_uchar(std::string& out, unsigned char c) {
    static constexpr char hex[] = "0123456789ABCDEF";
    out += "\\u00";
    out.push_back(hex[c >> 4]);
    out.push_back(hex[c & 0xF]);
}

class LineParser {
public:
    explicit LineParser(std::string_view line) : s_(line) {}

    std::optional<Triple> run(std::string& error) {
        skip_ws();
        if (at_end() || peek() == '#') return std::nullopt;
        Triple t;
        if (!subject(t.subject) || !require_ws("after subject") || !iri(t.predicate) ||
            !require_ws("after predicate") || !object(t.object)) {
            error = error_;
            return std::nullopt;
        }
        skip_ws();
        if (at_end() || peek() != '.') {
            error = "expected '.' at column " + std::to_string(pos_ + 1);
            return std::nullopt;
        }
        ++pos_;
        skip_ws();
        if (!at_end() && peek() != '#') {
            error = "unexpected content after '.' at column " + std::to_string(pos_ + 1);
            return std::nullopt;
        }
        return t;
    }

private:
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }

    void skip_ws() {
        while (!at_end() && (is_ws(peek()) || peek() == '\r')) ++pos_;
    }

    bool fail(std::string msg) {
        error_ = std::move(msg) + " at column " + std::to_string(pos_ + 1);
        return false;
    }

    bool require_ws(const char* where) {
        if (at_end() || !is_ws(peek())) return fail(std::string("expected whitespace ") + where);
        skip_ws();
        return true;
    }

    bool hex_digits(std::size_t count, std::uint32_t& cp) {
        if (pos_ + count > s_.size()) return fail("truncated unicode escape");
        cp = 0;
        auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + pos_ + count, cp, 16);
        if (ec != std::errc{} || ptr != s_.data() + pos_ + count) return fail("bad unicode escape");
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return fail("invalid code point");
        pos_ += count;
        return true;
    }

    bool uchar(std::string& out) {
        // at the character after the backslash
        char kind = peek();
        ++pos_;
        std::uint32_t cp = 0;
        if (!hex_digits(kind == 'u' ? 4 : 8, cp)) return false;
        append_utf8(out, cp);
        return true;
    }

    bool iri_text(std::string& out) {
        ++pos_;  // '<'
        while (true) {
            if (at_end()) return fail("unterminated IRI");
            unsigned char c = static_cast<unsigned char>(peek());
            if (c == '>') break;
            if (c == '\\') {
                ++pos_;
                if (at_end() || (peek() != 'u' && peek() != 'U')) return fail("bad escape in IRI");
                if (!uchar(out)) return false;
                continue;
            }
            if (iri_char_forbidden(c) || iri_char_needs_escape(c))
                return fail("character not allowed in IRI");
            out.push_back(static_cast<char>(c));
            ++pos_;
        }
        ++pos_;  // '>'
        for (unsigned char c : out)
            if (iri_char_forbidden(c)) return fail("escaped whitespace or angle bracket in IRI");
        if (!has_scheme(out)) return fail("relative IRI <" + out + ">");
        return true;
    }

    bool iri(Term& t) {
        if (at_end() || peek() != '<') return fail("expected IRI");
        t.kind = TermKind::Iri;
        return iri_text(t.value);
    }

    bool blank(Term& t) {
        pos_ += 2;  // "_:"
        std::size_t start = pos_;
        while (!at_end() && blank_char(static_cast<unsigned char>(peek()))) ++pos_;
        // a label cannot end in '.', so trailing dots belong to the statement
        while (pos_ > start && s_[pos_ - 1] == '.') --pos_;
        std::string_view label = s_.substr(start, pos_ - start);
        if (!valid_blank_label(label)) return fail("invalid blank node label");
        t.kind = TermKind::BlankNode;
        t.value.assign(label);
        return true;
    }

    bool subject(Term& t) {
        if (at_end()) return fail("expected subject");
        if (peek() == '<') return iri(t);
        if (s_.substr(pos_, 2) == "_:") return blank(t);
        return fail("expected IRI or blank node as subject");
    }

    bool literal(Term& t) {
        ++pos_;  // '"'
        t.kind = TermKind::Literal;
        std::string& out = t.value;
        while (true) {
            if (at_end()) return fail("unterminated literal");
            char c = peek();
            if (c == '"') break;
            if (c == '\n' || c == '\r') return fail("raw line break in literal");
            if (c != '\\') {
                // copy the run of plain characters in one go
                std::size_t end = s_.find_first_of("\"\\\r\n", pos_);
                if (end == std::string_view::npos) end = s_.size();
                out.append(s_.substr(pos_, end - pos_));
                pos_ = end;
                continue;
            }
            ++pos_;
            if (at_end()) return fail("dangling escape");
            switch (peek()) {
                case 't': out.push_back('\t'); break;
                case 'b': out.push_back('\b'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 'f': out.push_back('\f'); break;
                case '"': out.push_back('"'); break;
                case '\'': out.push_back('\''); break;
                case '\\': out.push_back('\\'); break;
                case 'u':
                case 'U':
                    if (!uchar(out)) return false;
                    continue;
                default: return fail("unknown escape");
            }
            ++pos_;
        }
        ++pos_;  // closing quote
        if (!at_end() && peek() == '@') {
            ++pos_;
            std::size_t start = pos_;
            while (!at_end() && (is_alpha(peek()) || is_digit(peek()) || peek() == '-')) ++pos_;
            std::string_view tag = s_.substr(start, pos_ - start);
            if (!valid_language(tag)) return fail("invalid language tag");
            t.language.assign(tag);
            t.datatype.assign(vocab::rdf_lang_string);
            return true;
        }
        if (s_.substr(pos_, 2) == "^^") {
            pos_ += 2;
            if (at_end() || peek() != '<') return fail("expected datatype IRI after ^^");
            if (!iri_text(t.datatype)) return false;
            if (t.datatype == vocab::rdf_lang_string)
                return fail("rdf:langString literal without language tag");
            return true;
        }
        t.datatype.assign(vocab::xsd_string);
        return true;
    }

    bool object(Term& t) {
        if (at_end()) return fail("expected object");
        if (peek() == '<') return iri(t);
        if (peek() == '"') return literal(t);
        if (s_.substr(pos_, 2) == "_:") return blank(t);
        return fail("expected IRI, blank node or literal as object");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::string error_;
};

// Line-oriented reader over a zlib file handle; gzread passes plain files
// through unchanged, so compression is detected by magic bytes for free.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path) : file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw IoError("cannot open " + path.string());
        buffer_.resize(1 << 16);
    }
    ~LineReader() {
        if (file_) gzclose(file_);
    }
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool next(std::string& line) {
        line.clear();
        while (true) {
            if (pos_ == end_) {
                if (eof_) return !line.empty();
                int n = gzread(file_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
                if (n < 0) {
                    int code = 0;
                    throw IoError(std::string("read error: ") + gzerror(file_, &code));
                }
                if (n == 0) {
                    eof_ = true;
                    return !line.empty();
                }
                pos_ = 0;
                end_ = static_cast<std::size_t>(n);
            }
            const char* begin = buffer_.data() + pos_;
            const void* nl = std::memchr(begin, '\n', end_ - pos_);
            if (nl) {
                std::size_t len = static_cast<const char*>(nl) - begin;
                line.append(begin, len);
                pos_ += len + 1;
                return true;
            }
            line.append(begin, end_ - pos_);
            pos_ = end_;
        }
    }

private:
    gzFile file_;
    std::string buffer_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
    bool eof_ = false;
};

}  // namespace

std::size_t TermHash::operator()(const Term& t) const noexcept {
    std::size_t h = std::hash<std::string_view>{}(t.value);
    hash_combine(h, static_cast<std::size_t>(t.kind));
    if (t.kind == TermKind::Literal) {
        hash_combine(h, std::hash<std::string_view>{}(t.datatype));
        hash_combine(h, std::hash<std::string_view>{}(t.language));
    }
    return h;
}

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
    TermHash th;
    std::size_t h = th(t.subject);
    hash_combine(h, th(t.predicate));
    hash_combine(h, th(t.object));
    return h;
}

std::optional<std::string> term_violation(const Term& term) {
    switch (term.kind) {
        case TermKind::Iri:
            if (term.value.empty()) return "empty IRI";
            for (unsigned char c : term.value)
                if (iri_char_forbidden(c)) return "IRI <" + term.value + "> contains whitespace or angle bracket";
            if (!has_scheme(term.value)) return "IRI <" + term.value + "> is not absolute";
            return std::nullopt;
        case TermKind::BlankNode:
            if (!valid_blank_label(term.value)) return "invalid blank node label _:" + term.value;
            return std::nullopt;
        case TermKind::Literal: {
            bool lang_type = term.datatype == vocab::rdf_lang_string;
            if (!term.language.empty()) {
                if (!valid_language(term.language)) return "invalid language tag @" + term.language;
                if (!lang_type) return "language-tagged literal must have datatype rdf:langString";
                return std::nullopt;
            }
            if (lang_type) return "rdf:langString literal \"" + term.value + "\" without language tag";
            if (auto v = term_violation(Term::iri(term.datatype)))
                return "literal \"" + term.value + "\" has bad datatype: " + *v;
            return std::nullopt;
        }
    }
    return "unknown term kind";
}

std::optional<std::string> triple_violation(const Triple& triple) {
    if (triple.subject.is_literal()) return "literal subject \"" + triple.subject.value + "\"";
    if (!triple.predicate.is_iri()) return "predicate is not an IRI: " + triple.predicate.value;
    for (const Term* t : {&triple.subject, &triple.predicate, &triple.object})
        if (auto v = term_violation(*t)) return v;
    return std::nullopt;
}

std::optional<Triple> parse_ntriples_line(std::string_view line, std::string& error) {
    error.clear();
    return LineParser(line).run(error);
}

ParseResult parse_ntriples(std::string_view input, ParseMode mode) {
    ParseResult result;
    std::size_t line_no = 0;
    std::string error;
    while (!input.empty()) {
        ++line_no;
        std::size_t nl = input.find('\n');
        std::string_view line = input.substr(0, nl);
        input = nl == std::string_view::npos ? std::string_view{} : input.substr(nl + 1);
        auto triple = parse_ntriples_line(line, error);
        if (triple) {
            result.triples.push_back(std::move(*triple));
        } else if (!error.empty()) {
            if (mode == ParseMode::Strict) throw ParseError(line_no, error);
            result.diagnostics.push_back({line_no, error});
        }
    }
    return result;
}

std::vector<ParseDiagnostic> read_ntriples_file(const std::filesystem::path& path, ParseMode mode,
                                                const std::function<void(Triple&&)>& sink) {
    LineReader reader(path);
    std::vector<ParseDiagnostic> diagnostics;
    std::string line;
    std::string error;
    std::size_t line_no = 0;
    while (reader.next(line)) {
        ++line_no;
        auto triple = parse_ntriples_line(line, error);
        if (triple) {
            sink(std::move(*triple));
        } else if (!error.empty()) {
            if (mode == ParseMode::Strict) throw ParseError(line_no, error);
            diagnostics.push_back({line_no, error});
        }
    }
    return diagnostics;
}

ParseResult read_ntriples_file(const std::filesystem::path& path, ParseMode mode) {
    ParseResult result;
    result.diagnostics =
        read_ntriples_file(path, mode, [&](Triple&& t) { result.triples.push_back(std::move(t)); });
    return result;
}

void append_term(std::string& out, const Term& term) {
    if (auto v = term_violation(term)) throw SerializeError(*v);
    switch (term.kind) {
        case TermKind::Iri:
            out.push_back('<');
            for (char c : term.value) {
                if (iri_char_needs_escape(static_cast<unsigned char>(c)))
                    append_uchar(out, static_cast<unsigned char>(c));
                else
                    out.push_back(c);
            }
            out.push_back('>');
            break;
        case TermKind::BlankNode:
            out += "_:";
            out += term.value;
            break;
        case TermKind::Literal:
            out.push_back('"');
            for (char c : term.value) {
                switch (c) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\r': out += "\\r"; break;
                    case '\t': out += "\\t"; break;
                    case '\b': out += "\\b"; break;
                    case '\f': out += "\\f"; break;
                    default:
                        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F)
                            append_uchar(out, static_cast<unsigned char>(c));
                        else
                            out.push_back(c);
                }
            }
            out.push_back('"');
            if (!term.language.empty()) {
                out.push_back('@');
                out += term.language;
            } else if (term.datatype != vocab::xsd_string) {
                out += "^^";
                append_term(out, Term::iri(term.datatype));
            }
            break;
    }
}

std::string to_ntriples(const Triple& triple) {
    if (triple.subject.is_literal())
        throw SerializeError("literal subject \"" + triple.subject.value + "\"");
    if (!triple.predicate.is_iri())
        throw SerializeError("predicate is not an IRI: " + triple.predicate.value);
    std::string out;
    append_term(out, triple.subject);
    out.push_back(' ');
    append_term(out, triple.predicate);
    out.push_back(' ');
    append_term(out, triple.object);
    out += " .";
    return out;
}

std::string serialize_ntriples(std::span<const Triple> triples) {
    std::string out;
    for (const auto& t : triples) {
        out += to_ntriples(t);
        out.push_back('\n');
    }
    return out;
}

}  // namespace lforge

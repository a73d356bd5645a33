#include "literal_forge/mint.hpp"

#include <cstdio>
#include <unordered_set>

namespace lforge {

namespace {

bool unreserved(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
           c == '.' || c == '_' || c == '~';
}

std::string hex8(std::uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

}  // namespace

std::string percent_encode(std::string_view text) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        if (unreserved(c)) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::uint32_t content_hash32(std::string_view text) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : text) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

std::string sanitize_value(std::string_view lexical) {
    if (lexical.size() <= kMaxValueChars) return percent_encode(lexical);
    return percent_encode(lexical.substr(0, kMaxValueChars)) + "_" + hex8(content_hash32(lexical));
}

std::string_view local_name(std::string_view iri) {
    auto cut = iri.find_last_of('#');
    if (cut == std::string_view::npos) cut = iri.find_last_of('/');
    if (cut == std::string_view::npos) cut = iri.find_last_of(':');
    return cut == std::string_view::npos ? iri : iri.substr(cut + 1);
}

std::string pad_index(std::size_t index, std::size_t count) {
    std::size_t width = 2;
    for (std::size_t top = count > 0 ? count - 1 : 0; top >= 100; top /= 10) ++width;
    std::string digits = std::to_string(index);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return digits;
}

const std::string& Minter::register_predicate(const std::string& predicate_iri) {
    if (auto it = stems_.find(predicate_iri); it != stems_.end()) return it->second;
    std::string stem = percent_encode(local_name(predicate_iri));
    if (stem.empty() || stem_owner_.contains(stem))
        stem += (stem.empty() ? "p" : "_") + hex8(content_hash32(predicate_iri));
    stem_owner_.emplace(stem, predicate_iri);
    return stems_.emplace(predicate_iri, std::move(stem)).first->second;
}

const std::string& Minter::stem(const std::string& predicate_iri) { return register_predicate(predicate_iri); }

const std::string& Minter::stem(const std::string& predicate_iri) const { return stems_.at(predicate_iri); }

std::vector<std::string> Augmentation::minted_entities() const {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    for (const auto& t : statements)
        if (seen.insert(t.object.value).second) out.push_back(t.object.value);
    return out;
}

void Augmentation::append(Augmentation&& other) {
    for (std::size_t i = 0; i < other.statements.size(); ++i)
        link(std::move(other.statements[i]), other.weights[i]);
    for (auto& t : other.structural) structural.push_back(std::move(t));
    removed += other.removed;
    fallback_statements += other.fallback_statements;
    for (auto& w : other.warnings) warnings.push_back(std::move(w));
}

}  // namespace lforge

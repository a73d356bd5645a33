#include "literal_forge/image_tags.hpp"

#include "literal_forge/baselines.hpp"
#include "literal_forge/error.hpp"

#include <httplib.h>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <mutex>
#include <thread>

namespace lforge {

std::string ImageRef::key() const { return kind == PayloadKind::Iri ? iri : "sha256:" + sha256; }

std::optional<std::vector<unsigned char>> decode_base64(std::string_view text) {
    std::string compact;
    compact.reserve(text.size());
    for (char c : text)
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r') compact.push_back(c);
    if (compact.empty()) return std::vector<unsigned char>{};
    if (compact.size() % 4 != 0) return std::nullopt;
    std::size_t padding = 0;
    if (compact.back() == '=') ++padding;
    if (compact.size() >= 2 && compact[compact.size() - 2] == '=') ++padding;
    if (compact.find('=') < compact.size() - padding) return std::nullopt;

    std::vector<unsigned char> out(compact.size() / 4 * 3);
    int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(compact.data()),
                            static_cast<int>(compact.size()));
    if (n < 0) return std::nullopt;
    out.resize(static_cast<std::size_t>(n) - padding);
    return out;
}

std::string encode_base64(std::span<const unsigned char> bytes) {
    std::string out((bytes.size() + 2) / 3 * 4 + 1, '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::string sha256_hex(std::span<const unsigned char> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::vector<ImageRef> resolve_image_refs(const GroupInput& in) {
    const auto& binary = in.graph.rules().image_datatypes;
    std::vector<ImageRef> refs;
    refs.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Term& value = in.value(i);
        ImageRef ref;
        ref.statement = i;
        if (value.is_literal() && binary.contains(value.datatype)) {
            auto bytes = decode_base64(value.value);
            if (bytes && !bytes->empty()) {
                ref.kind = PayloadKind::Embedded;
                ref.sha256 = sha256_hex(*bytes);
                ref.bytes = std::move(*bytes);
            } else {
                ref.kind = PayloadKind::Malformed;
            }
        } else {
            ref.kind = value.value.empty() ? PayloadKind::Malformed : PayloadKind::Iri;
            ref.iri = value.value;
        }
        refs.push_back(std::move(ref));
    }
    return refs;
}

void LabelDistribution::normalize() {
    if (labels.empty()) throw std::invalid_argument("label distribution is empty");
    for (const auto& l : labels) {
        if (l.name.empty()) throw std::invalid_argument("empty label name");
        if (!(l.score >= 0.0 && l.score <= 1.0))
            throw std::invalid_argument("label score out of [0, 1] for \"" + l.name + "\"");
    }
    std::stable_sort(labels.begin(), labels.end(), [](const Label& a, const Label& b) {
        return a.score > b.score || (a.score == b.score && a.name < b.name);
    });
}

const std::string& top_label(const LabelDistribution& distribution) {
    const Label* best = &distribution.labels.at(0);
    for (const auto& l : distribution.labels)
        if (l.score > best->score || (l.score == best->score && l.name < best->name)) best = &l;
    return best->name;
}

std::vector<std::optional<LabelDistribution>> TagProvider::lookup_all(std::span<const ImageRef> refs) const {
    std::vector<std::optional<LabelDistribution>> out;
    out.reserve(refs.size());
    for (const auto& r : refs) out.push_back(lookup(r));
    return out;
}

namespace {

LabelDistribution parse_labels(const nlohmann::json& labels, const std::string& provider) {
    if (!labels.is_array()) throw std::invalid_argument("labels must be an array");
    LabelDistribution d;
    d.provider = provider;
    for (const auto& l : labels) {
        if (!l.is_object() || !l.contains("name") || !l.contains("score"))
            throw std::invalid_argument("label entries need \"name\" and \"score\"");
        d.labels.push_back({l.at("name").get<std::string>(), l.at("score").get<double>()});
    }
    d.normalize();
    return d;
}

}  // namespace

TagMapProvider::TagMapProvider(const nlohmann::json& map, std::string id) : id_(std::move(id)) {
    if (!map.is_object()) throw ConfigError("tag map must be a JSON object");
    std::set<std::string> names;
    for (const auto& [key, value] : map.items()) {
        try {
            auto d = parse_labels(value, id_);
            for (const auto& l : d.labels) names.insert(l.name);
            entries_.emplace(key, std::move(d));
        } catch (const std::exception& e) {
            throw ConfigError("tag map entry \"" + key + "\": " + e.what());
        }
    }
    vocabulary_ = names.size();
}

TagMapProvider TagMapProvider::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tag map " + path.string());
    nlohmann::json map;
    try {
        in >> map;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("tag map " + path.string() + ": " + e.what());
    }
    return TagMapProvider(map, "tag-map:" + path.filename().string());
}

std::optional<LabelDistribution> TagMapProvider::lookup(const ImageRef& ref) const {
    if (ref.kind == PayloadKind::Malformed) return std::nullopt;
    auto it = entries_.find(ref.key());
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

RemoteTagProvider::RemoteTagProvider(RemoteProviderSettings settings) : settings_(std::move(settings)) {
    const std::string& url = settings_.url;
    if (!url.starts_with("http://")) throw ConfigError("remote tag provider needs an http:// url, got \"" + url + "\"");
    auto slash = url.find('/', 7);
    origin_ = slash == std::string::npos ? url : url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url.substr(slash);
    if (origin_.size() <= 7) throw ConfigError("remote tag provider url has no host");
    if (settings_.max_in_flight == 0) settings_.max_in_flight = 1;
}

std::optional<LabelDistribution> RemoteTagProvider::lookup(const ImageRef& ref) const {
    if (ref.kind == PayloadKind::Malformed) return std::nullopt;
    nlohmann::json body;
    if (ref.kind == PayloadKind::Iri) {
        body["iri"] = ref.iri;
    } else {
        body["content_base64"] = encode_base64(ref.bytes);
        body["sha256"] = ref.sha256;
    }
    const std::string payload = body.dump();

    httplib::Client client(origin_);
    auto seconds = settings_.timeout.count() / 1000;
    auto micros = (settings_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    std::string last_error;
    auto delay = settings_.backoff;
    for (unsigned attempt = 0; attempt <= settings_.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
        auto res = client.Post(path_, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 404) return std::nullopt;
        if (res->status >= 500 || res->status == 429) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) throw StrategyError(id() + ": HTTP " + std::to_string(res->status));
        try {
            auto reply = nlohmann::json::parse(res->body);
            return parse_labels(reply.at("labels"), id());
        } catch (const std::exception& e) {
            throw StrategyError(id() + ": malformed response: " + e.what());
        }
    }
    throw StrategyError(id() + ": unreachable after " + std::to_string(settings_.retries) +
                        " retries: " + last_error);
}

std::vector<std::optional<LabelDistribution>> RemoteTagProvider::lookup_all(std::span<const ImageRef> refs) const {
    std::vector<std::optional<LabelDistribution>> out(refs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        for (std::size_t i = next++; i < refs.size() && !failed; i = next++) {
            try {
                out[i] = lookup(refs[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::size_t workers = std::min(settings_.max_in_flight, refs.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (error) std::rethrow_exception(error);
    return out;
}

Augmentation emit_image_triples(const GroupInput& in, const TagProvider& provider, const ImageTagSettings& settings) {
    if (settings.top_k == 0) throw ConfigError("image: top_k must be >= 1");
    Augmentation out;
    const Term predicate = in.predicate();
    auto refs = resolve_image_refs(in);
    auto results = provider.lookup_all(refs);

    std::size_t misses = 0, malformed = 0;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const Term& subject = in.subject(refs[i].statement);
        const auto& result = results[i];
        if (!result) {
            out.link({subject, predicate, any_value_entity(in)});
            ++out.fallback_statements;
            ++(refs[i].kind == PayloadKind::Malformed ? malformed : misses);
            continue;
        }
        if (settings.top_k == 1) {
            const std::string& name = top_label(*result);
            double score = 0.0;
            for (const auto& l : result->labels)
                if (l.name == name) score = l.score;
            out.link({subject, predicate, in.minter.entity(settings.prefix + sanitize_value(name))}, score);
            continue;
        }
        std::size_t k = std::min(settings.top_k, result->labels.size());
        for (std::size_t j = 0; j < k; ++j) {
            const Label& l = result->labels[j];
            out.link({subject, predicate, in.minter.entity(settings.prefix + sanitize_value(l.name))}, l.score);
        }
    }
    if (misses > 0)
        out.warnings.push_back(in.predicate_iri() + ": " + std::to_string(misses) +
                               " image(s) unknown to " + provider.id() + ", linked with ONEENTITY");
    if (malformed > 0)
        out.warnings.push_back(in.predicate_iri() + ": " + std::to_string(malformed) +
                               " malformed image payload(s), linked with ONEENTITY");
    out.details = {{"provider", provider.id()},
                   {"vocabulary", provider.vocabulary_size()},
                   {"top_k", settings.top_k},
                   {"misses", misses},
                   {"malformed", malformed}};
    return out;
}

}  // namespace lforge

#include "literal_forge/config.hpp"

#include "literal_forge/error.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace lforge {

namespace {

struct StrategyName {
    StrategyKind kind;
    std::string_view name;
};

constexpr StrategyName kNames[] = {
    {StrategyKind::Exclude, "EXCLUDE"},   {StrategyKind::Transform, "TRANSFORM"},
    {StrategyKind::OneEntity, "ONEENTITY"}, {StrategyKind::NBins, "nBINS"},
    {StrategyKind::PercentBins, "p%BINS"}, {StrategyKind::KlRel, "KL-REL"},
    {StrategyKind::KlRelEnt, "KL-RELENT"}, {StrategyKind::Datbin, "DATBIN"},
    {StrategyKind::Datfeat, "DATFEAT"},   {StrategyKind::Lda, "LDA"},
    {StrategyKind::Image, "IMAGE"},
};

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
    return out;
}

bool uses_binning(StrategyKind k) {
    return k == StrategyKind::NBins || k == StrategyKind::PercentBins || k == StrategyKind::KlRel ||
           k == StrategyKind::KlRelEnt || k == StrategyKind::Datbin;
}

bool is_combined(std::string_view name) { return upper(name) == "COMBINED"; }

template <class T>
T get_param(const nlohmann::json& value, std::string_view key) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("parameter \"" + std::string(key) + "\" has the wrong type");
    }
}

std::size_t get_count(const nlohmann::json& value, std::string_view key) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
        throw ConfigError("parameter \"" + std::string(key) + "\" must be a non-negative integer");
    return value.get<std::size_t>();
}

void parse_lof(const nlohmann::json& value, LofSettings& lof) {
    if (value.is_boolean()) {
        lof.enabled = value.get<bool>();
        return;
    }
    if (!value.is_object()) throw ConfigError("\"lof\" must be a boolean or an object");
    lof.enabled = true;
    for (const auto& [key, v] : value.items()) {
        if (key == "enabled") lof.enabled = get_param<bool>(v, key);
        else if (key == "k") lof.k = get_count(v, key);
        else if (key == "threshold") lof.threshold = get_param<double>(v, key);
        else throw ConfigError("unknown lof parameter \"" + key + "\"");
    }
}

void parse_params(const nlohmann::json& params, StrategyChoice& c) {
    if (!params.is_object()) throw ConfigError("\"params\" must be an object");
    const StrategyKind k = c.kind;
    for (const auto& [key, v] : params.items()) {
        bool known = true;
        if (uses_binning(k) && key == "n") c.binning.n = get_count(v, key);
        else if (uses_binning(k) && key == "percent") c.binning.percent = get_param<double>(v, key);
        else if (uses_binning(k) && key == "overlap") c.binning.overlap = get_param<double>(v, key);
        else if (uses_binning(k) && key == "hierarchy_depth") c.binning.hierarchy_depth = get_count(v, key);
        else if (uses_binning(k) && key == "connect_adjacent") c.binning.connect_adjacent = get_param<bool>(v, key);
        else if (uses_binning(k) && key == "scheme") {
            auto s = get_param<std::string>(v, key);
            if (s == "equal_width") c.binning.scheme = BinScheme::EqualWidth;
            else if (s == "equal_frequency") c.binning.scheme = BinScheme::EqualFrequency;
            else throw ConfigError("unknown binning scheme \"" + s + "\"");
        } else if (uses_binning(k) && key == "lof") parse_lof(v, c.lof);
        else if ((k == StrategyKind::KlRel || k == StrategyKind::KlRelEnt) && key == "split_threshold")
            c.split.threshold = get_count(v, key);
        else if ((k == StrategyKind::KlRel || k == StrategyKind::KlRelEnt) && key == "min_divergence")
            c.split.min_divergence = get_param<double>(v, key);
        else if (k == StrategyKind::Datfeat && key == "calendar_links") c.datfeat.calendar_links = get_param<bool>(v, key);
        else if (k == StrategyKind::Datfeat && key == "year_chain") c.datfeat.year_chain = get_param<bool>(v, key);
        else if (k == StrategyKind::Lda && key == "topics") c.lda.topics = get_count(v, key);
        else if (k == StrategyKind::Lda && key == "alpha") c.lda.alpha = get_param<double>(v, key);
        else if (k == StrategyKind::Lda && key == "beta") c.lda.beta = get_param<double>(v, key);
        else if (k == StrategyKind::Lda && key == "iterations") c.lda.iterations = get_count(v, key);
        else if (k == StrategyKind::Lda && key == "threshold") c.lda.threshold = get_param<double>(v, key);
        else if (k == StrategyKind::Lda && key == "top_words") c.lda.top_words = get_count(v, key);
        else if (k == StrategyKind::Lda && key == "min_token_length") c.tokenizer.min_length = get_count(v, key);
        else if (k == StrategyKind::Lda && key == "stopwords") {
            if (!v.is_object()) throw ConfigError("\"stopwords\" must map language tags to word lists");
            for (const auto& [lang, words] : v.items())
                for (const auto& w : get_param<std::vector<std::string>>(words, key))
                    c.tokenizer.stopwords[lang].insert(w);
        } else if (k == StrategyKind::Image && key == "prefix") c.image.prefix = get_param<std::string>(v, key);
        else if (k == StrategyKind::Image && key == "top_k") c.image.top_k = get_count(v, key);
        else known = false;
        if (!known)
            throw ConfigError("parameter \"" + key + "\" does not apply to " + std::string(to_string(k)));
    }
}

StrategyChoice parse_choice(const nlohmann::json& value, std::optional<Modality> modality) {
    std::string name;
    const nlohmann::json* params = nullptr;
    if (value.is_string()) {
        name = value.get<std::string>();
    } else if (value.is_object()) {
        for (const auto& [key, v] : value.items()) {
            if (key == "strategy") name = get_param<std::string>(v, key);
            else if (key == "params") params = &v;
            else throw ConfigError("unknown key \"" + key + "\" in strategy entry");
        }
        if (name.empty()) throw ConfigError("strategy entry without \"strategy\"");
    } else {
        throw ConfigError("strategy entry must be a name or an object");
    }

    StrategyChoice choice;
    if (is_combined(name)) {
        if (!modality) throw ConfigError("COMBINED needs a modality; use it in \"defaults\" or as \"strategy\"");
        choice = combined_defaults().at(*modality);
    } else {
        bool lof = false;
        std::string base = name;
        if (upper(base).ends_with("+LOF")) {
            base.resize(base.size() - 4);
            lof = true;
        }
        auto kind = strategy_from_string(base);
        if (!kind) throw ConfigError("unknown strategy \"" + name + "\"");
        if (lof && !uses_binning(*kind)) throw ConfigError("LOF does not apply to " + std::string(to_string(*kind)));
        choice = StrategyChoice::of(*kind);
        if (lof) choice.lof.enabled = true;
    }
    if (params) parse_params(*params, choice);
    return choice;
}

std::uint64_t parse_seed(const nlohmann::json& v) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    throw ConfigError("\"seed\" must be a non-negative integer");
}

Modality parse_modality(const std::string& name) {
    auto m = modality_from_string(name);
    if (!m) throw ConfigError("unknown modality \"" + name + "\"");
    return *m;
}

void parse_rules(const nlohmann::json& doc, ModalityRules& rules) {
    if (!doc.is_object()) throw ConfigError("\"modality_rules\" must be an object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "image_predicates") {
            for (auto& p : get_param<std::vector<std::string>>(v, key)) rules.image_predicates.insert(p);
        } else if (key == "image_datatypes") {
            rules.image_datatypes.clear();
            for (auto& d : get_param<std::vector<std::string>>(v, key)) rules.image_datatypes.insert(d);
        } else if (key == "predicate_modalities") {
            if (!v.is_object()) throw ConfigError("\"predicate_modalities\" must be an object");
            for (const auto& [pred, m] : v.items())
                rules.predicate_modalities[pred] = parse_modality(get_param<std::string>(m, pred));
        } else {
            throw ConfigError("unknown key \"" + key + "\" in modality_rules");
        }
    }
}

void parse_provider(const nlohmann::json& doc, ImageProviderConfig& cfg, const std::filesystem::path& base_dir) {
    if (doc.is_null()) {
        cfg.kind = ImageProviderConfig::Kind::None;
        return;
    }
    if (!doc.is_object()) throw ConfigError("\"image_provider\" must be an object");
    std::string type = doc.contains("type") ? get_param<std::string>(doc.at("type"), "type") : "";
    if (type == "tag_map") {
        cfg.kind = ImageProviderConfig::Kind::TagMap;
        for (const auto& [key, v] : doc.items()) {
            if (key == "type") continue;
            if (key != "path") throw ConfigError("unknown key \"" + key + "\" in tag_map provider");
            std::filesystem::path p = get_param<std::string>(v, key);
            cfg.tag_map = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        }
        if (cfg.tag_map.empty()) throw ConfigError("tag_map provider needs \"path\"");
    } else if (type == "remote") {
        cfg.kind = ImageProviderConfig::Kind::Remote;
        auto& r = cfg.remote;
        for (const auto& [key, v] : doc.items()) {
            if (key == "type") continue;
            if (key == "url") r.url = get_param<std::string>(v, key);
            else if (key == "timeout_ms") r.timeout = std::chrono::milliseconds(get_count(v, key));
            else if (key == "retries") r.retries = static_cast<unsigned>(get_count(v, key));
            else if (key == "backoff_ms") r.backoff = std::chrono::milliseconds(get_count(v, key));
            else if (key == "max_in_flight") r.max_in_flight = get_count(v, key);
            else if (key == "vocabulary") r.vocabulary = get_count(v, key);
            else throw ConfigError("unknown key \"" + key + "\" in remote provider");
        }
        if (r.url.empty()) throw ConfigError("remote provider needs \"url\"");
    } else if (type == "none") {
        cfg.kind = ImageProviderConfig::Kind::None;
    } else {
        throw ConfigError("image_provider.type must be tag_map, remote or none");
    }
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
    for (const auto& n : kNames)
        if (n.kind == kind) return n.name;
    return "?";
}

std::optional<StrategyKind> strategy_from_string(std::string_view name) {
    std::string u = upper(name);
    if (u == "TXTLDA") return StrategyKind::Lda;
    if (u == "VGG16") return StrategyKind::Image;
    if (u == "PBINS" || u == "P%BINS") return StrategyKind::PercentBins;
    if (u == "NBINS") return StrategyKind::NBins;
    for (const auto& n : kNames)
        if (upper(n.name) == u) return n.kind;
    return std::nullopt;
}

bool compatible(StrategyKind kind, Modality m) {
    switch (kind) {
        case StrategyKind::Exclude:
        case StrategyKind::Transform:
        case StrategyKind::OneEntity: return true;
        case StrategyKind::NBins:
        case StrategyKind::PercentBins:
        case StrategyKind::KlRel:
        case StrategyKind::KlRelEnt: return m == Modality::Numeric;
        case StrategyKind::Datbin:
        case StrategyKind::Datfeat: return m == Modality::Temporal;
        case StrategyKind::Lda: return m == Modality::Text;
        case StrategyKind::Image: return m == Modality::Image;
    }
    return false;
}

StrategyChoice StrategyChoice::of(StrategyKind kind) {
    StrategyChoice c;
    c.kind = kind;
    if (kind == StrategyKind::PercentBins) c.binning.mode = BinMode::Percent;
    if (kind == StrategyKind::KlRelEnt) c.split.mode = SignatureMode::RelEnt;
    return c;
}

std::string StrategyChoice::label() const {
    std::string out(to_string(kind));
    if (uses_binning(kind) && lof.enabled) out += "+LOF";
    return out;
}

std::string_view to_string(FallbackPolicy policy) {
    switch (policy) {
        case FallbackPolicy::OneEntity: return "ONEENTITY";
        case FallbackPolicy::Exclude: return "EXCLUDE";
        case FallbackPolicy::None: return "none";
    }
    return "?";
}

const StrategyChoice& StrategyConfig::resolve(const std::string& predicate, Modality modality) const {
    if (auto it = overrides.find(predicate); it != overrides.end() && compatible(it->second.kind, modality))
        return it->second;
    auto it = defaults.find(modality);
    if (it == defaults.end()) throw ConfigError("no strategy for modality " + std::string(to_string(modality)));
    return it->second;
}

void StrategyConfig::validate() const {
    if (ns.empty()) throw ConfigError("namespace must not be empty");
    if (ns.find_first_of("<>\" {}|\\^`") != std::string::npos)
        throw ConfigError("namespace \"" + ns + "\" is not a valid IRI prefix");
    if (ns.find(':') == std::string::npos) throw ConfigError("namespace \"" + ns + "\" is not absolute");
    auto check = [](const StrategyChoice& c, const std::string& where) {
        try {
            if (uses_binning(c.kind)) c.binning.validate();
            if (c.lof.enabled && c.lof.k == 0) throw ConfigError("lof k must be >= 1");
            if (c.lof.enabled && !(c.lof.threshold > 0.0)) throw ConfigError("lof threshold must be > 0");
            if (c.kind == StrategyKind::KlRel || c.kind == StrategyKind::KlRelEnt) {
                if (c.split.threshold < 2) throw ConfigError("split_threshold must be >= 2");
                if (!(c.split.min_divergence >= 0.0)) throw ConfigError("min_divergence must be >= 0");
            }
            if (c.kind == StrategyKind::Lda) {
                c.lda.validate();
                if (c.tokenizer.min_length == 0) throw ConfigError("min_token_length must be >= 1");
            }
            if (c.kind == StrategyKind::Image && c.image.top_k == 0) throw ConfigError("top_k must be >= 1");
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    };
    for (Modality m : kAllModalities) {
        auto it = defaults.find(m);
        if (it == defaults.end()) throw ConfigError("no default strategy for " + std::string(to_string(m)));
        if (!compatible(it->second.kind, m))
            throw ConfigError(std::string(to_string(it->second.kind)) + " cannot handle " +
                              std::string(to_string(m)) + " literals");
        check(it->second, std::string(to_string(m)));
    }
    for (const auto& [pred, c] : overrides) {
        bool any = std::any_of(std::begin(kAllModalities), std::end(kAllModalities),
                               [&](Modality m) { return compatible(c.kind, m); });
        if (!any) throw ConfigError(pred + ": strategy fits no modality");
        check(c, pred);
    }
    if (image_provider.kind == ImageProviderConfig::Kind::Remote && image_provider.remote.url.empty())
        throw ConfigError("remote image provider without url");
}

std::map<Modality, StrategyChoice> combined_defaults() {
    std::map<Modality, StrategyChoice> out;
    auto numeric = StrategyChoice::of(StrategyKind::KlRel);
    numeric.lof.enabled = true;
    out[Modality::Numeric] = numeric;
    out[Modality::Temporal] = StrategyChoice::of(StrategyKind::Datbin);
    out[Modality::Text] = StrategyChoice::of(StrategyKind::Lda);
    out[Modality::Image] = StrategyChoice::of(StrategyKind::Image);
    out[Modality::Other] = StrategyChoice::of(StrategyKind::Transform);
    return out;
}

std::map<Modality, StrategyKind> compose_combined(const StrategyConfig& config) {
    std::map<Modality, StrategyKind> out;
    for (Modality m : kAllModalities) {
        auto it = config.defaults.find(m);
        out[m] = it != config.defaults.end() ? it->second.kind : combined_defaults().at(m).kind;
    }
    return out;
}

StrategyConfig default_config() {
    StrategyConfig c;
    c.defaults = combined_defaults();
    return c;
}

void apply_strategy_shortcut(StrategyConfig& config, StrategyKind kind) {
    for (Modality m : kAllModalities)
        if (compatible(kind, m)) config.defaults[m] = StrategyChoice::of(kind);
}

void apply_strategy_shortcut(StrategyConfig& config, std::string_view name) {
    if (is_combined(name)) {
        config.defaults = combined_defaults();
        return;
    }
    for (Modality m : kAllModalities) {
        StrategyChoice c;
        try {
            c = parse_choice(std::string(name), m);
        } catch (const ConfigError&) {
            throw ConfigError("unknown strategy \"" + std::string(name) + "\"");
        }
        if (compatible(c.kind, m)) config.defaults[m] = c;
    }
}

StrategyConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    StrategyConfig cfg = default_config();
    if (auto it = doc.find("strategy"); it != doc.end())
        apply_strategy_shortcut(cfg, get_param<std::string>(*it, "strategy"));

    for (const auto& [key, v] : doc.items()) {
        if (key == "strategy") continue;
        if (key == "namespace") cfg.ns = get_param<std::string>(v, key);
        else if (key == "seed") cfg.seed = parse_seed(v);
        else if (key == "emit_weights") cfg.emit_weights = get_param<bool>(v, key);
        else if (key == "fallback") {
            auto f = upper(get_param<std::string>(v, key));
            if (f == "ONEENTITY") cfg.fallback = FallbackPolicy::OneEntity;
            else if (f == "EXCLUDE") cfg.fallback = FallbackPolicy::Exclude;
            else if (f == "NONE") cfg.fallback = FallbackPolicy::None;
            else throw ConfigError("fallback must be ONEENTITY, EXCLUDE or none");
        } else if (key == "defaults") {
            if (!v.is_object()) throw ConfigError("\"defaults\" must be an object");
            for (const auto& [m, choice] : v.items()) {
                Modality modality = parse_modality(m);
                cfg.defaults[modality] = parse_choice(choice, modality);
            }
        } else if (key == "overrides") {
            if (!v.is_object()) throw ConfigError("\"overrides\" must be an object");
            for (const auto& [pred, choice] : v.items()) cfg.overrides[pred] = parse_choice(choice, std::nullopt);
        } else if (key == "modality_rules") parse_rules(v, cfg.rules);
        else if (key == "image_provider") parse_provider(v, cfg.image_provider, base_dir);
        else throw ConfigError("unknown config key \"" + key + "\"");
    }
    cfg.validate();
    return cfg;
}

StrategyConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

nlohmann::json to_json(const StrategyChoice& c) {
    nlohmann::json j = {{"strategy", c.label()}};
    nlohmann::json p = nlohmann::json::object();
    if (uses_binning(c.kind)) {
        if (c.binning.mode == BinMode::FixedCount) p["n"] = c.binning.n;
        else p["percent"] = c.binning.percent;
        p["overlap"] = c.binning.overlap;
        p["hierarchy_depth"] = c.binning.hierarchy_depth;
        p["connect_adjacent"] = c.binning.connect_adjacent;
        p["scheme"] = c.binning.scheme == BinScheme::EqualWidth ? "equal_width" : "equal_frequency";
        if (c.lof.enabled) p["lof"] = {{"k", c.lof.k}, {"threshold", c.lof.threshold}};
    }
    if (c.kind == StrategyKind::KlRel || c.kind == StrategyKind::KlRelEnt) {
        p["split_threshold"] = c.split.threshold;
        p["min_divergence"] = c.split.min_divergence;
    }
    if (c.kind == StrategyKind::Datfeat) {
        p["calendar_links"] = c.datfeat.calendar_links;
        p["year_chain"] = c.datfeat.year_chain;
    }
    if (c.kind == StrategyKind::Lda) {
        p["topics"] = c.lda.topics;
        p["alpha"] = c.lda.effective_alpha();
        p["beta"] = c.lda.beta;
        p["iterations"] = c.lda.iterations;
        p["threshold"] = c.lda.threshold;
    }
    if (c.kind == StrategyKind::Image) {
        p["prefix"] = c.image.prefix;
        p["top_k"] = c.image.top_k;
    }
    if (!p.empty()) j["params"] = std::move(p);
    return j;
}

}  // namespace lforge

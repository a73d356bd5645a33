#pragma once
// Strategy configuration: per-modality defaults, per-predicate overrides,
// strategy parameters and the JSON config file.

#include "literal_forge/binning.hpp"
#include "literal_forge/graph.hpp"
#include "literal_forge/image_tags.hpp"
#include "literal_forge/lof.hpp"
#include "literal_forge/subpopulation.hpp"
#include "literal_forge/temporal.hpp"
#include "literal_forge/text_lda.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace lforge {

enum class StrategyKind {
    Exclude,
    Transform,
    OneEntity,
    NBins,
    PercentBins,
    KlRel,
    KlRelEnt,
    Datbin,
    Datfeat,
    Lda,
    Image,
};

std::string_view to_string(StrategyKind kind);
/// Case-insensitive; accepts TXTLDA for LDA and VGG16 for IMAGE.
std::optional<StrategyKind> strategy_from_string(std::string_view name);
bool compatible(StrategyKind kind, Modality modality);

/// A strategy with every parameter it may use. Parameters that do not apply
/// to `kind` are ignored.
struct StrategyChoice {
    StrategyKind kind = StrategyKind::Transform;
    BinningSpec binning;
    LofSettings lof;
    SplitSettings split;
    DatfeatSettings datfeat;
    LdaSettings lda;
    TokenizerSettings tokenizer;
    ImageTagSettings image;

    static StrategyChoice of(StrategyKind kind);
    /// Human-readable name, "KL-REL+LOF" style when LOF is on.
    std::string label() const;
};

enum class FallbackPolicy { OneEntity, Exclude, None };

std::string_view to_string(FallbackPolicy policy);

struct ImageProviderConfig {
    enum class Kind { None, TagMap, Remote };
    Kind kind = Kind::None;
    std::filesystem::path tag_map;
    RemoteProviderSettings remote;
};

struct StrategyConfig {
    std::string ns = "http://example.org/new#";
    std::uint64_t seed = 42;
    std::map<Modality, StrategyChoice> defaults;
    std::map<std::string, StrategyChoice> overrides;  // predicate IRI
    ModalityRules rules;
    ImageProviderConfig image_provider;
    bool emit_weights = false;
    FallbackPolicy fallback = FallbackPolicy::OneEntity;

    /// Override for the predicate when present, else the modality default.
    const StrategyChoice& resolve(const std::string& predicate, Modality modality) const;

    /// Throws ConfigError: empty namespace, missing modality default,
    /// strategy incompatible with its modality, bad parameters.
    void validate() const;
};

/// Numeric -> KL-REL with LOF, Temporal -> DATBIN, Text -> LDA,
/// Image -> provider tagging, Other -> TRANSFORM.
std::map<Modality, StrategyChoice> combined_defaults();

/// The per-modality strategy map after defaults are applied.
std::map<Modality, StrategyKind> compose_combined(const StrategyConfig& config);

/// Config with COMBINED defaults.
StrategyConfig default_config();

/// Sets `kind` as the default of every modality it is compatible with.
/// "COMBINED" is handled by the caller via combined_defaults().
void apply_strategy_shortcut(StrategyConfig& config, StrategyKind kind);

/// Applies a strategy name given on the command line or in the config.
void apply_strategy_shortcut(StrategyConfig& config, std::string_view name);

/// Parses a config document. Relative tag-map paths resolve against
/// `base_dir`. Unknown keys are errors.
StrategyConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
StrategyConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const StrategyChoice& choice);

}  // namespace lforge

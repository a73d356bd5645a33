// literal-forge: profile, transform and verify N-Triples graphs with literals.
//
// Exit codes: 0 success, 1 input or parse error, 2 config error,
// 3 strategy failure without fallback, 4 verification failure.

#include "literal_forge/config.hpp"
#include "literal_forge/error.hpp"
#include "literal_forge/graph.hpp"
#include "literal_forge/pipeline.hpp"
#include "literal_forge/rdf_io.hpp"
#include "literal_forge/verify.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace lforge;

namespace {

enum Exit { kOk = 0, kInput = 1, kConfig = 2, kStrategy = 3, kVerify = 4 };

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("literal-forge");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("LITERAL_FORGE_LOG")) {
        auto level = spdlog::level::from_str(env);
        if (level == spdlog::level::off && std::string(env) != "off")
            spdlog::warn("unknown LITERAL_FORGE_LOG level \"{}\"", env);
        else
            spdlog::set_level(level);
    }
}

void report_diagnostics(const std::vector<ParseDiagnostic>& diagnostics) {
    for (const auto& d : diagnostics) spdlog::warn("line {}: {} (skipped)", d.line, d.message);
    if (!diagnostics.empty()) spdlog::warn("{} malformed line(s) skipped", diagnostics.size());
}

// Writes through a temporary file so a failed run leaves no partial output.
void write_file(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

fs::path with_suffix(const fs::path& p, std::string_view suffix) {
    fs::path out = p;
    out += suffix;
    return out;
}

struct Options {
    std::string input, output, config, strategy, report;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 0;
    bool strict = false, human = false, emit_weights = false;
};

int cmd_profile(const Options& opt) {
    ModalityRules rules;
    if (!opt.config.empty()) rules = load_config(opt.config).rules;
    GraphProfiler profiler(rules);
    auto diagnostics = read_ntriples_file(opt.input, opt.strict ? ParseMode::Strict : ParseMode::Lenient,
                                          [&](Triple&& t) { profiler.add(t); });
    report_diagnostics(diagnostics);
    GraphProfile p = profiler.result();
    if (opt.human)
        std::cout << render_table(p);
    else
        std::cout << to_json(p).dump(2) << '\n';
    return kOk;
}

int cmd_transform(const Options& opt) {
    StrategyConfig config = opt.config.empty() ? default_config() : load_config(opt.config);
    if (!opt.strategy.empty()) apply_strategy_shortcut(config, opt.strategy);
    if (opt.seed) config.seed = *opt.seed;
    if (opt.emit_weights) config.emit_weights = true;
    config.validate();

    auto parsed = read_ntriples_file(opt.input, opt.strict ? ParseMode::Strict : ParseMode::Lenient);
    report_diagnostics(parsed.diagnostics);
    IndexedGraph graph = build_index(parsed.triples, config.rules);
    parsed.triples.clear();
    parsed.triples.shrink_to_fit();
    if (graph.duplicates() > 0) spdlog::info("{} duplicate statement(s) collapsed", graph.duplicates());
    spdlog::info("{} relational edge(s), {} literal statement(s) in {} group(s)", graph.edges().size(),
                 graph.literal_statement_count(), graph.literal_groups().size());

    PipelineResult result = apply(graph, config, ApplyOptions{.workers = opt.workers});
    for (const auto& w : result.report.warnings) spdlog::warn("{}", w);

    const fs::path out = opt.output;
    const fs::path report = opt.report.empty() ? with_suffix(out, ".report.json") : fs::path(opt.report);
    std::string graph_text = serialize_ntriples(result.triples);
    write_file(out, graph_text);
    write_file(report, result.report.to_json().dump(2) + "\n");
    if (config.emit_weights) write_file(with_suffix(out, ".weights.tsv"), serialize_weights(result.weights));

    const auto& t = result.report.totals;
    spdlog::info("wrote {} triple(s): {} relational, {} minted, {} structural; {} removed", t.output_triples,
                 t.relational, t.minted_statements, t.structural, t.removed);
    return kOk;
}

int cmd_verify(const Options& opt) {
    const fs::path out = opt.output;
    const fs::path report_path = opt.report.empty() ? with_suffix(out, ".report.json") : fs::path(opt.report);
    std::ifstream in(report_path);
    if (!in) throw IoError("cannot open report " + report_path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("report " + report_path.string() + ": " + e.what());
    }
    AugmentationReport report;
    try {
        report = AugmentationReport::from_json(doc);
    } catch (const ConfigError& e) {
        throw IoError(e.what());
    }
    auto parsed = read_ntriples_file(out, ParseMode::Strict);
    VerifyResult result = verify_output(parsed.triples, report);
    if (result.ok()) {
        spdlog::info("verified {} triple(s): {} relational, {} minted, {} structural", parsed.triples.size(),
                     result.relational, result.minted_statements, result.structural);
        std::cout << "PASS\n";
        return kOk;
    }
    for (const auto& p : result.problems) spdlog::error("{}", p);
    std::cout << "FAIL";
    for (const auto& p : result.offending_predicates) std::cout << ' ' << p;
    std::cout << '\n';
    return kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Rewrite RDF graphs with literals into purely relational graphs"};
    app.require_subcommand(1);
    Options opt;

    auto* profile = app.add_subcommand("profile", "Count relations, nodes, triples and literals");
    profile->add_option("-i,--input,input", opt.input, "N-Triples file (.gz accepted)")->required();
    profile->add_option("-c,--config", opt.config, "Config file (only modality rules are used)");
    profile->add_flag("--strict", opt.strict, "Fail on the first malformed line");
    profile->add_flag("--human", opt.human, "Aligned table instead of JSON");

    auto* transform = app.add_subcommand("transform", "Replace literal statements with minted entities");
    transform->add_option("-i,--input", opt.input, "N-Triples file (.gz accepted)")->required();
    transform->add_option("-o,--output", opt.output, "Output N-Triples file")->required();
    transform->add_option("-c,--config", opt.config, "JSON config file");
    transform->add_option("-s,--strategy", opt.strategy, "Strategy for every modality it fits, or COMBINED");
    transform->add_option("--seed", opt.seed, "Random seed");
    transform->add_option("-j,--workers", opt.workers, "Worker threads (default: all cores)");
    transform->add_option("--report", opt.report, "Report path (default: <output>.report.json)");
    transform->add_flag("--strict", opt.strict, "Fail on the first malformed line");
    transform->add_flag("--emit-weights", opt.emit_weights, "Write <output>.weights.tsv");

    auto* verify = app.add_subcommand("verify", "Recompute deltas from an output graph and check its report");
    verify->add_option("-o,--output,output", opt.output, "Output graph of a transform run")->required();
    verify->add_option("--report", opt.report, "Report path (default: <output>.report.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*profile) return cmd_profile(opt);
        if (*transform) return cmd_transform(opt);
        if (*verify) return cmd_verify(opt);
    } catch (const ParseError& e) {
        spdlog::error("{}", e.what());
        return kInput;
    } catch (const IoError& e) {
        spdlog::error("{}", e.what());
        return kInput;
    } catch (const ConfigError& e) {
        spdlog::error("config: {}", e.what());
        return kConfig;
    } catch (const StrategyError& e) {
        spdlog::error("strategy: {}", e.what());
        return kStrategy;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kStrategy;
    }
    return kOk;
}

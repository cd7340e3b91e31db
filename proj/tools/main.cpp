#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "convoscope/pipeline.hpp"
#include "convoscope/synth.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 ok, 2 parse/config, 3 validation, 4 nothing left after
// filtering, 1 anything else.
int exit_code_for(convoscope::ErrorKind kind) {
    using convoscope::ErrorKind;
    switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidConfig:
    case ErrorKind::IoError:
        return 2;
    case ErrorKind::DuplicatePostId:
    case ErrorKind::DuplicateAuthor:
    case ErrorKind::NoRoot:
    case ErrorKind::CycleDetected:
    case ErrorKind::UnknownPost:
    case ErrorKind::UnknownConversation:
    case ErrorKind::AuthorNotInConversation:
    case ErrorKind::EmptyInput:
    case ErrorKind::InvalidAlpha:
    case ErrorKind::NoConvergence:
        return 3;
    case ErrorKind::NoConversations:
        return 4;
    }
    return 1;
}

struct VisionFlags {
    double decay_reply = 0.5;
    double decay_root = 0.25;
    std::string union_rule = "independent";
    std::string zeta_aggregation = "mean";

    void add_to(CLI::App& cmd) {
        cmd.add_option("--decay-reply", decay_reply, "Reply-path decay base (0, 1]")
            ->capture_default_str();
        cmd.add_option("--decay-root", decay_root, "Root-distance decay base (0, 1]")
            ->capture_default_str();
        cmd.add_option("--union-rule", union_rule, "How zeta and theta combine")
            ->check(CLI::IsMember({"independent", "max"}))
            ->capture_default_str();
        cmd.add_option("--zeta-aggregation", zeta_aggregation, "Evidence aggregation for zeta")
            ->check(CLI::IsMember({"mean", "capped-sum"}))
            ->capture_default_str();
    }

    convoscope::DecayConfig to_config() const {
        convoscope::DecayConfig cfg;
        cfg.reply_base = decay_reply;
        cfg.root_base = decay_root;
        cfg.union_rule = union_rule == "max" ? convoscope::UnionRule::Max
                                             : convoscope::UnionRule::Independent;
        cfg.zeta_aggregation = zeta_aggregation == "capped-sum"
                                   ? convoscope::ZetaAggregation::CappedSum
                                   : convoscope::ZetaAggregation::Mean;
        return cfg;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"convoscope: reply-tree structure analytics for threaded corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // ---- analyze ----
    auto* analyze = app.add_subcommand("analyze", "Ingest a corpus and write report tables");
    std::string input, authors, keywords, out_dir;
    std::size_t min_posts = 6;
    bool lenient = false;
    bool strict = false;
    VisionFlags vision;
    double katz_alpha = 0;
    double katz_beta = 1.0;
    double katz_tol = 1e-10;
    std::string centrality = "all";
    std::string outliers = "zscore:3";
    std::string normalize = "group-means";
    std::string format = "csv";
    std::size_t workers = 0;

    analyze->add_option("--input", input, "Line-delimited post corpus (JSONL)")->required();
    analyze->add_option("--authors", authors, "Author registry CSV (author_id,group,language)");
    analyze->add_option("--keywords", keywords, "Keyword file, one per line, # comments");
    analyze->add_option("--min-posts", min_posts, "Keep conversations with at least this many posts")
        ->capture_default_str();
    analyze->add_flag("--strict", strict, "Reject malformed trees (default)");
    analyze->add_flag("--lenient", lenient, "Repair malformed trees and log the repairs");
    vision.add_to(*analyze);
    analyze->add_option("--katz-alpha", katz_alpha,
                        "Katz attenuation (default 0.9 / max out-degree)");
    analyze->add_option("--katz-beta", katz_beta, "Katz base score")->capture_default_str();
    analyze->add_option("--katz-tol", katz_tol, "Katz convergence tolerance")
        ->capture_default_str();
    analyze->add_option("--centrality", centrality, "Which centralities to compute")
        ->check(CLI::IsMember({"betweenness", "closeness", "katz", "all"}))
        ->capture_default_str();
    analyze->add_option("--outliers", outliers, "Outlier policy: none, zscore:K or top:N")
        ->capture_default_str();
    analyze->add_option("--normalize", normalize, "Min-max normalization mode")
        ->check(CLI::IsMember({"group-means", "per-conversation"}))
        ->capture_default_str();
    analyze->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"csv", "json-lines"}))
        ->capture_default_str();
    analyze->add_option("--out", out_dir, "Report output directory")->required();
    analyze->add_option("--workers", workers, "Worker threads (0 = hardware)")
        ->capture_default_str();

    // ---- inspect ----
    auto* inspect = app.add_subcommand("inspect", "Print one reply tree with vision scores");
    std::string inspect_input, conversation_id, focus_author;
    bool inspect_lenient = false;
    VisionFlags inspect_vision;
    inspect->add_option("--input", inspect_input, "Line-delimited post corpus (JSONL)")->required();
    inspect->add_option("--conversation", conversation_id, "Root post id")->required();
    inspect->add_option("--author", focus_author, "Focus author (default: root author)");
    inspect->add_flag("--lenient", inspect_lenient, "Repair malformed trees");
    inspect_vision.add_to(*inspect);

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus and registry");
    std::string synth_config, synth_preset = "three-styles", synth_out;
    std::uint64_t synth_seed = 0;
    bool seed_given = false;
    std::size_t synth_conversations = 0;
    synth->add_option("--config", synth_config, "Generator config (JSON)");
    synth->add_option("--preset", synth_preset, "Built-in preset")
        ->check(CLI::IsMember({"broadcast", "debate", "sharing", "three-styles"}))
        ->capture_default_str();
    auto* seed_opt = synth->add_option("--seed", synth_seed, "Override the config seed");
    synth->add_option("--conversations", synth_conversations,
                      "Override conversations per profile");
    synth->add_option("--out", synth_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            convoscope::RunConfig config;
            config.input = input;
            config.authors = authors;
            config.keywords = keywords;
            config.out_dir = out_dir;
            config.filter.min_posts = min_posts;
            config.orphan_policy = lenient && !strict ? convoscope::OrphanPolicy::Lenient
                                                      : convoscope::OrphanPolicy::Strict;
            config.decay = vision.to_config();
            if (analyze->count("--katz-alpha")) {
                config.katz.alpha = katz_alpha;
            }
            config.katz.beta = katz_beta;
            config.katz.tol = katz_tol;
            config.centrality = convoscope::parse_centrality_selection(centrality);
            config.outliers = convoscope::OutlierPolicy::parse(outliers);
            config.normalize = normalize == "per-conversation"
                                   ? convoscope::NormalizeMode::PerConversation
                                   : convoscope::NormalizeMode::GroupMeans;
            config.format = format == "json-lines" ? convoscope::ReportFormat::JsonLines
                                                   : convoscope::ReportFormat::Csv;
            config.workers = workers;

            convoscope::AnalyzeResult result = convoscope::run_analyze(config);
            for (const std::string& warning : result.warnings) {
                std::fprintf(stderr, "warning: %s\n", warning.c_str());
            }
            std::printf("analyzed %zu conversations (%zu posts kept of %zu read)\n",
                        result.stats.conversations_kept, result.stats.posts_kept,
                        result.stats.posts_read);
            for (const auto& path : result.report_files) {
                std::printf("wrote %s\n", path.string().c_str());
            }
        } else if (*inspect) {
            auto policy = inspect_lenient ? convoscope::OrphanPolicy::Lenient
                                          : convoscope::OrphanPolicy::Strict;
            convoscope::Conversation conv =
                convoscope::find_conversation(inspect_input, conversation_id, policy);
            std::string focus = focus_author.empty() ? conv.root().author : focus_author;
            std::fputs(convoscope::render_inspect(conv, focus, inspect_vision.to_config()).c_str(),
                       stdout);
        } else if (*synth) {
            seed_given = seed_opt->count() > 0;
            convoscope::GeneratorConfig config;
            if (!synth_config.empty()) {
                config = convoscope::load_generator_config(synth_config);
            } else {
                config = convoscope::preset_config(synth_preset);
            }
            if (seed_given) {
                config.seed = synth_seed;
            }
            if (synth->count("--conversations")) {
                config.conversations = synth_conversations;
            }
            convoscope::SynthOutput result = convoscope::generate(config, synth_out);
            std::printf("wrote %s (%zu conversations, %zu posts)\n",
                        result.corpus_path.string().c_str(), result.conversations, result.posts);
            std::printf("wrote %s\n", result.registry_path.string().c_str());
        }
    } catch (const convoscope::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

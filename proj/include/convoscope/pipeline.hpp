#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "convoscope/aggregate.hpp"
#include "convoscope/author_graph.hpp"
#include "convoscope/ingest.hpp"
#include "convoscope/report.hpp"
#include "convoscope/vision.hpp"

namespace convoscope {

enum class CentralitySelection { Betweenness, Closeness, Katz, All };

CentralitySelection parse_centrality_selection(std::string_view text);
const char* to_string(CentralitySelection selection);

struct RunConfig {
    std::filesystem::path input;
    std::filesystem::path authors;  // optional; empty registry disables root check
    std::filesystem::path keywords; // optional
    std::filesystem::path out_dir;
    FilterConfig filter;
    OrphanPolicy orphan_policy = OrphanPolicy::Strict;
    DecayConfig decay;
    KatzConfig katz;
    CentralitySelection centrality = CentralitySelection::All;
    OutlierPolicy outliers{OutlierMode::ZScore, 3.0, 1};
    NormalizeMode normalize = NormalizeMode::GroupMeans;
    ReportFormat format = ReportFormat::Csv;
    std::size_t workers = 0; // 0 = hardware concurrency

    std::string to_json() const; // resolved copy written next to the reports
};

// Everything computed for one conversation; contributions feed authors.csv.
struct ConversationAnalysis {
    MetricVector vector;
    std::vector<AuthorContribution> contributions;
};

ConversationAnalysis analyze_conversation(const Conversation& conv, const AuthorRegistry& registry,
                                          const DecayConfig& decay, const KatzConfig& katz_cfg,
                                          CentralitySelection selection = CentralitySelection::All);

struct AnalyzeResult {
    CorpusStats stats;
    std::vector<MetricVector> vectors;
    std::vector<GroupSummary> groups;
    std::vector<AuthorRollup> authors;
    std::vector<ExcludedVector> outliers;
    std::vector<std::string> warnings; // empty registry, repairs, timestamp skew
    std::vector<std::filesystem::path> report_files;
};

// Full analyze pipeline: ingest -> per-conversation metrics (parallel over a
// bounded worker pool, deterministic ordered reduce) -> aggregation ->
// report files. Throws NoConversations when nothing survives the filters.
AnalyzeResult run_analyze(const RunConfig& config);

// Indented reply tree with per-post vision scores for one author.
std::string render_inspect(const Conversation& conv, const AuthorId& focus,
                           const DecayConfig& decay);

// Loads the corpus without sampling filters and returns the conversation
// with the given root post id. Throws UnknownConversation.
Conversation find_conversation(const std::filesystem::path& corpus, const PostId& root_id,
                               OrphanPolicy policy = OrphanPolicy::Strict);

} // namespace convoscope

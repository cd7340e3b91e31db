#include "convoscope/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "convoscope/text_stats.hpp"
#include "convoscope/tree_metrics.hpp"

namespace convoscope {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double value_or(const std::map<AuthorId, double>& scores, const AuthorId& author) {
    auto it = scores.find(author);
    return it == scores.end() ? kNaN : it->second;
}

} // namespace

CentralitySelection parse_centrality_selection(std::string_view text) {
    if (text == "betweenness") return CentralitySelection::Betweenness;
    if (text == "closeness") return CentralitySelection::Closeness;
    if (text == "katz") return CentralitySelection::Katz;
    if (text == "all") return CentralitySelection::All;
    throw Error(ErrorKind::InvalidConfig,
                "centrality must be betweenness, closeness, katz or all, got '" +
                    std::string(text) + "'");
}

const char* to_string(CentralitySelection selection) {
    switch (selection) {
    case CentralitySelection::Betweenness: return "betweenness";
    case CentralitySelection::Closeness: return "closeness";
    case CentralitySelection::Katz: return "katz";
    case CentralitySelection::All: return "all";
    }
    return "all";
}

std::string RunConfig::to_json() const {
    json obj;
    obj["input"] = input.string();
    obj["authors"] = authors.string();
    obj["keywords"] = keywords.string();
    obj["out"] = out_dir.string();
    obj["min_posts"] = filter.min_posts;
    obj["keyword_list"] = filter.keywords;
    obj["require_root_in_registry"] = filter.require_root_in_registry;
    obj["orphan_policy"] = orphan_policy == OrphanPolicy::Strict ? "strict" : "lenient";
    obj["decay_reply"] = decay.reply_base;
    obj["decay_root"] = decay.root_base;
    obj["union_rule"] = decay.union_rule == UnionRule::Independent ? "independent" : "max";
    obj["zeta_aggregation"] =
        decay.zeta_aggregation == ZetaAggregation::Mean ? "mean" : "capped-sum";
    obj["katz_alpha"] = katz.alpha ? json(*katz.alpha) : json(nullptr);
    obj["katz_beta"] = katz.beta;
    obj["katz_tol"] = katz.tol;
    obj["katz_max_iter"] = katz.max_iter;
    obj["centrality"] = convoscope::to_string(centrality);
    obj["outliers"] = outliers.to_string();
    obj["normalize"] = normalize == NormalizeMode::GroupMeans ? "group-means" : "per-conversation";
    obj["format"] = format == ReportFormat::Csv ? "csv" : "json-lines";
    obj["workers"] = workers;
    return obj.dump(2);
}

ConversationAnalysis analyze_conversation(const Conversation& conv, const AuthorRegistry& registry,
                                          const DecayConfig& decay, const KatzConfig& katz_cfg,
                                          CentralitySelection selection) {
    ConversationAnalysis analysis;
    MetricVector& v = analysis.vector;

    const AuthorId& root_author = conv.root().author;
    TreeMetrics tm = tree_metrics(conv);
    v.conversation = conv.root_id();
    v.root_author = root_author;
    v.root_group = registry.group_of(root_author);
    v.size = static_cast<double>(tm.size);
    v.depth = tm.depth;
    v.branching_factor = tm.branching_factor;
    v.root_dominance = tm.root_dominance;

    auto vision = baseline_vision_all(conv, decay);
    v.root_author_baseline_vision = vision.at(root_author);

    AuthorGraph graph = derive_author_graph(conv);
    const bool want_betweenness =
        selection == CentralitySelection::All || selection == CentralitySelection::Betweenness;
    const bool want_closeness =
        selection == CentralitySelection::All || selection == CentralitySelection::Closeness;
    const bool want_katz =
        selection == CentralitySelection::All || selection == CentralitySelection::Katz;
    std::map<AuthorId, double> bw, cl, kz;
    if (want_betweenness) {
        bw = betweenness(graph);
    }
    if (want_closeness) {
        cl = closeness(graph);
    }
    if (want_katz) {
        kz = katz(graph, katz_cfg);
    }
    v.root_author_betweenness = value_or(bw, root_author);
    v.root_author_closeness = value_or(cl, root_author);
    v.root_author_katz = value_or(kz, root_author);

    TextStats ts = text_stats(conv.posts());
    v.link_share = ts.link_share;
    v.mention_share = ts.mention_share;
    v.mean_chars = ts.mean_chars;

    std::map<AuthorId, AuthorContribution> contributions;
    for (std::size_t i = 0; i < conv.size(); ++i) {
        const Post& p = conv.post(i);
        AuthorContribution& c = contributions[p.author];
        c.author = p.author;
        c.conversation = conv.root_id();
        ++c.posts;
        if (p.is_reply()) {
            ++c.replies;
        }
    }
    for (auto& [author, c] : contributions) {
        c.baseline_vision = vision.at(author);
        c.betweenness = value_or(bw, author);
        c.closeness = value_or(cl, author);
        c.katz = value_or(kz, author);
        c.is_root_author = author == root_author;
        v.root_author_posts = c.is_root_author ? static_cast<double>(c.posts) : v.root_author_posts;
        analysis.contributions.push_back(c);
    }
    return analysis;
}

namespace {

ReportTable conversations_table(const std::vector<MetricVector>& vectors) {
    ReportTable table;
    table.name = "conversations";
    table.columns = {"conversation", "root_author", "root_group"};
    for (const MetricField& f : metric_fields()) {
        table.columns.push_back(f.name);
    }
    for (const MetricVector& v : vectors) {
        std::vector<std::string> row{v.conversation, v.root_author, to_string(v.root_group)};
        for (const MetricField& f : metric_fields()) {
            row.push_back(format_double(v.*(f.field)));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ReportTable authors_table(const std::vector<AuthorRollup>& rollups) {
    ReportTable table;
    table.name = "authors";
    table.columns = {"author",
                     "group",
                     "post_count",
                     "reply_count",
                     "reply_share",
                     "conversations",
                     "conversations_rooted",
                     "baseline_vision_participant",
                     "baseline_vision_rooted",
                     "mean_betweenness",
                     "mean_closeness",
                     "mean_katz"};
    for (const AuthorRollup& r : rollups) {
        table.rows.push_back({r.author, to_string(r.group), std::to_string(r.post_count),
                              std::to_string(r.reply_count), format_double(r.reply_share),
                              std::to_string(r.conversations), std::to_string(r.conversations_rooted),
                              format_double(r.baseline_vision_participant),
                              format_double(r.baseline_vision_rooted),
                              format_double(r.mean_betweenness), format_double(r.mean_closeness),
                              format_double(r.mean_katz)});
    }
    return table;
}

ReportTable groups_table(const std::vector<GroupSummary>& groups) {
    ReportTable table;
    table.name = "groups";
    table.columns = {"group", "n_conversations", "metric", "mean", "median", "normalized_mean"};
    const auto fields = metric_fields();
    for (const GroupSummary& g : groups) {
        for (std::size_t f = 0; f < fields.size(); ++f) {
            table.rows.push_back({to_string(g.group), std::to_string(g.n_conversations),
                                  fields[f].name, format_double(g.mean[f]),
                                  format_double(g.median[f]), format_double(g.normalized_mean[f])});
        }
    }
    return table;
}

ReportTable stats_table(const CorpusStats& stats, const std::vector<ExcludedVector>& outliers) {
    ReportTable table;
    table.name = "stats";
    table.columns = {"key", "value"};
    auto add = [&](const std::string& key, std::size_t value) {
        table.rows.push_back({key, std::to_string(value)});
    };
    add("conversations_read", stats.conversations_read);
    add("conversations_kept", stats.conversations_kept);
    add("posts_read", stats.posts_read);
    add("posts_kept", stats.posts_kept);
    add("authors_excluded", stats.authors_excluded);
    add("duplicate_lines_dropped", stats.duplicate_lines_dropped);
    add("repaired_posts", stats.repaired_posts);
    for (const auto& [reason, count] : stats.drop_reasons) {
        add("drop_" + reason, count);
    }
    add("outliers_excluded", outliers.size());
    return table;
}

ReportTable outliers_table(const std::vector<ExcludedVector>& outliers) {
    ReportTable table;
    table.name = "outliers";
    table.columns = {"conversation", "root_group", "size", "statistic", "reason"};
    for (const ExcludedVector& e : outliers) {
        table.rows.push_back({e.vector.conversation, to_string(e.vector.root_group),
                              format_double(e.vector.size), format_double(e.statistic), e.reason});
    }
    return table;
}

} // namespace

AnalyzeResult run_analyze(const RunConfig& config) {
    RunConfig resolved = config;
    if (!resolved.authors.empty()) {
        // loaded below
    } else {
        resolved.filter.require_root_in_registry = false;
    }
    resolved.filter.validate();
    resolved.decay.validate();

    std::vector<std::string> warnings;
    AuthorRegistry registry;
    if (!resolved.authors.empty()) {
        registry = load_author_registry(resolved.authors);
        if (registry.empty()) {
            warnings.push_back("registry '" + resolved.authors.string() +
                               "' contains a header but no authors; root filter disabled");
            resolved.filter.require_root_in_registry = false;
        }
    }
    if (!resolved.keywords.empty()) {
        auto loaded = load_keywords(resolved.keywords);
        resolved.filter.keywords.insert(resolved.filter.keywords.end(), loaded.begin(),
                                        loaded.end());
    }

    LoadResult corpus = load_corpus(resolved.input, registry, resolved.filter,
                                    resolved.orphan_policy);
    warnings.insert(warnings.end(), corpus.warnings.begin(), corpus.warnings.end());
    for (const RepairRecord& repair : corpus.repairs) {
        warnings.push_back("repaired " + repair.post + ": " + repair.action);
    }
    if (corpus.conversations.empty()) {
        throw Error(ErrorKind::NoConversations, "no conversations left after filtering");
    }

    // Parallel fan-out over conversations; results land in slots keyed by the
    // (sorted) conversation index, so the reduce order is fixed regardless of
    // the worker count.
    std::size_t workers = resolved.workers;
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, corpus.conversations.size());

    std::vector<ConversationAnalysis> analyses(corpus.conversations.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run_worker = [&]() {
        try {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= corpus.conversations.size()) {
                    break;
                }
                analyses[i] = analyze_conversation(corpus.conversations[i], registry,
                                                   resolved.decay, resolved.katz,
                                                   resolved.centrality);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(corpus.conversations.size());
        }
    };
    if (workers <= 1) {
        run_worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(run_worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    AnalyzeResult result;
    result.stats = corpus.stats;
    result.warnings = std::move(warnings);
    result.vectors.reserve(analyses.size());
    std::vector<AuthorContribution> contributions;
    for (ConversationAnalysis& a : analyses) {
        result.vectors.push_back(std::move(a.vector));
        contributions.insert(contributions.end(), a.contributions.begin(), a.contributions.end());
    }

    auto [kept, excluded] = exclude_outliers(result.vectors, resolved.outliers);
    result.outliers = std::move(excluded);
    result.groups = summarize(kept, OutlierPolicy{OutlierMode::None}, resolved.normalize);

    // authors.csv sticks to registry authors when a registry is present.
    std::vector<AuthorContribution> scoped;
    if (!registry.empty()) {
        for (AuthorContribution& c : contributions) {
            if (registry.contains(c.author)) {
                scoped.push_back(std::move(c));
            }
        }
    } else {
        scoped = std::move(contributions);
    }
    result.authors = author_level_rollup(scoped, registry);

    if (!resolved.out_dir.empty()) {
        std::filesystem::create_directories(resolved.out_dir);
        result.report_files.push_back(
            write_table(conversations_table(result.vectors), resolved.out_dir, resolved.format));
        result.report_files.push_back(
            write_table(authors_table(result.authors), resolved.out_dir, resolved.format));
        result.report_files.push_back(
            write_table(groups_table(result.groups), resolved.out_dir, resolved.format));
        result.report_files.push_back(
            write_table(stats_table(result.stats, result.outliers), resolved.out_dir,
                        resolved.format));
        result.report_files.push_back(
            write_table(outliers_table(result.outliers), resolved.out_dir, resolved.format));
        std::filesystem::path config_path = resolved.out_dir / "run_config.json";
        std::ofstream config_out(config_path, std::ios::binary);
        if (!config_out) {
            throw Error(ErrorKind::IoError, "cannot write '" + config_path.string() + "'");
        }
        config_out << resolved.to_json() << '\n';
        result.report_files.push_back(config_path);
    }
    return result;
}

std::string render_inspect(const Conversation& conv, const AuthorId& focus,
                           const DecayConfig& decay) {
    std::string out = "conversation " + conv.root_id() + ": " + std::to_string(conv.size()) +
                      " posts, depth " + std::to_string(depth(conv)) + ", focus author '" +
                      focus + "'\n";
    out += "post  (author, depth)  zeta  theta  combined\n";

    struct Frame {
        std::size_t index;
        int indent;
    };
    std::vector<Frame> stack{{conv.root_index(), 0}};
    while (!stack.empty()) {
        Frame frame = stack.back();
        stack.pop_back();
        const Post& p = conv.post(frame.index);
        VisionScore score = seen_probability(conv, focus, p.id, decay);
        out += std::string(static_cast<std::size_t>(frame.indent) * 2, ' ');
        out += "- " + p.id + "  (" + p.author + ", d" + std::to_string(conv.depth_of(frame.index)) +
               ")  " + format_double(score.zeta) + "  " + format_double(score.theta) + "  " +
               format_double(score.combined) + "\n";
        const auto& children = conv.children_of(frame.index);
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
            stack.push_back({static_cast<std::size_t>(*it), frame.indent + 1});
        }
    }
    return out;
}

Conversation find_conversation(const std::filesystem::path& corpus, const PostId& root_id,
                               OrphanPolicy policy) {
    FilterConfig filter;
    filter.min_posts = 1;
    filter.require_root_in_registry = false;
    AuthorRegistry empty;
    LoadResult loaded = load_corpus(corpus, empty, filter, policy);
    // Match the root post id first, then the grouping conversation_id.
    for (Conversation& conv : loaded.conversations) {
        if (conv.root_id() == root_id) {
            return std::move(conv);
        }
    }
    for (Conversation& conv : loaded.conversations) {
        auto key = loaded.group_keys.find(conv.root_id());
        if (key != loaded.group_keys.end() && key->second == root_id) {
            return std::move(conv);
        }
    }
    throw Error(ErrorKind::UnknownConversation,
                "no conversation rooted or grouped as '" + root_id + "' in '" + corpus.string() + "'");
}

} // namespace convoscope

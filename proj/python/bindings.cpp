#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "convoscope/aggregate.hpp"
#include "convoscope/author_graph.hpp"
#include "convoscope/ingest.hpp"
#include "convoscope/pipeline.hpp"
#include "convoscope/synth.hpp"
#include "convoscope/text_stats.hpp"
#include "convoscope/tree_metrics.hpp"
#include "convoscope/vision.hpp"

namespace py = pybind11;
using namespace convoscope;

namespace {

Post post_from_dict(const py::dict& d) {
    Post p;
    p.id = d["id"].cast<std::string>();
    if (d.contains("parent_id") && !d["parent_id"].is_none()) {
        p.parent = d["parent_id"].cast<std::string>();
    }
    p.author = d["author_id"].cast<std::string>();
    py::object created = d["created_at"];
    if (py::isinstance<py::str>(created)) {
        p.created_at = parse_timestamp(created.cast<std::string>());
    } else {
        p.created_at = created.cast<std::int64_t>();
    }
    if (d.contains("text")) {
        p.text = d["text"].cast<std::string>();
    }
    if (d.contains("urls") && !d["urls"].is_none()) {
        p.urls = d["urls"].cast<std::vector<std::string>>();
    } else {
        p.urls = extract_text_features(p.text).urls;
    }
    if (d.contains("mentions") && !d["mentions"].is_none()) {
        p.mentions = d["mentions"].cast<std::vector<std::string>>();
    } else {
        p.mentions = extract_text_features(p.text).mentions;
    }
    return p;
}

py::dict post_to_dict(const Post& p) {
    py::dict d;
    d["id"] = p.id;
    d["parent_id"] = p.parent ? py::object(py::str(*p.parent)) : py::object(py::none());
    d["author_id"] = p.author;
    d["created_at"] = format_timestamp(p.created_at);
    d["text"] = p.text;
    d["urls"] = p.urls;
    d["mentions"] = p.mentions;
    return d;
}

DecayConfig decay_from_args(double reply_base, double root_base, const std::string& union_rule,
                            const std::string& zeta_aggregation) {
    DecayConfig cfg;
    cfg.reply_base = reply_base;
    cfg.root_base = root_base;
    cfg.union_rule = union_rule == "max" ? UnionRule::Max : UnionRule::Independent;
    cfg.zeta_aggregation =
        zeta_aggregation == "capped-sum" ? ZetaAggregation::CappedSum : ZetaAggregation::Mean;
    cfg.validate();
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reply-tree structure analytics: vision scores, centralities, group reports";

    py::register_exception<Error>(m, "ConvoscopeError");

    py::class_<Conversation>(m, "Conversation")
        .def_static(
            "build",
            [](const std::vector<py::dict>& posts, bool lenient) {
                std::vector<Post> parsed;
                parsed.reserve(posts.size());
                for (const py::dict& d : posts) {
                    parsed.push_back(post_from_dict(d));
                }
                return Conversation::build(std::move(parsed),
                                           lenient ? OrphanPolicy::Lenient : OrphanPolicy::Strict);
            },
            py::arg("posts"), py::arg("lenient") = false,
            "Build a validated reply tree from post dicts")
        .def_property_readonly("size", &Conversation::size)
        .def_property_readonly("root_id", [](const Conversation& c) { return c.root_id(); })
        .def_property_readonly("root_author", [](const Conversation& c) { return c.root().author; })
        .def("post_ids",
             [](const Conversation& c) {
                 std::vector<PostId> ids;
                 ids.reserve(c.size());
                 for (const Post& p : c.posts()) {
                     ids.push_back(p.id);
                 }
                 return ids;
             })
        .def("post",
             [](const Conversation& c, const PostId& id) { return post_to_dict(c.post(c.index_of(id))); })
        .def("parent_of",
             [](const Conversation& c, const PostId& id) -> py::object {
                 auto parent = c.parent_index(c.index_of(id));
                 if (parent < 0) {
                     return py::none();
                 }
                 return py::str(c.post(static_cast<std::size_t>(parent)).id);
             })
        .def("children_of",
             [](const Conversation& c, const PostId& id) {
                 std::vector<PostId> ids;
                 for (std::int32_t child : c.children_of(c.index_of(id))) {
                     ids.push_back(c.post(static_cast<std::size_t>(child)).id);
                 }
                 return ids;
             })
        .def("depth_of", [](const Conversation& c, const PostId& id) {
            return c.depth_of(c.index_of(id));
        });

    m.def("depth", &depth, py::arg("conversation"));
    m.def("branching_factor", &branching_factor, py::arg("conversation"));
    m.def("root_dominance", &root_dominance, py::arg("conversation"));
    m.def("path_distance", &path_distance, py::arg("conversation"), py::arg("a"), py::arg("b"));

    m.def(
        "zeta",
        [](const Conversation& conv, const AuthorId& author, const PostId& j, double reply_base,
           double root_base, const std::string& union_rule, const std::string& zeta_aggregation) {
            return zeta(conv, author, j,
                        decay_from_args(reply_base, root_base, union_rule, zeta_aggregation));
        },
        py::arg("conversation"), py::arg("author"), py::arg("post"), py::arg("reply_base") = 0.5,
        py::arg("root_base") = 0.25, py::arg("union_rule") = "independent",
        py::arg("zeta_aggregation") = "mean");
    m.def(
        "theta",
        [](const Conversation& conv, const PostId& j, double reply_base, double root_base) {
            return theta(conv, j, decay_from_args(reply_base, root_base, "independent", "mean"));
        },
        py::arg("conversation"), py::arg("post"), py::arg("reply_base") = 0.5,
        py::arg("root_base") = 0.25);
    m.def(
        "seen_probability",
        [](const Conversation& conv, const AuthorId& author, const PostId& j, double reply_base,
           double root_base, const std::string& union_rule, const std::string& zeta_aggregation) {
            VisionScore s = seen_probability(
                conv, author, j, decay_from_args(reply_base, root_base, union_rule, zeta_aggregation));
            py::dict d;
            d["zeta"] = s.zeta;
            d["theta"] = s.theta;
            d["combined"] = s.combined;
            return d;
        },
        py::arg("conversation"), py::arg("author"), py::arg("post"), py::arg("reply_base") = 0.5,
        py::arg("root_base") = 0.25, py::arg("union_rule") = "independent",
        py::arg("zeta_aggregation") = "mean");
    m.def(
        "author_baseline_vision",
        [](const Conversation& conv, const AuthorId& author, double reply_base, double root_base,
           const std::string& union_rule, const std::string& zeta_aggregation) {
            return author_baseline_vision(
                conv, author, decay_from_args(reply_base, root_base, union_rule, zeta_aggregation));
        },
        py::arg("conversation"), py::arg("author"), py::arg("reply_base") = 0.5,
        py::arg("root_base") = 0.25, py::arg("union_rule") = "independent",
        py::arg("zeta_aggregation") = "mean");

    m.def(
        "centralities",
        [](const Conversation& conv, py::object alpha, double beta, double tol, int max_iter) {
            AuthorGraph g = derive_author_graph(conv);
            KatzConfig cfg;
            if (!alpha.is_none()) {
                cfg.alpha = alpha.cast<double>();
            }
            cfg.beta = beta;
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            CentralityScores scores = centralities(g, cfg);
            py::dict d;
            d["betweenness"] = scores.betweenness;
            d["closeness"] = scores.closeness;
            d["katz"] = scores.katz;
            return d;
        },
        py::arg("conversation"), py::arg("katz_alpha") = py::none(), py::arg("katz_beta") = 1.0,
        py::arg("katz_tol") = 1e-10, py::arg("katz_max_iter") = 10000,
        "Author-graph betweenness, harmonic closeness and Katz scores");

    m.def(
        "author_graph_edges",
        [](const Conversation& conv) {
            AuthorGraph g = derive_author_graph(conv);
            std::vector<std::tuple<AuthorId, AuthorId, std::int64_t>> edges;
            for (const auto& [edge, weight] : g.edge_weights) {
                edges.emplace_back(g.nodes[static_cast<std::size_t>(edge.first)],
                                   g.nodes[static_cast<std::size_t>(edge.second)], weight);
            }
            return edges;
        },
        py::arg("conversation"), "Directed (replier, replied_to, weight) edges");

    m.def(
        "text_stats",
        [](const std::vector<py::dict>& posts) {
            std::vector<Post> parsed;
            parsed.reserve(posts.size());
            for (const py::dict& d : posts) {
                parsed.push_back(post_from_dict(d));
            }
            TextStats stats = text_stats(parsed);
            py::dict d;
            d["post_count"] = stats.post_count;
            d["link_share"] = stats.link_share;
            d["mention_share"] = stats.mention_share;
            d["mean_chars"] = stats.mean_chars;
            return d;
        },
        py::arg("posts"));

    m.def(
        "extract_text_features",
        [](const std::string& text) {
            TextFeatures features = extract_text_features(text);
            return py::make_tuple(features.urls, features.mentions);
        },
        py::arg("text"), "Returns (urls, mentions) extracted from a post text");

    m.def(
        "analyze",
        [](const std::filesystem::path& input, const std::filesystem::path& out,
           py::object authors, py::object keywords, std::size_t min_posts, bool lenient,
           double reply_base, double root_base, const std::string& union_rule,
           const std::string& zeta_aggregation, const std::string& outliers,
           const std::string& normalize, const std::string& format, std::size_t workers) {
            RunConfig config;
            config.input = input;
            config.out_dir = out;
            if (!authors.is_none()) {
                config.authors = authors.cast<std::filesystem::path>();
            }
            if (!keywords.is_none()) {
                config.keywords = keywords.cast<std::filesystem::path>();
            }
            config.filter.min_posts = min_posts;
            config.orphan_policy = lenient ? OrphanPolicy::Lenient : OrphanPolicy::Strict;
            config.decay = decay_from_args(reply_base, root_base, union_rule, zeta_aggregation);
            config.outliers = OutlierPolicy::parse(outliers);
            config.normalize = normalize == "per-conversation" ? NormalizeMode::PerConversation
                                                               : NormalizeMode::GroupMeans;
            config.format =
                format == "json-lines" ? ReportFormat::JsonLines : ReportFormat::Csv;
            config.workers = workers;
            AnalyzeResult result = run_analyze(config);
            py::dict d;
            d["conversations_read"] = result.stats.conversations_read;
            d["conversations_kept"] = result.stats.conversations_kept;
            d["posts_read"] = result.stats.posts_read;
            d["posts_kept"] = result.stats.posts_kept;
            d["authors_excluded"] = result.stats.authors_excluded;
            py::list files;
            for (const auto& path : result.report_files) {
                files.append(path.string());
            }
            d["report_files"] = files;
            return d;
        },
        py::arg("input"), py::arg("out"), py::arg("authors") = py::none(),
        py::arg("keywords") = py::none(), py::arg("min_posts") = 6, py::arg("lenient") = false,
        py::arg("reply_base") = 0.5, py::arg("root_base") = 0.25,
        py::arg("union_rule") = "independent", py::arg("zeta_aggregation") = "mean",
        py::arg("outliers") = "zscore:3", py::arg("normalize") = "group-means",
        py::arg("format") = "csv", py::arg("workers") = 0,
        "Run the full corpus analysis and write report tables");

    m.def(
        "generate",
        [](py::object config, const std::filesystem::path& out, py::object preset) {
            GeneratorConfig generator;
            if (!preset.is_none()) {
                generator = preset_config(preset.cast<std::string>());
            }
            if (!config.is_none()) {
                generator = parse_generator_config(config.cast<std::string>());
            }
            SynthOutput result = generate(generator, out);
            py::dict d;
            d["corpus"] = result.corpus_path.string();
            d["registry"] = result.registry_path.string();
            d["conversations"] = result.conversations;
            d["posts"] = result.posts;
            return d;
        },
        py::arg("config") = py::none(), py::arg("out") = "synth_out",
        py::arg("preset") = py::none(),
        "Generate a synthetic corpus from a JSON config string or a preset name");

    m.attr("__version__") = "0.1.0";
}

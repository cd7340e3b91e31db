#include "convoscope/author_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace convoscope {

std::optional<std::size_t> AuthorGraph::index_of(const AuthorId& author) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), author);
    if (it == nodes.end() || *it != author) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - nodes.begin());
}

int AuthorGraph::max_out_degree() const {
    std::size_t best = 0;
    for (const auto& targets : out) {
        best = std::max(best, targets.size());
    }
    return static_cast<int>(best);
}

AuthorGraph derive_author_graph(const Conversation& conv) {
    AuthorGraph g;
    std::set<AuthorId> authors;
    for (const Post& p : conv.posts()) {
        authors.insert(p.author);
    }
    g.nodes.assign(authors.begin(), authors.end());
    g.out.assign(g.nodes.size(), {});
    g.in.assign(g.nodes.size(), {});

    for (std::size_t i = 0; i < conv.size(); ++i) {
        std::int32_t parent = conv.parent_index(i);
        if (parent < 0) {
            continue;
        }
        const AuthorId& replier = conv.post(i).author;
        const AuthorId& target = conv.post(static_cast<std::size_t>(parent)).author;
        if (replier == target) {
            continue;
        }
        auto a = static_cast<std::int32_t>(*g.index_of(replier));
        auto b = static_cast<std::int32_t>(*g.index_of(target));
        ++g.edge_weights[{a, b}];
    }
    for (const auto& [edge, weight] : g.edge_weights) {
        g.out[static_cast<std::size_t>(edge.first)].push_back(edge.second);
        g.in[static_cast<std::size_t>(edge.second)].push_back(edge.first);
    }
    for (auto& targets : g.out) {
        std::sort(targets.begin(), targets.end());
    }
    for (auto& sources : g.in) {
        std::sort(sources.begin(), sources.end());
    }
    return g;
}

std::map<AuthorId, double> betweenness(const AuthorGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> score(n, 0.0);

    std::vector<std::int64_t> sigma(n);
    std::vector<int> dist(n);
    std::vector<double> delta(n);
    std::vector<std::vector<std::int32_t>> pred(n);
    std::vector<std::int32_t> order;
    order.reserve(n);

    for (std::size_t s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0);
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : pred) {
            p.clear();
        }
        order.clear();

        sigma[s] = 1;
        dist[s] = 0;
        std::deque<std::int32_t> queue{static_cast<std::int32_t>(s)};
        while (!queue.empty()) {
            std::int32_t v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (std::int32_t w : g.out[static_cast<std::size_t>(v)]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    pred[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::int32_t w = *it;
            for (std::int32_t v : pred[w]) {
                delta[v] += static_cast<double>(sigma[v]) / static_cast<double>(sigma[w]) *
                            (1.0 + delta[w]);
            }
            if (w != static_cast<std::int32_t>(s)) {
                score[static_cast<std::size_t>(w)] += delta[w];
            }
        }
    }

    std::map<AuthorId, double> result;
    for (std::size_t i = 0; i < n; ++i) {
        result.emplace(g.nodes[i], score[i]);
    }
    return result;
}

std::map<AuthorId, double> closeness(const AuthorGraph& g) {
    const std::size_t n = g.node_count();
    std::map<AuthorId, double> result;
    std::vector<int> dist(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::deque<std::int32_t> queue{static_cast<std::int32_t>(s)};
        double score = 0;
        while (!queue.empty()) {
            std::int32_t v = queue.front();
            queue.pop_front();
            if (v != static_cast<std::int32_t>(s)) {
                score += 1.0 / dist[v];
            }
            for (std::int32_t w : g.out[static_cast<std::size_t>(v)]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        result.emplace(g.nodes[s], score);
    }
    return result;
}

double katz_default_alpha(const AuthorGraph& g) {
    // Max out-degree bounds the spectral radius of the adjacency matrix.
    return 0.9 / std::max(1, g.max_out_degree());
}

std::vector<double> katz_raw(const AuthorGraph& g, const KatzConfig& cfg) {
    const std::size_t n = g.node_count();
    double alpha = cfg.alpha.value_or(katz_default_alpha(g));
    if (alpha <= 0.0) {
        throw Error(ErrorKind::InvalidAlpha, "katz alpha must be positive");
    }
    if (cfg.beta <= 0.0) {
        throw Error(ErrorKind::InvalidConfig, "katz beta must be positive");
    }
    if (n == 0) {
        return {};
    }

    std::vector<double> x(n, cfg.beta);
    std::vector<double> next(n);
    double residual = 0;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0;
            for (std::int32_t j : g.in[i]) {
                acc += x[static_cast<std::size_t>(j)];
            }
            next[i] = alpha * acc + cfg.beta;
        }
        residual = 0;
        for (std::size_t i = 0; i < n; ++i) {
            residual = std::max(residual, std::abs(next[i] - x[i]));
        }
        x.swap(next);
        if (residual < cfg.tol) {
            // x is one refinement past the vector whose update was < tol;
            // confirm its own residual before accepting.
            double check = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0;
                for (std::int32_t j : g.in[i]) {
                    acc += x[static_cast<std::size_t>(j)];
                }
                check = std::max(check, std::abs(x[i] - (alpha * acc + cfg.beta)));
            }
            if (check < cfg.tol) {
                return x;
            }
        }
    }
    throw Error(ErrorKind::NoConvergence,
                "katz did not converge after " + std::to_string(cfg.max_iter) +
                    " iterations (residual " + std::to_string(residual) + ")");
}

std::map<AuthorId, double> katz(const AuthorGraph& g, const KatzConfig& cfg) {
    std::vector<double> x = katz_raw(g, cfg);
    double norm = 0;
    for (double v : x) {
        norm += v * v;
    }
    norm = std::sqrt(norm);
    std::map<AuthorId, double> result;
    for (std::size_t i = 0; i < x.size(); ++i) {
        result.emplace(g.nodes[i], norm > 0 ? x[i] / norm : 0.0);
    }
    return result;
}

CentralityScores centralities(const AuthorGraph& g, const KatzConfig& cfg) {
    return CentralityScores{betweenness(g), closeness(g), katz(g, cfg)};
}

} // namespace convoscope

#pragma once

// Shared fixtures and brute-force oracles. Everything here recomputes from
// raw inputs (post parent links, explicit edge lists) so it stays independent
// of the library's optimized code paths.

#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "convoscope/author_graph.hpp"
#include "convoscope/model.hpp"

namespace testsupport {

using convoscope::AuthorId;
using convoscope::Post;
using convoscope::PostId;

inline Post make_post(std::string id, std::string parent, std::string author,
                      std::int64_t created_at, std::string text = "") {
    Post p;
    p.id = std::move(id);
    if (!parent.empty()) {
        p.parent = std::move(parent);
    }
    p.author = std::move(author);
    p.created_at = created_at;
    p.text = std::move(text);
    return p;
}

// Random tree over n posts: post i replies to a uniformly chosen earlier
// post. Timestamps increase with occasional ties to exercise the
// strictly-later rule.
inline std::vector<Post> random_tree(std::mt19937_64& gen, std::size_t n,
                                     std::size_t author_pool, bool timestamp_ties = true) {
    std::vector<Post> posts;
    posts.reserve(n);
    std::int64_t t = 1000;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            t += (timestamp_ties && gen() % 4 == 0) ? 0 : 1 + static_cast<std::int64_t>(gen() % 30);
        }
        std::string parent = i == 0 ? "" : "p" + std::to_string(gen() % i);
        std::string author = "a" + std::to_string(gen() % author_pool);
        posts.push_back(make_post("p" + std::to_string(i), parent, author, t));
    }
    return posts;
}

// Undirected BFS distances over the raw parent links.
inline std::map<PostId, int> bfs_distances(const std::vector<Post>& posts, const PostId& from) {
    std::map<PostId, std::vector<PostId>> adjacency;
    for (const Post& p : posts) {
        if (p.parent) {
            adjacency[p.id].push_back(*p.parent);
            adjacency[*p.parent].push_back(p.id);
        }
    }
    std::map<PostId, int> dist;
    dist[from] = 0;
    std::deque<PostId> queue{from};
    while (!queue.empty()) {
        PostId cur = queue.front();
        queue.pop_front();
        for (const PostId& next : adjacency[cur]) {
            if (!dist.count(next)) {
                dist[next] = dist[cur] + 1;
                queue.push_back(next);
            }
        }
    }
    return dist;
}

struct VisionOracle {
    double zeta = 0;
    double theta = 0;
    double combined = 0;
};

// Enumerates the evidence set and the root path by BFS; no shared code with
// the vision module.
inline VisionOracle vision_oracle(const std::vector<Post>& posts, const AuthorId& author,
                                  const PostId& j, double reply_base = 0.5,
                                  double root_base = 0.25) {
    const Post* target = nullptr;
    const Post* root = nullptr;
    for (const Post& p : posts) {
        if (p.id == j) {
            target = &p;
        }
        if (!p.parent) {
            root = &p;
        }
    }
    auto dist_from_j = bfs_distances(posts, j);

    VisionOracle oracle;
    double sum = 0;
    std::size_t count = 0;
    for (const Post& p : posts) {
        if (p.author != author || p.id == j || p.created_at <= target->created_at) {
            continue;
        }
        sum += std::pow(reply_base, dist_from_j.at(p.id) - 1);
        ++count;
    }
    oracle.zeta = count == 0 ? 0.0 : sum / static_cast<double>(count);

    int root_dist = bfs_distances(posts, root->id).at(j);
    oracle.theta = root_dist == 0 ? 1.0 : std::pow(root_base, root_dist - 1);
    oracle.combined = oracle.zeta + oracle.theta - oracle.zeta * oracle.theta;
    return oracle;
}

// Simple directed graph as adjacency sets over 0..n-1.
struct Digraph {
    std::size_t n = 0;
    std::set<std::pair<int, int>> edges;
};

inline Digraph random_digraph(std::mt19937_64& gen, std::size_t max_nodes, double edge_prob) {
    Digraph g;
    g.n = 1 + gen() % max_nodes;
    for (int a = 0; a < static_cast<int>(g.n); ++a) {
        for (int b = 0; b < static_cast<int>(g.n); ++b) {
            if (a != b &&
                static_cast<double>(gen() >> 11) * 0x1.0p-53 < edge_prob) {
                g.edges.insert({a, b});
            }
        }
    }
    return g;
}

// Betweenness straight from the definition: enumerate every simple path per
// ordered pair, keep the shortest ones, and credit interior nodes with
// sigma_st(v)/sigma_st. Exponential, fine for n <= 8.
inline std::vector<double> betweenness_oracle(const Digraph& g) {
    const int n = static_cast<int>(g.n);
    std::vector<std::vector<int>> adjacency(g.n);
    for (auto [a, b] : g.edges) {
        adjacency[static_cast<std::size_t>(a)].push_back(b);
    }
    std::vector<double> score(g.n, 0.0);
    std::vector<int> path;
    std::vector<char> used(g.n, 0);
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (s == t) {
                continue;
            }
            int best = n + 1;
            long long total = 0;
            std::vector<long long> through(g.n, 0);
            path.assign(1, s);
            std::fill(used.begin(), used.end(), 0);
            used[static_cast<std::size_t>(s)] = 1;
            auto dfs = [&](auto&& self, int cur) -> void {
                if (cur == t) {
                    int len = static_cast<int>(path.size()) - 1;
                    if (len < best) {
                        best = len;
                        total = 0;
                        std::fill(through.begin(), through.end(), 0);
                    }
                    if (len == best) {
                        ++total;
                        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                            ++through[static_cast<std::size_t>(path[i])];
                        }
                    }
                    return;
                }
                if (static_cast<int>(path.size()) - 1 >= best) {
                    return; // any extension is longer than the best found
                }
                for (int next : adjacency[static_cast<std::size_t>(cur)]) {
                    if (used[static_cast<std::size_t>(next)]) {
                        continue;
                    }
                    used[static_cast<std::size_t>(next)] = 1;
                    path.push_back(next);
                    self(self, next);
                    path.pop_back();
                    used[static_cast<std::size_t>(next)] = 0;
                }
            };
            dfs(dfs, s);
            if (total > 0) {
                for (int v = 0; v < n; ++v) {
                    if (v != s && v != t) {
                        score[static_cast<std::size_t>(v)] +=
                            static_cast<double>(through[static_cast<std::size_t>(v)]) /
                            static_cast<double>(total);
                    }
                }
            }
        }
    }
    return score;
}

// Harmonic closeness from per-source BFS over the explicit edge set.
inline std::vector<double> closeness_oracle(const Digraph& g) {
    std::vector<std::vector<int>> adjacency(g.n);
    for (auto [a, b] : g.edges) {
        adjacency[static_cast<std::size_t>(a)].push_back(b);
    }
    std::vector<double> score(g.n, 0.0);
    for (std::size_t s = 0; s < g.n; ++s) {
        std::vector<int> dist(g.n, -1);
        dist[s] = 0;
        std::deque<int> queue{static_cast<int>(s)};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : adjacency[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (std::size_t u = 0; u < g.n; ++u) {
            if (u != s && dist[u] > 0) {
                score[s] += 1.0 / dist[u];
            }
        }
    }
    return score;
}

// Names nodes n000.. so the digraph maps onto an AuthorGraph with identical
// index order.
inline convoscope::AuthorGraph to_author_graph(const Digraph& g) {
    convoscope::AuthorGraph graph;
    for (std::size_t i = 0; i < g.n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "n%03zu", i);
        graph.nodes.emplace_back(buf);
    }
    graph.out.assign(g.n, {});
    graph.in.assign(g.n, {});
    for (auto [a, b] : g.edges) {
        graph.out[static_cast<std::size_t>(a)].push_back(b);
        graph.in[static_cast<std::size_t>(b)].push_back(a);
        graph.edge_weights[{a, b}] = 1;
    }
    return graph;
}

} // namespace testsupport

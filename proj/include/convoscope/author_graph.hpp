#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "convoscope/model.hpp"

namespace convoscope {

// Directed interaction graph: authors as nodes, an edge A -> B whenever A
// replied to a post by B. Simple graph; reply multiplicity lives in weights.
// Self-replies create no edge. Centralities run on the unweighted graph.
struct AuthorGraph {
    std::vector<AuthorId> nodes; // sorted, defines node indices
    std::vector<std::vector<std::int32_t>> out; // unique targets, ascending
    std::vector<std::vector<std::int32_t>> in;  // unique sources, ascending
    std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> edge_weights;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edge_weights.size(); }
    std::optional<std::size_t> index_of(const AuthorId& author) const;
    int max_out_degree() const;
};

AuthorGraph derive_author_graph(const Conversation& conv);

// Directed shortest-path betweenness, Brandes' accumulation, unnormalized
// pair-dependency sums.
std::map<AuthorId, double> betweenness(const AuthorGraph& g);

// Harmonic closeness on outgoing distances: sum over u != v of 1/d(v, u),
// with unreachable nodes contributing 0. Well defined on disconnected graphs.
std::map<AuthorId, double> closeness(const AuthorGraph& g);

struct KatzConfig {
    std::optional<double> alpha; // default: 0.9 / max(1, max out-degree)
    double beta = 1.0;
    double tol = 1e-10;
    int max_iter = 10000;
};

// Fixed point of x = alpha * A^T x + beta * 1 by iterative refinement,
// normalized to unit Euclidean norm. Throws InvalidAlpha for alpha <= 0 and
// NoConvergence when max_iter is exhausted.
std::map<AuthorId, double> katz(const AuthorGraph& g, const KatzConfig& cfg = {});

// Unnormalized fixed point, exposed so callers can check the residual
// ||x - alpha*A^T x - beta*1||_inf directly.
std::vector<double> katz_raw(const AuthorGraph& g, const KatzConfig& cfg = {});

double katz_default_alpha(const AuthorGraph& g);

struct CentralityScores {
    std::map<AuthorId, double> betweenness;
    std::map<AuthorId, double> closeness;
    std::map<AuthorId, double> katz;
};

CentralityScores centralities(const AuthorGraph& g, const KatzConfig& cfg = {});

} // namespace convoscope

#pragma once

#include <cstddef>

#include "convoscope/model.hpp"

namespace convoscope {

struct TreeMetrics {
    std::size_t size = 0;
    int depth = 0;               // edges on the longest root-to-leaf path
    double branching_factor = 0; // mean children over internal nodes, 0 for a single post
    int root_out_degree = 0;
    double root_dominance = 0;   // share of posts written by the root author
};

int depth(const Conversation& conv);
double branching_factor(const Conversation& conv);
double root_dominance(const Conversation& conv);
int root_out_degree(const Conversation& conv);
TreeMetrics tree_metrics(const Conversation& conv);

// Edges on the unique undirected tree path between two posts. Uses
// parent-pointer walks from the precomputed depths (trees stay shallow).
int path_distance(const Conversation& conv, const PostId& a, const PostId& b);
int path_distance_by_index(const Conversation& conv, std::size_t a, std::size_t b);

} // namespace convoscope

#include "convoscope/tree_metrics.hpp"

#include <algorithm>

namespace convoscope {

int depth(const Conversation& conv) {
    int max_depth = 0;
    for (std::size_t i = 0; i < conv.size(); ++i) {
        max_depth = std::max(max_depth, static_cast<int>(conv.depth_of(i)));
    }
    return max_depth;
}

double branching_factor(const Conversation& conv) {
    if (conv.size() <= 1) {
        return 0.0;
    }
    std::size_t internal = 0;
    for (std::size_t i = 0; i < conv.size(); ++i) {
        if (!conv.children_of(i).empty()) {
            ++internal;
        }
    }
    return static_cast<double>(conv.size() - 1) / static_cast<double>(internal);
}

double root_dominance(const Conversation& conv) {
    const AuthorId& root_author = conv.root().author;
    std::size_t by_root = 0;
    for (const Post& p : conv.posts()) {
        if (p.author == root_author) {
            ++by_root;
        }
    }
    return static_cast<double>(by_root) / static_cast<double>(conv.size());
}

int root_out_degree(const Conversation& conv) {
    return static_cast<int>(conv.children_of(conv.root_index()).size());
}

TreeMetrics tree_metrics(const Conversation& conv) {
    TreeMetrics m;
    m.size = conv.size();
    m.depth = depth(conv);
    m.branching_factor = branching_factor(conv);
    m.root_out_degree = root_out_degree(conv);
    m.root_dominance = root_dominance(conv);
    return m;
}

int path_distance_by_index(const Conversation& conv, std::size_t a, std::size_t b) {
    int da = conv.depth_of(a);
    int db = conv.depth_of(b);
    int dist = 0;
    while (da > db) {
        a = static_cast<std::size_t>(conv.parent_index(a));
        --da;
        ++dist;
    }
    while (db > da) {
        b = static_cast<std::size_t>(conv.parent_index(b));
        --db;
        ++dist;
    }
    while (a != b) {
        a = static_cast<std::size_t>(conv.parent_index(a));
        b = static_cast<std::size_t>(conv.parent_index(b));
        dist += 2;
    }
    return dist;
}

int path_distance(const Conversation& conv, const PostId& a, const PostId& b) {
    return path_distance_by_index(conv, conv.index_of(a), conv.index_of(b));
}

} // namespace convoscope

#include "convoscope/vision.hpp"

#include <algorithm>
#include <cmath>

#include "convoscope/tree_metrics.hpp"

namespace convoscope {

void DecayConfig::validate() const {
    if (!(reply_base > 0.0 && reply_base <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "reply decay base must lie in (0, 1]");
    }
    if (!(root_base > 0.0 && root_base <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "root decay base must lie in (0, 1]");
    }
}

namespace {

// Evidence posts are the author's posts strictly later than j, in canonical
// order. Canonical post order is (created_at, id), so a simple index scan
// with a timestamp check gives a fixed summation order.
double zeta_over_indices(const Conversation& conv, std::size_t j,
                         const std::vector<std::size_t>& author_posts,
                         const DecayConfig& cfg) {
    const std::int64_t t_j = conv.post(j).created_at;
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t i : author_posts) {
        if (conv.post(i).created_at <= t_j || i == j) {
            continue;
        }
        int dist = path_distance_by_index(conv, j, i);
        sum += std::pow(cfg.reply_base, dist - 1);
        ++count;
    }
    if (count == 0) {
        return 0.0;
    }
    if (cfg.zeta_aggregation == ZetaAggregation::CappedSum) {
        return std::min(1.0, sum);
    }
    return sum / static_cast<double>(count);
}

std::vector<std::size_t> posts_by_author(const Conversation& conv, const AuthorId& author) {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < conv.size(); ++i) {
        if (conv.post(i).author == author) {
            indices.push_back(i);
        }
    }
    return indices;
}

} // namespace

double zeta_at(const Conversation& conv, const AuthorId& author, std::size_t j,
               const DecayConfig& cfg) {
    return zeta_over_indices(conv, j, posts_by_author(conv, author), cfg);
}

double zeta(const Conversation& conv, const AuthorId& author, const PostId& j,
            const DecayConfig& cfg) {
    cfg.validate();
    return zeta_at(conv, author, conv.index_of(j), cfg);
}

double theta_at(const Conversation& conv, std::size_t j, const DecayConfig& cfg) {
    int dist = conv.depth_of(j);
    if (dist == 0) {
        return 1.0;
    }
    return std::pow(cfg.root_base, dist - 1);
}

double theta(const Conversation& conv, const PostId& j, const DecayConfig& cfg) {
    cfg.validate();
    return theta_at(conv, conv.index_of(j), cfg);
}

double combine(double zeta_score, double theta_score, UnionRule rule) {
    if (rule == UnionRule::Max) {
        return std::max(zeta_score, theta_score);
    }
    double u = zeta_score + theta_score - zeta_score * theta_score;
    // rounding can miss the union bounds by an ulp; pin them
    u = std::max(u, std::max(zeta_score, theta_score));
    return std::min(u, 1.0);
}

VisionScore seen_probability(const Conversation& conv, const AuthorId& author,
                             const PostId& j, const DecayConfig& cfg) {
    cfg.validate();
    std::size_t index = conv.index_of(j);
    VisionScore score;
    score.zeta = zeta_at(conv, author, index, cfg);
    score.theta = theta_at(conv, index, cfg);
    score.combined = combine(score.zeta, score.theta, cfg.union_rule);
    return score;
}

namespace {

double baseline_over_indices(const Conversation& conv,
                             const std::vector<std::size_t>& author_posts,
                             const AuthorId& author, const DecayConfig& cfg) {
    double sum = 0;
    std::size_t others = 0;
    for (std::size_t j = 0; j < conv.size(); ++j) {
        if (conv.post(j).author == author) {
            continue;
        }
        double z = zeta_over_indices(conv, j, author_posts, cfg);
        double t = theta_at(conv, j, cfg);
        sum += combine(z, t, cfg.union_rule);
        ++others;
    }
    if (others == 0) {
        return 1.0; // nothing external to see
    }
    return sum / static_cast<double>(others);
}

} // namespace

double author_baseline_vision(const Conversation& conv, const AuthorId& author,
                              const DecayConfig& cfg) {
    cfg.validate();
    std::vector<std::size_t> own = posts_by_author(conv, author);
    if (own.empty()) {
        throw Error(ErrorKind::AuthorNotInConversation,
                    "author '" + author + "' wrote no post in conversation '" + conv.root_id() + "'");
    }
    return baseline_over_indices(conv, own, author, cfg);
}

std::unordered_map<AuthorId, double> baseline_vision_all(const Conversation& conv,
                                                         const DecayConfig& cfg) {
    cfg.validate();
    std::unordered_map<AuthorId, std::vector<std::size_t>> posts_of;
    for (std::size_t i = 0; i < conv.size(); ++i) {
        posts_of[conv.post(i).author].push_back(i);
    }
    std::unordered_map<AuthorId, double> result;
    result.reserve(posts_of.size());
    for (const auto& [author, own] : posts_of) {
        result.emplace(author, baseline_over_indices(conv, own, author, cfg));
    }
    return result;
}

} // namespace convoscope

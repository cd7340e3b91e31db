#pragma once

#include <span>
#include <string>
#include <vector>

#include "convoscope/model.hpp"

namespace convoscope {

// Per-conversation metric bundle; one row of conversations.csv.
struct MetricVector {
    PostId conversation; // root post id
    AuthorId root_author;
    ActorGroup root_group = ActorGroup::Unknown;
    double size = 0;
    double depth = 0;
    double branching_factor = 0;
    double root_dominance = 0;
    double root_author_posts = 0;
    double root_author_baseline_vision = 0;
    double root_author_betweenness = 0;
    double root_author_closeness = 0;
    double root_author_katz = 0;
    double link_share = 0;
    double mention_share = 0;
    double mean_chars = 0;
};

struct MetricField {
    const char* name;
    double MetricVector::* field;
};

// The twelve numeric metrics, in report column order.
std::span<const MetricField> metric_fields();

enum class OutlierMode { None, ZScore, TopN };

struct OutlierPolicy {
    OutlierMode mode = OutlierMode::None;
    double k = 3.0;     // zscore threshold
    std::size_t n = 1;  // top-n count

    static OutlierPolicy parse(std::string_view text); // "none" | "zscore:K" | "top:N"
    std::string to_string() const;
};

struct ExcludedVector {
    MetricVector vector;
    double statistic = 0; // the value that tripped the policy
    std::string reason;
};

// Deterministic partition of conversations into kept and excluded, applied
// per root group on conversation size. The zscore mode compares each
// conversation against the mean and standard deviation of the *other*
// conversations in its group (plain z-scores of n<=4 samples can never reach
// k=3); groups with fewer than 3 conversations are never trimmed.
std::pair<std::vector<MetricVector>, std::vector<ExcludedVector>>
exclude_outliers(std::vector<MetricVector> vectors, const OutlierPolicy& policy);

enum class NormalizeMode { GroupMeans, PerConversation };

struct GroupSummary {
    ActorGroup group = ActorGroup::Unknown;
    std::size_t n_conversations = 0;
    // Aligned with metric_fields(); NaN marks a group without data.
    std::vector<double> mean;
    std::vector<double> median;
    std::vector<double> normalized_mean;
};

// Group means/medians after outlier exclusion, plus min-max normalization.
// GroupMeans normalizes the vector of group means per metric (a degenerate
// range maps every group to 0.5); PerConversation normalizes each metric
// across conversations first and averages the normalized values per group.
std::vector<GroupSummary> summarize(std::span<const MetricVector> vectors,
                                    const OutlierPolicy& policy,
                                    NormalizeMode mode = NormalizeMode::GroupMeans);

// One author's share of a single conversation, produced by the pipeline.
struct AuthorContribution {
    AuthorId author;
    PostId conversation;
    std::size_t posts = 0;
    std::size_t replies = 0;
    double baseline_vision = 0;
    double betweenness = 0;
    double closeness = 0;
    double katz = 0;
    bool is_root_author = false;
};

struct AuthorRollup {
    AuthorId author;
    ActorGroup group = ActorGroup::Unknown;
    std::size_t post_count = 0;
    std::size_t reply_count = 0;
    std::size_t conversations = 0;
    std::size_t conversations_rooted = 0;
    double reply_share = 0;
    double baseline_vision_participant = 0; // mean over all conversations joined
    double baseline_vision_rooted = 0;      // mean over conversations started (NaN if none)
    double mean_betweenness = 0;
    double mean_closeness = 0;
    double mean_katz = 0;
};

// Corpus-level per-author summary; authors absent from the corpus are
// omitted. Sorted by author id.
std::vector<AuthorRollup> author_level_rollup(std::span<const AuthorContribution> contributions,
                                              const AuthorRegistry& registry);

} // namespace convoscope

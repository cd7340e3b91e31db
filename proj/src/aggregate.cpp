#include "convoscope/aggregate.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace convoscope {

namespace {

constexpr std::array<MetricField, 12> kMetricFields{{
    {"size", &MetricVector::size},
    {"depth", &MetricVector::depth},
    {"branching_factor", &MetricVector::branching_factor},
    {"root_dominance", &MetricVector::root_dominance},
    {"root_author_posts", &MetricVector::root_author_posts},
    {"root_author_baseline_vision", &MetricVector::root_author_baseline_vision},
    {"root_author_betweenness", &MetricVector::root_author_betweenness},
    {"root_author_closeness", &MetricVector::root_author_closeness},
    {"root_author_katz", &MetricVector::root_author_katz},
    {"link_share", &MetricVector::link_share},
    {"mention_share", &MetricVector::mention_share},
    {"mean_chars", &MetricVector::mean_chars},
}};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

std::span<const MetricField> metric_fields() {
    return kMetricFields;
}

OutlierPolicy OutlierPolicy::parse(std::string_view text) {
    OutlierPolicy policy;
    if (text == "none") {
        policy.mode = OutlierMode::None;
        return policy;
    }
    auto parse_number = [&](std::string_view num, auto& into) {
        auto end = num.data() + num.size();
        auto result = std::from_chars(num.data(), end, into);
        if (result.ec != std::errc() || result.ptr != end) {
            throw Error(ErrorKind::InvalidConfig, "bad outlier policy '" + std::string(text) + "'");
        }
    };
    if (text.rfind("zscore:", 0) == 0) {
        policy.mode = OutlierMode::ZScore;
        parse_number(text.substr(7), policy.k);
        if (policy.k <= 0) {
            throw Error(ErrorKind::InvalidConfig, "zscore threshold must be positive");
        }
        return policy;
    }
    if (text.rfind("top:", 0) == 0) {
        policy.mode = OutlierMode::TopN;
        parse_number(text.substr(4), policy.n);
        return policy;
    }
    throw Error(ErrorKind::InvalidConfig,
                "outlier policy must be none, zscore:K or top:N, got '" + std::string(text) + "'");
}

std::string OutlierPolicy::to_string() const {
    switch (mode) {
    case OutlierMode::None: return "none";
    case OutlierMode::ZScore: {
        char buf[48];
        std::snprintf(buf, sizeof buf, "zscore:%g", k);
        return buf;
    }
    case OutlierMode::TopN: return "top:" + std::to_string(n);
    }
    return "none";
}

std::pair<std::vector<MetricVector>, std::vector<ExcludedVector>>
exclude_outliers(std::vector<MetricVector> vectors, const OutlierPolicy& policy) {
    std::vector<ExcludedVector> excluded;
    if (policy.mode == OutlierMode::None || vectors.empty()) {
        return {std::move(vectors), std::move(excluded)};
    }

    std::sort(vectors.begin(), vectors.end(), [](const MetricVector& a, const MetricVector& b) {
        return a.conversation < b.conversation;
    });
    std::map<ActorGroup, std::vector<std::size_t>> by_group;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        by_group[vectors[i].root_group].push_back(i);
    }

    std::vector<char> drop(vectors.size(), 0);
    std::vector<double> statistic(vectors.size(), 0);
    std::vector<std::string> reason(vectors.size());

    for (auto& [group, members] : by_group) {
        if (policy.mode == OutlierMode::TopN) {
            if (members.size() <= policy.n) {
                continue; // never empty a group entirely
            }
            auto sorted = members;
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                if (vectors[a].size != vectors[b].size) {
                    return vectors[a].size > vectors[b].size;
                }
                return vectors[a].conversation < vectors[b].conversation;
            });
            for (std::size_t rank = 0; rank < policy.n; ++rank) {
                std::size_t i = sorted[rank];
                drop[i] = 1;
                statistic[i] = vectors[i].size;
                reason[i] = "top:" + std::to_string(rank + 1) + " largest in group";
            }
            continue;
        }

        // zscore, leave-one-out
        if (members.size() < 3) {
            continue;
        }
        double total = 0;
        double total_sq = 0;
        for (std::size_t i : members) {
            total += vectors[i].size;
            total_sq += vectors[i].size * vectors[i].size;
        }
        double m = static_cast<double>(members.size());
        for (std::size_t i : members) {
            double x = vectors[i].size;
            double rest_mean = (total - x) / (m - 1);
            double rest_var = (total_sq - x * x) / (m - 1) - rest_mean * rest_mean;
            double rest_std = std::sqrt(std::max(0.0, rest_var));
            // Floor of one post keeps a zero-variance rest from flagging
            // everything.
            double z = std::abs(x - rest_mean) / std::max(rest_std, 1.0);
            if (z > policy.k) {
                drop[i] = 1;
                statistic[i] = z;
                char buf[64];
                std::snprintf(buf, sizeof buf, "zscore %.3f > %g", z, policy.k);
                reason[i] = buf;
            }
        }
    }

    std::vector<MetricVector> kept;
    kept.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (drop[i]) {
            excluded.push_back({std::move(vectors[i]), statistic[i], std::move(reason[i])});
        } else {
            kept.push_back(std::move(vectors[i]));
        }
    }
    return {std::move(kept), std::move(excluded)};
}

namespace {

double median_of(std::vector<double> values) {
    if (values.empty()) {
        return kNaN;
    }
    std::sort(values.begin(), values.end());
    std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return (values[mid - 1] + values[mid]) / 2.0;
}

std::vector<ActorGroup> report_groups(std::span<const MetricVector> vectors) {
    std::vector<ActorGroup> groups(std::begin(kCanonicalGroups), std::end(kCanonicalGroups));
    for (const MetricVector& v : vectors) {
        if (v.root_group == ActorGroup::Unknown) {
            groups.push_back(ActorGroup::Unknown);
            break;
        }
    }
    return groups;
}

} // namespace

std::vector<GroupSummary> summarize(std::span<const MetricVector> vectors,
                                    const OutlierPolicy& policy, NormalizeMode mode) {
    std::vector<MetricVector> input(vectors.begin(), vectors.end());
    auto [kept, excluded] = exclude_outliers(std::move(input), policy);
    // Sorted input makes every accumulation order canonical.
    std::sort(kept.begin(), kept.end(), [](const MetricVector& a, const MetricVector& b) {
        return a.conversation < b.conversation;
    });

    const auto fields = metric_fields();
    std::vector<ActorGroup> groups = report_groups(kept);

    std::vector<GroupSummary> summaries;
    summaries.reserve(groups.size());
    for (ActorGroup group : groups) {
        GroupSummary summary;
        summary.group = group;
        summary.mean.assign(fields.size(), kNaN);
        summary.median.assign(fields.size(), kNaN);
        summary.normalized_mean.assign(fields.size(), kNaN);
        std::vector<const MetricVector*> members;
        for (const MetricVector& v : kept) {
            if (v.root_group == group) {
                members.push_back(&v);
            }
        }
        summary.n_conversations = members.size();
        if (!members.empty()) {
            for (std::size_t f = 0; f < fields.size(); ++f) {
                std::vector<double> values;
                values.reserve(members.size());
                double sum = 0;
                for (const MetricVector* v : members) {
                    double value = v->*(fields[f].field);
                    values.push_back(value);
                    sum += value;
                }
                summary.mean[f] = sum / static_cast<double>(members.size());
                summary.median[f] = median_of(std::move(values));
            }
        }
        summaries.push_back(std::move(summary));
    }

    if (mode == NormalizeMode::GroupMeans) {
        for (std::size_t f = 0; f < fields.size(); ++f) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            for (const GroupSummary& s : summaries) {
                if (!std::isnan(s.mean[f])) {
                    lo = std::min(lo, s.mean[f]);
                    hi = std::max(hi, s.mean[f]);
                }
            }
            for (GroupSummary& s : summaries) {
                if (std::isnan(s.mean[f])) {
                    continue;
                }
                s.normalized_mean[f] = hi > lo ? (s.mean[f] - lo) / (hi - lo) : 0.5;
            }
        }
    } else {
        // Normalize every conversation first, then average per group.
        for (std::size_t f = 0; f < fields.size(); ++f) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            for (const MetricVector& v : kept) {
                double value = v.*(fields[f].field);
                lo = std::min(lo, value);
                hi = std::max(hi, value);
            }
            for (GroupSummary& s : summaries) {
                if (s.n_conversations == 0) {
                    continue;
                }
                double sum = 0;
                for (const MetricVector& v : kept) {
                    if (v.root_group != s.group) {
                        continue;
                    }
                    double value = v.*(fields[f].field);
                    sum += hi > lo ? (value - lo) / (hi - lo) : 0.5;
                }
                s.normalized_mean[f] = sum / static_cast<double>(s.n_conversations);
            }
        }
    }
    return summaries;
}

std::vector<AuthorRollup> author_level_rollup(std::span<const AuthorContribution> contributions,
                                              const AuthorRegistry& registry) {
    std::map<AuthorId, std::vector<const AuthorContribution*>> by_author;
    for (const AuthorContribution& c : contributions) {
        by_author[c.author].push_back(&c);
    }
    std::vector<AuthorRollup> rollups;
    rollups.reserve(by_author.size());
    for (auto& [author, items] : by_author) {
        std::sort(items.begin(), items.end(),
                  [](const AuthorContribution* a, const AuthorContribution* b) {
                      return a->conversation < b->conversation;
                  });
        AuthorRollup rollup;
        rollup.author = author;
        rollup.group = registry.group_of(author);
        double vision_sum = 0;
        double vision_rooted_sum = 0;
        double betweenness_sum = 0;
        double closeness_sum = 0;
        double katz_sum = 0;
        for (const AuthorContribution* c : items) {
            rollup.post_count += c->posts;
            rollup.reply_count += c->replies;
            ++rollup.conversations;
            vision_sum += c->baseline_vision;
            betweenness_sum += c->betweenness;
            closeness_sum += c->closeness;
            katz_sum += c->katz;
            if (c->is_root_author) {
                ++rollup.conversations_rooted;
                vision_rooted_sum += c->baseline_vision;
            }
        }
        double n = static_cast<double>(rollup.conversations);
        rollup.reply_share = rollup.post_count > 0
                                 ? static_cast<double>(rollup.reply_count) /
                                       static_cast<double>(rollup.post_count)
                                 : 0.0;
        rollup.baseline_vision_participant = vision_sum / n;
        rollup.baseline_vision_rooted =
            rollup.conversations_rooted > 0
                ? vision_rooted_sum / static_cast<double>(rollup.conversations_rooted)
                : kNaN;
        rollup.mean_betweenness = betweenness_sum / n;
        rollup.mean_closeness = closeness_sum / n;
        rollup.mean_katz = katz_sum / n;
        rollups.push_back(std::move(rollup));
    }
    return rollups;
}

} // namespace convoscope

#pragma once

#include <unordered_map>

#include "convoscope/model.hpp"

namespace convoscope {

enum class UnionRule { Independent, Max };
enum class ZetaAggregation { Mean, CappedSum };

struct DecayConfig {
    double reply_base = 0.5; // decay base over reply-path distance
    double root_base = 0.25; // decay base over root distance
    UnionRule union_rule = UnionRule::Independent;
    ZetaAggregation zeta_aggregation = ZetaAggregation::Mean;

    void validate() const; // throws InvalidConfig unless both bases in (0, 1]
};

struct VisionScore {
    double zeta = 0;
    double theta = 0;
    double combined = 0;
};

// Probability that `author` saw post `j`, inferred from the reply-path
// distances of the author's strictly later posts. Terms decay as
// reply_base^(distance - 1); the default aggregation is the arithmetic mean
// over the evidence set, CappedSum sums the terms and clips at 1.
double zeta(const Conversation& conv, const AuthorId& author, const PostId& j,
            const DecayConfig& cfg = {});

// Visibility of post `j` from its root distance: root_base^(distance - 1).
// The root itself scores 1.0 (it holds the dominant visual position).
double theta(const Conversation& conv, const PostId& j, const DecayConfig& cfg = {});

// Union of the two evidence channels. Independent: z + t - z*t; Max: max(z, t).
double combine(double zeta_score, double theta_score, UnionRule rule);

VisionScore seen_probability(const Conversation& conv, const AuthorId& author,
                             const PostId& j, const DecayConfig& cfg = {});

// Mean combined seen-probability over every post the author did not write.
// 1.0 by convention when the author wrote every post. Throws
// AuthorNotInConversation if the author has no post in the tree.
double author_baseline_vision(const Conversation& conv, const AuthorId& author,
                              const DecayConfig& cfg = {});

// Baseline vision for every distinct author in the conversation; one pass,
// same values as calling author_baseline_vision per author.
std::unordered_map<AuthorId, double> baseline_vision_all(const Conversation& conv,
                                                         const DecayConfig& cfg = {});

// Index-addressed variants used on hot paths.
double zeta_at(const Conversation& conv, const AuthorId& author, std::size_t j,
               const DecayConfig& cfg);
double theta_at(const Conversation& conv, std::size_t j, const DecayConfig& cfg);

} // namespace convoscope

#pragma once

#include <span>
#include <string_view>

#include "convoscope/model.hpp"

namespace convoscope {

struct TextStats {
    std::size_t post_count = 0;
    double link_share = 0;    // posts with at least one url / post_count
    double mention_share = 0; // posts with at least one mention / post_count
    double mean_chars = 0;    // mean unicode scalar count of text
};

TextStats text_stats(std::span<const Post> posts); // throws EmptyInput

// Weighted combination; merging disjoint sets equals computing on the union.
TextStats merge(const TextStats& a, const TextStats& b);

// Unicode scalar values, not bytes. Counts every non-continuation byte, so
// malformed sequences degrade gracefully instead of throwing.
std::size_t utf8_length(std::string_view text);

} // namespace convoscope

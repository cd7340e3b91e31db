#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "convoscope/model.hpp"

namespace convoscope {

struct FilterConfig {
    std::size_t min_posts = 6; // "longer than 5 posts"
    std::vector<std::string> keywords; // lowercase; empty disables the filter
    bool require_root_in_registry = true;
    bool extract_urls = true;
    bool extract_mentions = true;

    void validate() const; // throws InvalidConfig
};

struct CorpusStats {
    std::size_t conversations_read = 0;
    std::size_t conversations_kept = 0;
    std::size_t posts_read = 0;
    std::size_t posts_kept = 0;
    std::size_t authors_excluded = 0; // registry authors rooting no kept conversation
    std::size_t duplicate_lines_dropped = 0;
    std::size_t repaired_posts = 0;
    std::map<std::string, std::size_t> drop_reasons;
};

// Conversation-level drop reason keys, in filter precedence order.
inline constexpr const char* kDropRootNotInRegistry = "root_not_in_registry";
inline constexpr const char* kDropBelowMinPosts = "below_min_posts";
inline constexpr const char* kDropNoKeywordMatch = "no_keyword_match";

struct TextFeatures {
    std::vector<std::string> urls;
    std::vector<AuthorId> mentions;
};

// urls: maximal http(s)://... runs of non-whitespace with trailing
// punctuation trimmed. mentions: @handle tokens (1-15 word characters) not
// preceded by a word character; handles inside extracted urls are skipped.
TextFeatures extract_text_features(std::string_view text);

// Case-insensitive (ASCII) whole-word substring match against lowercase
// keywords. Non-ASCII bytes act as word boundaries.
bool keyword_match(std::string_view text, std::span<const std::string> keywords);

// CSV with header author_id,group,language. Duplicate ids are an error; a
// header-only file yields an empty registry.
AuthorRegistry load_author_registry(const std::filesystem::path& path);

// One keyword per line, lowercased on load, '#' starts a comment.
std::vector<std::string> load_keywords(const std::filesystem::path& path);

struct LoadResult {
    std::vector<Conversation> conversations; // sorted by root post id
    CorpusStats stats;
    std::vector<RepairRecord> repairs;
    std::vector<std::string> warnings;
    // Root post id -> the conversation_id the posts were grouped under.
    std::map<PostId, std::string> group_keys;
};

// Reads a line-delimited corpus (one JSON post per line), groups posts by
// conversation_id, builds reply trees, applies the sampling restrictions.
LoadResult load_corpus(const std::filesystem::path& path, const AuthorRegistry& registry,
                       const FilterConfig& filter, OrphanPolicy policy = OrphanPolicy::Strict);

// JSON codec for a single post record; exposed for round-trip tests and synth.
Post parse_post_json(std::string_view line, std::string* conversation_id,
                     const FilterConfig& filter);
std::string post_to_json(const Post& post, const std::string& conversation_id);

} // namespace convoscope

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "convoscope/error.hpp"

namespace convoscope {

using PostId = std::string;
using AuthorId = std::string;

enum class ActorGroup {
    Politician,
    Activist,
    Scientist,
    GovernmentalOrg,
    NonGovernmentalOrg,
    Journalist,
    Unknown,
};

// The six labels accepted in registry files, in report order.
inline constexpr ActorGroup kCanonicalGroups[] = {
    ActorGroup::Politician,      ActorGroup::Activist,
    ActorGroup::Scientist,       ActorGroup::GovernmentalOrg,
    ActorGroup::NonGovernmentalOrg, ActorGroup::Journalist,
};

const char* to_string(ActorGroup group);
std::optional<ActorGroup> parse_actor_group(std::string_view label);

struct AuthorRecord {
    AuthorId author;
    ActorGroup group = ActorGroup::Unknown;
    std::string language; // e.g. "de", "en"
};

// One record per author id; lookups for unknown authors yield ActorGroup::Unknown.
class AuthorRegistry {
public:
    void add(AuthorRecord record); // throws DuplicateAuthor
    bool contains(const AuthorId& author) const;
    ActorGroup group_of(const AuthorId& author) const;
    const AuthorRecord* find(const AuthorId& author) const;

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const std::vector<AuthorRecord>& records() const { return records_; }

private:
    std::vector<AuthorRecord> records_;
    std::unordered_map<AuthorId, std::size_t> index_;
};

struct Post {
    PostId id;
    std::optional<PostId> parent; // absent iff conversation root
    AuthorId author;
    std::int64_t created_at = 0; // unix seconds, UTC
    std::string text;
    std::vector<std::string> urls;
    std::vector<AuthorId> mentions;

    bool is_reply() const { return parent.has_value(); }
    bool operator==(const Post& other) const = default;
};

enum class OrphanPolicy { Strict, Lenient };

struct RepairRecord {
    PostId post;
    std::string action;
};

// Lenient-mode repairs and non-fatal anomalies found while building a tree.
struct BuildReport {
    std::vector<RepairRecord> repairs;
    std::vector<std::string> warnings;
    std::size_t rejected_posts = 0; // strict-mode orphan drops
};

// A validated reply tree. Immutable after construction; safe to share across
// threads. Posts are held in canonical (created_at, id) order and children
// lists inherit that order.
class Conversation {
public:
    static Conversation build(std::vector<Post> posts,
                              OrphanPolicy policy = OrphanPolicy::Strict,
                              BuildReport* report = nullptr);

    std::size_t size() const { return posts_.size(); }
    const std::vector<Post>& posts() const { return posts_; }
    const Post& post(std::size_t index) const { return posts_[index]; }

    std::size_t root_index() const { return root_; }
    const Post& root() const { return posts_[root_]; }
    const PostId& root_id() const { return posts_[root_].id; }

    bool contains(const PostId& id) const { return index_.count(id) != 0; }
    std::size_t index_of(const PostId& id) const; // throws UnknownPost

    // -1 for the root.
    std::int32_t parent_index(std::size_t index) const { return parent_[index]; }
    std::int32_t depth_of(std::size_t index) const { return depth_[index]; }
    const std::vector<std::int32_t>& children_of(std::size_t index) const {
        return children_[index];
    }

private:
    Conversation() = default;

    std::vector<Post> posts_;
    std::size_t root_ = 0;
    std::vector<std::int32_t> parent_;
    std::vector<std::int32_t> depth_;
    std::vector<std::vector<std::int32_t>> children_;
    std::unordered_map<PostId, std::size_t> index_;
};

// Spec-facing alias for Conversation::build.
Conversation build_conversation(std::vector<Post> posts,
                                OrphanPolicy policy = OrphanPolicy::Strict,
                                BuildReport* report = nullptr);

// Timestamp helpers (ISO-8601, UTC, second precision).
std::int64_t parse_timestamp(std::string_view iso8601); // throws ParseError
std::string format_timestamp(std::int64_t unix_seconds);

} // namespace convoscope

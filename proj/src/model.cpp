#include "convoscope/model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace convoscope {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParseError: return "parse error";
    case ErrorKind::IoError: return "io error";
    case ErrorKind::InvalidConfig: return "invalid config";
    case ErrorKind::DuplicatePostId: return "duplicate post id";
    case ErrorKind::DuplicateAuthor: return "duplicate author";
    case ErrorKind::NoRoot: return "no root";
    case ErrorKind::CycleDetected: return "cycle detected";
    case ErrorKind::UnknownPost: return "unknown post";
    case ErrorKind::UnknownConversation: return "unknown conversation";
    case ErrorKind::AuthorNotInConversation: return "author not in conversation";
    case ErrorKind::EmptyInput: return "empty input";
    case ErrorKind::InvalidAlpha: return "invalid alpha";
    case ErrorKind::NoConvergence: return "no convergence";
    case ErrorKind::NoConversations: return "no conversations";
    }
    return "error";
}

const char* to_string(ActorGroup group) {
    switch (group) {
    case ActorGroup::Politician: return "politician";
    case ActorGroup::Activist: return "activist";
    case ActorGroup::Scientist: return "scientist";
    case ActorGroup::GovernmentalOrg: return "governmental_org";
    case ActorGroup::NonGovernmentalOrg: return "ngo";
    case ActorGroup::Journalist: return "journalist";
    case ActorGroup::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<ActorGroup> parse_actor_group(std::string_view label) {
    for (ActorGroup g : kCanonicalGroups) {
        if (label == to_string(g)) {
            return g;
        }
    }
    if (label == "unknown") {
        return ActorGroup::Unknown;
    }
    return std::nullopt;
}

void AuthorRegistry::add(AuthorRecord record) {
    auto [it, inserted] = index_.emplace(record.author, records_.size());
    if (!inserted) {
        throw Error(ErrorKind::DuplicateAuthor, "author '" + record.author + "' listed twice");
    }
    records_.push_back(std::move(record));
}

bool AuthorRegistry::contains(const AuthorId& author) const {
    return index_.count(author) != 0;
}

ActorGroup AuthorRegistry::group_of(const AuthorId& author) const {
    const AuthorRecord* rec = find(author);
    return rec ? rec->group : ActorGroup::Unknown;
}

const AuthorRecord* AuthorRegistry::find(const AuthorId& author) const {
    auto it = index_.find(author);
    return it == index_.end() ? nullptr : &records_[it->second];
}

std::size_t Conversation::index_of(const PostId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw Error(ErrorKind::UnknownPost, "post '" + id + "' not in conversation");
    }
    return it->second;
}

namespace {

bool earlier(const Post& a, const Post& b) {
    if (a.created_at != b.created_at) {
        return a.created_at < b.created_at;
    }
    return a.id < b.id;
}

} // namespace

Conversation Conversation::build(std::vector<Post> posts, OrphanPolicy policy,
                                 BuildReport* report) {
    if (posts.empty()) {
        throw Error(ErrorKind::EmptyInput, "cannot build a conversation from zero posts");
    }
    BuildReport local;
    BuildReport& rep = report ? *report : local;

    // Canonical order first so every later step is input-order independent.
    std::sort(posts.begin(), posts.end(),
              [](const Post& a, const Post& b) { return earlier(a, b); });

    std::unordered_map<PostId, std::size_t> index;
    index.reserve(posts.size());
    for (std::size_t i = 0; i < posts.size(); ++i) {
        auto [it, inserted] = index.emplace(posts[i].id, i);
        if (!inserted) {
            throw Error(ErrorKind::DuplicatePostId, "post id '" + posts[i].id + "' appears twice");
        }
    }

    std::vector<std::size_t> parentless;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        if (!posts[i].parent) {
            parentless.push_back(i);
        }
    }

    if (parentless.size() != 1) {
        if (policy == OrphanPolicy::Strict) {
            throw Error(ErrorKind::NoRoot,
                        parentless.empty()
                            ? "no parentless post in conversation"
                            : std::to_string(parentless.size()) + " parentless posts in conversation");
        }
        // Lenient: the earliest post becomes the root; any other parentless
        // post is attached to it.
        std::size_t root = 0;
        for (std::size_t i = 1; i < posts.size(); ++i) {
            if (earlier(posts[i], posts[root])) {
                root = i;
            }
        }
        if (posts[root].parent) {
            rep.repairs.push_back({posts[root].id, "promoted to root"});
            posts[root].parent.reset();
        }
        for (std::size_t i : parentless) {
            if (i != root) {
                rep.repairs.push_back({posts[i].id, "reparented to root (extra parentless post)"});
                posts[i].parent = posts[root].id;
            }
        }
        parentless.assign(1, root);
    }
    std::size_t root = parentless.front();

    // Orphans: parent id not present in the post set. Strict drops the whole
    // dangling subtree, lenient hangs it off the root.
    for (;;) {
        // Resolve reachability by walking parent chains with memoization.
        std::vector<char> state(posts.size(), 0); // 0 unknown, 1 visiting, 2 done
        state[root] = 2;
        enum Fate { Ok, Orphan, Cycle };
        std::vector<Fate> fate(posts.size(), Ok);
        for (std::size_t i = 0; i < posts.size(); ++i) {
            if (state[i] == 2) {
                continue;
            }
            std::vector<std::size_t> chain;
            std::size_t cur = i;
            Fate result = Ok;
            while (true) {
                if (state[cur] == 2) {
                    result = fate[cur];
                    break;
                }
                if (state[cur] == 1) {
                    result = Cycle;
                    break;
                }
                state[cur] = 1;
                chain.push_back(cur);
                if (!posts[cur].parent) {
                    result = Ok;
                    break;
                }
                auto it = index.find(*posts[cur].parent);
                if (it == index.end()) {
                    result = Orphan;
                    break;
                }
                cur = it->second;
            }
            for (std::size_t node : chain) {
                state[node] = 2;
                fate[node] = result;
            }
        }

        std::size_t first_orphan = posts.size();
        std::size_t first_cycle = posts.size();
        for (std::size_t i = 0; i < posts.size(); ++i) {
            if (fate[i] == Orphan && (first_orphan == posts.size() || earlier(posts[i], posts[first_orphan]))) {
                if (!posts[i].parent || index.find(*posts[i].parent) == index.end()) {
                    first_orphan = i;
                }
            }
            if (fate[i] == Cycle && (first_cycle == posts.size() || earlier(posts[i], posts[first_cycle]))) {
                first_cycle = i;
            }
        }

        if (first_orphan == posts.size() && first_cycle == posts.size()) {
            break;
        }

        if (policy == OrphanPolicy::Strict) {
            if (first_cycle != posts.size()) {
                throw Error(ErrorKind::CycleDetected,
                            "post '" + posts[first_cycle].id + "' is part of a reply cycle");
            }
            // Drop every post whose ancestor chain leaves the set.
            std::vector<Post> kept;
            kept.reserve(posts.size());
            for (std::size_t i = 0; i < posts.size(); ++i) {
                if (fate[i] == Orphan) {
                    rep.repairs.push_back({posts[i].id, "rejected (missing parent)"});
                    ++rep.rejected_posts;
                } else {
                    kept.push_back(std::move(posts[i]));
                }
            }
            posts = std::move(kept);
            index.clear();
            for (std::size_t i = 0; i < posts.size(); ++i) {
                index.emplace(posts[i].id, i);
                if (!posts[i].parent) {
                    root = i; // root survives the drop; re-resolve its index
                }
            }
        } else {
            std::size_t fix = first_orphan != posts.size() ? first_orphan : first_cycle;
            const char* why = first_orphan != posts.size() ? "reparented to root (missing parent)"
                                                           : "reparented to root (reply cycle)";
            rep.repairs.push_back({posts[fix].id, why});
            posts[fix].parent = posts[root].id;
        }
    }

    Conversation conv;
    conv.posts_ = std::move(posts);
    conv.index_.reserve(conv.posts_.size());
    for (std::size_t i = 0; i < conv.posts_.size(); ++i) {
        conv.index_.emplace(conv.posts_[i].id, i);
    }
    conv.parent_.assign(conv.posts_.size(), -1);
    conv.children_.assign(conv.posts_.size(), {});
    for (std::size_t i = 0; i < conv.posts_.size(); ++i) {
        const Post& p = conv.posts_[i];
        if (!p.parent) {
            conv.root_ = i;
            continue;
        }
        auto parent = conv.index_.at(*p.parent);
        conv.parent_[i] = static_cast<std::int32_t>(parent);
        conv.children_[parent].push_back(static_cast<std::int32_t>(i));
        if (p.created_at < conv.posts_[parent].created_at) {
            rep.warnings.push_back("post '" + p.id + "' predates its parent '" + *p.parent + "'");
        }
    }
    // Children are already in canonical order because post indices are.

    conv.depth_.assign(conv.posts_.size(), 0);
    std::vector<std::size_t> queue{conv.root_};
    std::size_t seen = 0;
    while (seen < queue.size()) {
        std::size_t cur = queue[seen++];
        for (std::int32_t child : conv.children_[cur]) {
            conv.depth_[child] = conv.depth_[cur] + 1;
            queue.push_back(static_cast<std::size_t>(child));
        }
    }
    if (seen != conv.posts_.size()) {
        throw Error(ErrorKind::CycleDetected, "conversation is not a connected tree");
    }
    return conv;
}

Conversation build_conversation(std::vector<Post> posts, OrphanPolicy policy,
                                BuildReport* report) {
    return Conversation::build(std::move(posts), policy, report);
}

namespace {

// Howard Hinnant's civil-date algorithms; locale independent.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

int parse_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view what) {
    if (pos + len > text.size()) {
        throw Error(ErrorKind::ParseError, "timestamp too short for " + std::string(what));
    }
    int value = 0;
    auto result = std::from_chars(text.data() + pos, text.data() + pos + len, value);
    if (result.ec != std::errc() || result.ptr != text.data() + pos + len) {
        throw Error(ErrorKind::ParseError, "bad " + std::string(what) + " in timestamp '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

std::int64_t parse_timestamp(std::string_view iso8601) {
    // YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+HH:MM|-HH:MM]
    if (iso8601.size() < 19 || iso8601[4] != '-' || iso8601[7] != '-' ||
        (iso8601[10] != 'T' && iso8601[10] != ' ') || iso8601[13] != ':' || iso8601[16] != ':') {
        throw Error(ErrorKind::ParseError, "timestamp '" + std::string(iso8601) + "' is not ISO-8601");
    }
    int year = parse_int(iso8601, 0, 4, "year");
    int month = parse_int(iso8601, 5, 2, "month");
    int day = parse_int(iso8601, 8, 2, "day");
    int hour = parse_int(iso8601, 11, 2, "hour");
    int minute = parse_int(iso8601, 14, 2, "minute");
    int second = parse_int(iso8601, 17, 2, "second");
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
        throw Error(ErrorKind::ParseError, "timestamp '" + std::string(iso8601) + "' out of range");
    }

    std::size_t pos = 19;
    if (pos < iso8601.size() && iso8601[pos] == '.') {
        ++pos;
        while (pos < iso8601.size() && iso8601[pos] >= '0' && iso8601[pos] <= '9') {
            ++pos; // fractional seconds are truncated
        }
    }
    std::int64_t offset = 0;
    if (pos < iso8601.size()) {
        char c = iso8601[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            int oh = parse_int(iso8601, pos + 1, 2, "offset hour");
            if (pos + 3 >= iso8601.size() || iso8601[pos + 3] != ':') {
                throw Error(ErrorKind::ParseError, "bad UTC offset in '" + std::string(iso8601) + "'");
            }
            int om = parse_int(iso8601, pos + 4, 2, "offset minute");
            offset = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
            pos += 6;
        }
    }
    if (pos != iso8601.size()) {
        throw Error(ErrorKind::ParseError, "trailing characters in timestamp '" + std::string(iso8601) + "'");
    }
    std::int64_t days = days_from_civil(year, month, day);
    return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string format_timestamp(std::int64_t unix_seconds) {
    std::int64_t days = unix_seconds / 86400;
    std::int64_t rem = unix_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

} // namespace convoscope

#include "convoscope/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace convoscope {

using nlohmann::json;

void FilterConfig::validate() const {
    if (min_posts < 1) {
        throw Error(ErrorKind::InvalidConfig, "min_posts must be at least 1");
    }
    for (const std::string& kw : keywords) {
        if (kw.empty()) {
            throw Error(ErrorKind::InvalidConfig, "empty keyword");
        }
    }
}

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) || c == '_';
}

char ascii_lower(unsigned char c) {
    return static_cast<char>(std::tolower(c));
}

bool is_url_char(unsigned char c) {
    return c > ' ' && c != 0x7f;
}

// Characters that commonly trail a pasted link but are not part of it.
bool is_trailing_punct(char c) {
    switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case ')': case ']': case '}': case '>': case '"': case '\'':
        return true;
    default:
        return false;
    }
}

} // namespace

TextFeatures extract_text_features(std::string_view text) {
    TextFeatures features;
    std::vector<std::pair<std::size_t, std::size_t>> url_spans;

    for (std::size_t i = 0; i + 7 <= text.size(); ++i) {
        bool http = (i + 7 <= text.size()) &&
                    (ascii_lower(text[i]) == 'h' && ascii_lower(text[i + 1]) == 't' &&
                     ascii_lower(text[i + 2]) == 't' && ascii_lower(text[i + 3]) == 'p');
        if (!http) {
            continue;
        }
        std::size_t scheme_end = i + 4;
        if (scheme_end < text.size() && ascii_lower(text[scheme_end]) == 's') {
            ++scheme_end;
        }
        if (scheme_end + 3 > text.size() || text.substr(scheme_end, 3) != "://") {
            continue;
        }
        std::size_t end = scheme_end + 3;
        while (end < text.size() && is_url_char(static_cast<unsigned char>(text[end]))) {
            ++end;
        }
        while (end > scheme_end + 3 && is_trailing_punct(text[end - 1])) {
            --end;
        }
        if (end == scheme_end + 3) {
            continue; // bare scheme, no authority
        }
        url_spans.emplace_back(i, end);
        features.urls.emplace_back(text.substr(i, end - i));
        i = end - 1;
    }

    auto inside_url = [&](std::size_t pos) {
        for (auto [begin, end] : url_spans) {
            if (pos >= begin && pos < end) {
                return true;
            }
        }
        return false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '@' || inside_url(i)) {
            continue;
        }
        if (i > 0 && is_word_char(static_cast<unsigned char>(text[i - 1]))) {
            continue;
        }
        std::size_t end = i + 1;
        while (end < text.size() && is_word_char(static_cast<unsigned char>(text[end]))) {
            ++end;
        }
        std::size_t len = end - (i + 1);
        if (len >= 1 && len <= 15) {
            features.mentions.emplace_back(text.substr(i + 1, len));
        }
        i = end - 1;
    }
    return features;
}

bool keyword_match(std::string_view text, std::span<const std::string> keywords) {
    if (keywords.empty()) {
        return true;
    }
    std::string lowered;
    lowered.reserve(text.size());
    for (char c : text) {
        lowered.push_back(ascii_lower(static_cast<unsigned char>(c)));
    }
    for (const std::string& kw : keywords) {
        std::size_t pos = 0;
        while ((pos = lowered.find(kw, pos)) != std::string::npos) {
            bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(lowered[pos - 1]));
            std::size_t after = pos + kw.size();
            bool right_ok = after >= lowered.size() ||
                            !is_word_char(static_cast<unsigned char>(lowered[after]));
            if (left_ok && right_ok) {
                return true;
            }
            ++pos;
        }
    }
    return false;
}

namespace {

// Minimal CSV field splitter with double-quote support.
std::vector<std::string> split_csv_row(const std::string& line, std::size_t row,
                                       const std::filesystem::path& path) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) {
        throw Error(ErrorKind::ParseError,
                    path.string() + ":" + std::to_string(row) + ": unterminated quote");
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string strip(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

AuthorRegistry load_author_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open registry '" + path.string() + "'");
    }
    AuthorRegistry registry;
    std::string line;
    std::size_t row = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++row;
        std::string trimmed = strip(line);
        if (trimmed.empty()) {
            continue;
        }
        auto fields = split_csv_row(trimmed, row, path);
        if (!saw_header) {
            if (fields.size() < 3 || strip(fields[0]) != "author_id" ||
                strip(fields[1]) != "group" || strip(fields[2]) != "language") {
                throw Error(ErrorKind::ParseError,
                            path.string() + ":1: expected header author_id,group,language");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != 3) {
            throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(row) +
                                                   ": expected 3 fields, got " +
                                                   std::to_string(fields.size()));
        }
        AuthorRecord record;
        record.author = strip(fields[0]);
        if (record.author.empty()) {
            throw Error(ErrorKind::ParseError,
                        path.string() + ":" + std::to_string(row) + ":1: empty author_id");
        }
        auto group = parse_actor_group(strip(fields[1]));
        if (!group) {
            throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(row) +
                                                   ":2: unknown group '" + strip(fields[1]) + "'");
        }
        record.group = *group;
        record.language = strip(fields[2]);
        registry.add(std::move(record));
    }
    if (!saw_header) {
        throw Error(ErrorKind::ParseError, path.string() + ": missing header row");
    }
    return registry;
}

std::vector<std::string> load_keywords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open keyword file '" + path.string() + "'");
    }
    std::vector<std::string> keywords;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::string word = strip(line);
        if (word.empty()) {
            continue;
        }
        for (char& c : word) {
            c = ascii_lower(static_cast<unsigned char>(c));
        }
        keywords.push_back(std::move(word));
    }
    return keywords;
}

Post parse_post_json(std::string_view line, std::string* conversation_id,
                     const FilterConfig& filter) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw Error(ErrorKind::ParseError, "post record is not a JSON object");
    }
    Post post;
    try {
        post.id = obj.at("id").get<std::string>();
        if (conversation_id) {
            *conversation_id = obj.at("conversation_id").get<std::string>();
        }
        post.author = obj.at("author_id").get<std::string>();
        post.created_at = parse_timestamp(obj.at("created_at").get<std::string>());
        if (auto it = obj.find("parent_id"); it != obj.end() && !it->is_null()) {
            post.parent = it->get<std::string>();
        }
        if (auto it = obj.find("text"); it != obj.end() && !it->is_null()) {
            post.text = it->get<std::string>();
        }
        if (auto it = obj.find("urls"); it != obj.end() && !it->is_null()) {
            post.urls = it->get<std::vector<std::string>>();
        } else if (filter.extract_urls) {
            post.urls = extract_text_features(post.text).urls;
        }
        if (auto it = obj.find("mentions"); it != obj.end() && !it->is_null()) {
            post.mentions = it->get<std::vector<std::string>>();
        } else if (filter.extract_mentions) {
            post.mentions = extract_text_features(post.text).mentions;
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("bad post record: ") + e.what());
    }
    if (post.id.empty()) {
        throw Error(ErrorKind::ParseError, "post with empty id");
    }
    if (post.author.empty()) {
        throw Error(ErrorKind::ParseError, "post '" + post.id + "' has empty author_id");
    }
    return post;
}

std::string post_to_json(const Post& post, const std::string& conversation_id) {
    json obj;
    obj["id"] = post.id;
    obj["conversation_id"] = conversation_id;
    obj["parent_id"] = post.parent ? json(*post.parent) : json(nullptr);
    obj["author_id"] = post.author;
    obj["created_at"] = format_timestamp(post.created_at);
    obj["text"] = post.text;
    if (!post.urls.empty()) {
        obj["urls"] = post.urls;
    }
    if (!post.mentions.empty()) {
        obj["mentions"] = post.mentions;
    }
    return obj.dump();
}

LoadResult load_corpus(const std::filesystem::path& path, const AuthorRegistry& registry,
                       const FilterConfig& filter, OrphanPolicy policy) {
    filter.validate();
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open corpus '" + path.string() + "'");
    }

    LoadResult result;
    std::map<std::string, std::vector<Post>> groups; // conversation_id -> posts
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) {
            continue;
        }
        std::string conversation_id;
        Post post;
        try {
            post = parse_post_json(line, &conversation_id, filter);
        } catch (const Error& e) {
            throw Error(ErrorKind::ParseError,
                        path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        ++result.stats.posts_read;
        groups[conversation_id].push_back(std::move(post));
    }

    result.stats.conversations_read = groups.size();
    auto& reasons = result.stats.drop_reasons;
    reasons[kDropRootNotInRegistry] = 0;
    reasons[kDropBelowMinPosts] = 0;
    reasons[kDropNoKeywordMatch] = 0;

    std::unordered_set<std::string> corpus_ids;
    corpus_ids.reserve(result.stats.posts_read);

    for (auto& [conversation_id, posts] : groups) {
        // Exact duplicate records are dropped; conflicting reuse of an id is
        // an error either way (and order independent).
        std::sort(posts.begin(), posts.end(), [](const Post& a, const Post& b) {
            if (a.id != b.id) {
                return a.id < b.id;
            }
            return a.created_at < b.created_at;
        });
        std::vector<Post> unique;
        unique.reserve(posts.size());
        for (Post& p : posts) {
            if (!unique.empty() && unique.back().id == p.id) {
                if (unique.back() == p) {
                    ++result.stats.duplicate_lines_dropped;
                    continue;
                }
                throw Error(ErrorKind::DuplicatePostId,
                            "conversation '" + conversation_id + "': post id '" + p.id +
                                "' reused with different content");
            }
            // ids are corpus-wide unique, not just unique per conversation
            if (!corpus_ids.insert(p.id).second) {
                throw Error(ErrorKind::DuplicatePostId,
                            "post id '" + p.id + "' appears in more than one conversation");
            }
            unique.push_back(std::move(p));
        }

        BuildReport report;
        Conversation conv = build_conversation(std::move(unique), policy, &report);
        for (RepairRecord& r : report.repairs) {
            r.action = "conversation '" + conversation_id + "': " + r.action;
            result.repairs.push_back(std::move(r));
        }
        for (std::string& w : report.warnings) {
            result.warnings.push_back("conversation '" + conversation_id + "': " + w);
        }
        result.stats.repaired_posts += report.repairs.size();

        if (filter.require_root_in_registry && !registry.contains(conv.root().author)) {
            ++reasons[kDropRootNotInRegistry];
            continue;
        }
        if (conv.size() < filter.min_posts) {
            ++reasons[kDropBelowMinPosts];
            continue;
        }
        if (!keyword_match(conv.root().text, filter.keywords)) {
            ++reasons[kDropNoKeywordMatch];
            continue;
        }
        result.stats.posts_kept += conv.size();
        result.group_keys.emplace(conv.root_id(), conversation_id);
        result.conversations.push_back(std::move(conv));
    }
    result.stats.conversations_kept = result.conversations.size();

    std::sort(result.conversations.begin(), result.conversations.end(),
              [](const Conversation& a, const Conversation& b) { return a.root_id() < b.root_id(); });

    for (const AuthorRecord& record : registry.records()) {
        bool roots_kept_conversation = false;
        for (const Conversation& conv : result.conversations) {
            if (conv.root().author == record.author) {
                roots_kept_conversation = true;
                break;
            }
        }
        if (!roots_kept_conversation) {
            ++result.stats.authors_excluded;
        }
    }
    return result;
}

} // namespace convoscope

#include "convoscope/text_stats.hpp"

namespace convoscope {

std::size_t utf8_length(std::string_view text) {
    std::size_t count = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) {
            ++count;
        }
    }
    return count;
}

TextStats text_stats(std::span<const Post> posts) {
    if (posts.empty()) {
        throw Error(ErrorKind::EmptyInput, "text_stats needs at least one post");
    }
    std::size_t with_link = 0;
    std::size_t with_mention = 0;
    std::size_t chars = 0;
    for (const Post& p : posts) {
        if (!p.urls.empty()) {
            ++with_link;
        }
        if (!p.mentions.empty()) {
            ++with_mention;
        }
        chars += utf8_length(p.text);
    }
    TextStats stats;
    stats.post_count = posts.size();
    stats.link_share = static_cast<double>(with_link) / static_cast<double>(posts.size());
    stats.mention_share = static_cast<double>(with_mention) / static_cast<double>(posts.size());
    stats.mean_chars = static_cast<double>(chars) / static_cast<double>(posts.size());
    return stats;
}

TextStats merge(const TextStats& a, const TextStats& b) {
    if (a.post_count == 0) {
        return b;
    }
    if (b.post_count == 0) {
        return a;
    }
    TextStats out;
    out.post_count = a.post_count + b.post_count;
    double wa = static_cast<double>(a.post_count);
    double wb = static_cast<double>(b.post_count);
    double total = wa + wb;
    out.link_share = (a.link_share * wa + b.link_share * wb) / total;
    out.mention_share = (a.mention_share * wa + b.mention_share * wb) / total;
    out.mean_chars = (a.mean_chars * wa + b.mean_chars * wb) / total;
    return out;
}

} // namespace convoscope

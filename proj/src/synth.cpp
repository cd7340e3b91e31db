#include "convoscope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "convoscope/ingest.hpp"

namespace convoscope {

using nlohmann::json;

namespace rng {

double uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) {
    return n == 0 ? 0 : gen() % n;
}

std::size_t poisson(std::mt19937_64& gen, double lambda) {
    // Knuth's method with exp chunking so large lambdas stay in range.
    if (lambda <= 0) {
        return 0;
    }
    double remaining = lambda;
    double p = 1.0;
    std::size_t k = 0;
    const double step = 500.0;
    for (;;) {
        ++k;
        p *= uniform(gen);
        while (p < 1.0 && remaining > 0.0) {
            if (remaining > step) {
                p *= std::exp(step);
                remaining -= step;
            } else {
                p *= std::exp(remaining);
                remaining = 0.0;
            }
        }
        if (p <= 1.0) {
            return k - 1;
        }
    }
}

std::size_t weighted_choice(std::mt19937_64& gen, const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) {
        total += w;
    }
    double r = uniform(gen) * total;
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (r < acc) {
            return i;
        }
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

} // namespace rng

void GeneratorConfig::validate() const {
    for (const ProfileSpec& spec : profiles) {
        const StyleProfile& p = spec.profile;
        if (p.name.empty()) {
            throw Error(ErrorKind::InvalidConfig, "profile without a name");
        }
        if (spec.authors < 1) {
            throw Error(ErrorKind::InvalidConfig, "profile '" + p.name + "' needs >= 1 author");
        }
        auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!in_unit(p.reply_propensity) || !in_unit(p.link_rate) || !in_unit(p.mention_rate)) {
            throw Error(ErrorKind::InvalidConfig,
                        "profile '" + p.name + "' has a probability outside [0, 1]");
        }
        if (p.root_post_rate < 0) {
            throw Error(ErrorKind::InvalidConfig, "profile '" + p.name + "' root_post_rate < 0");
        }
        if (p.attractiveness <= 0) {
            throw Error(ErrorKind::InvalidConfig, "profile '" + p.name + "' attractiveness <= 0");
        }
        if (p.mean_text_len < 1) {
            throw Error(ErrorKind::InvalidConfig, "profile '" + p.name + "' mean_text_len < 1");
        }
    }
    if (audience_size < 1) {
        throw Error(ErrorKind::InvalidConfig, "audience_size must be >= 1");
    }
    if (!(growth.depth_decay > 0.0 && growth.depth_decay <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "depth_decay must lie in (0, 1]");
    }
    if (growth.pa_exponent < 0) {
        throw Error(ErrorKind::InvalidConfig, "pa_exponent must be >= 0");
    }
    if (growth.size_scale <= 0) {
        throw Error(ErrorKind::InvalidConfig, "size_scale must be positive");
    }
    if (growth.max_posts < 1) {
        throw Error(ErrorKind::InvalidConfig, "max_posts must be >= 1");
    }
}

namespace {

StyleProfile profile_from_json(const json& obj) {
    StyleProfile p;
    p.name = obj.at("name").get<std::string>();
    p.root_post_rate = obj.value("root_post_rate", p.root_post_rate);
    p.reply_propensity = obj.value("reply_propensity", p.reply_propensity);
    p.link_rate = obj.value("link_rate", p.link_rate);
    p.mention_rate = obj.value("mention_rate", p.mention_rate);
    p.mean_text_len = obj.value("mean_text_len", p.mean_text_len);
    p.attractiveness = obj.value("attractiveness", p.attractiveness);
    if (obj.contains("group")) {
        auto group = parse_actor_group(obj.at("group").get<std::string>());
        if (!group) {
            throw Error(ErrorKind::InvalidConfig,
                        "profile '" + p.name + "': unknown group '" +
                            obj.at("group").get<std::string>() + "'");
        }
        p.group = *group;
    }
    p.language = obj.value("language", p.language);
    return p;
}

json profile_to_json(const StyleProfile& p) {
    json obj;
    obj["name"] = p.name;
    obj["root_post_rate"] = p.root_post_rate;
    obj["reply_propensity"] = p.reply_propensity;
    obj["link_rate"] = p.link_rate;
    obj["mention_rate"] = p.mention_rate;
    obj["mean_text_len"] = p.mean_text_len;
    obj["attractiveness"] = p.attractiveness;
    obj["group"] = to_string(p.group);
    obj["language"] = p.language;
    return obj;
}

} // namespace

GeneratorConfig parse_generator_config(const std::string& json_text) {
    json obj = json::parse(json_text, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw Error(ErrorKind::InvalidConfig, "generator config is not a JSON object");
    }
    GeneratorConfig config;
    try {
        config.seed = obj.value("seed", config.seed);
        config.audience_size = obj.value("audience_size", config.audience_size);
        config.conversations = obj.value("conversations", config.conversations);
        config.topic_word = obj.value("topic_word", config.topic_word);
        if (obj.contains("growth")) {
            const json& g = obj.at("growth");
            config.growth.pa_exponent = g.value("pa_exponent", config.growth.pa_exponent);
            config.growth.depth_decay = g.value("depth_decay", config.growth.depth_decay);
            config.growth.size_scale = g.value("size_scale", config.growth.size_scale);
            config.growth.max_posts = g.value("max_posts", config.growth.max_posts);
        }
        for (const json& entry : obj.value("profiles", json::array())) {
            ProfileSpec spec;
            spec.profile = profile_from_json(entry);
            spec.authors = entry.value("authors", spec.authors);
            config.profiles.push_back(std::move(spec));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("bad generator config: ") + e.what());
    }
    config.validate();
    return config;
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open config '" + path.string() + "'");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_generator_config(text);
}

std::string generator_config_to_json(const GeneratorConfig& config) {
    json obj;
    obj["seed"] = config.seed;
    obj["audience_size"] = config.audience_size;
    obj["conversations"] = config.conversations;
    obj["topic_word"] = config.topic_word;
    obj["growth"] = {{"pa_exponent", config.growth.pa_exponent},
                     {"depth_decay", config.growth.depth_decay},
                     {"size_scale", config.growth.size_scale},
                     {"max_posts", config.growth.max_posts}};
    obj["profiles"] = json::array();
    for (const ProfileSpec& spec : config.profiles) {
        json entry = profile_to_json(spec.profile);
        entry["authors"] = spec.authors;
        obj["profiles"].push_back(std::move(entry));
    }
    return obj.dump(2);
}

namespace {

StyleProfile make_broadcast() {
    StyleProfile p;
    p.name = "broadcast";
    p.reply_propensity = 0.0;
    p.link_rate = 0.5;
    p.mention_rate = 0.1;
    p.mean_text_len = 200;
    p.attractiveness = 3.0;
    p.group = ActorGroup::Politician;
    return p;
}

StyleProfile make_debate() {
    StyleProfile p;
    p.name = "debate";
    p.reply_propensity = 0.8;
    p.link_rate = 0.1;
    p.mention_rate = 0.7;
    p.mean_text_len = 140;
    p.attractiveness = 3.0;
    p.group = ActorGroup::Activist;
    return p;
}

StyleProfile make_sharing() {
    StyleProfile p;
    p.name = "sharing";
    p.reply_propensity = 0.25;
    p.link_rate = 0.9;
    p.mention_rate = 0.15;
    p.mean_text_len = 260;
    p.attractiveness = 2.0;
    p.group = ActorGroup::Scientist;
    return p;
}

} // namespace

GeneratorConfig preset_config(std::string_view name) {
    GeneratorConfig config;
    config.seed = 20210601;
    config.audience_size = 120;
    config.conversations = 200;
    if (name == "broadcast") {
        config.profiles.push_back({make_broadcast(), 8});
    } else if (name == "debate") {
        config.profiles.push_back({make_debate(), 8});
    } else if (name == "sharing") {
        config.profiles.push_back({make_sharing(), 8});
    } else if (name == "three-styles") {
        config.profiles.push_back({make_broadcast(), 8});
        config.profiles.push_back({make_debate(), 8});
        config.profiles.push_back({make_sharing(), 8});
    } else {
        throw Error(ErrorKind::InvalidConfig, "unknown preset '" + std::string(name) + "'");
    }
    return config;
}

namespace {

constexpr std::int64_t kBaseEpoch = 1622505600; // 2021-06-01T00:00:00Z

const char* const kFillerWords[] = {
    "the",   "carbon", "policy", "data",   "point",  "we",     "should", "really",
    "think", "about",  "future", "energy", "heat",   "report", "change", "model",
    "storm", "cost",   "risk",   "clean",  "air",    "sea",    "level",  "green",
};
constexpr std::size_t kFillerCount = sizeof(kFillerWords) / sizeof(kFillerWords[0]);

std::string make_text(std::mt19937_64& gen, int target_chars, const std::string& lead) {
    std::string text = lead;
    while (text.size() < static_cast<std::size_t>(target_chars)) {
        if (!text.empty()) {
            text.push_back(' ');
        }
        text += kFillerWords[rng::below(gen, kFillerCount)];
    }
    return text;
}

struct PendingPost {
    std::string id;
    int parent = -1; // index within the conversation
    std::string author;
    std::int64_t created_at = 0;
    std::string text;
    int depth = 0;
    int out_degree = 0;
};

} // namespace

SynthOutput generate(const GeneratorConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    // Registry: profile authors only; the audience stays unregistered.
    std::string registry_text = "author_id,group,language\n";
    std::vector<std::vector<std::string>> profile_authors(config.profiles.size());
    for (std::size_t pi = 0; pi < config.profiles.size(); ++pi) {
        const ProfileSpec& spec = config.profiles[pi];
        for (std::size_t a = 0; a < spec.authors; ++a) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s_a%03zu", spec.profile.name.c_str(), a + 1);
            profile_authors[pi].push_back(buf);
            registry_text += buf;
            registry_text += ',';
            registry_text += to_string(spec.profile.group);
            registry_text += ',';
            registry_text += spec.profile.language;
            registry_text += '\n';
        }
    }

    std::unordered_map<std::string, double> author_attractiveness;
    for (std::size_t pi = 0; pi < config.profiles.size(); ++pi) {
        for (const std::string& author : profile_authors[pi]) {
            author_attractiveness[author] = config.profiles[pi].profile.attractiveness;
        }
    }
    auto attractiveness_of = [&](const std::string& author) {
        auto it = author_attractiveness.find(author);
        return it == author_attractiveness.end() ? 1.0 : it->second;
    };

    std::vector<std::string> audience;
    audience.reserve(config.audience_size);
    for (std::size_t i = 0; i < config.audience_size; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "aud_%05zu", i + 1);
        audience.emplace_back(buf);
    }

    std::mt19937_64 gen(config.seed);
    std::string corpus_text;
    SynthOutput output;

    // depth_decay^d lookup; depths are capped well below this.
    std::vector<double> depth_weight(256);
    depth_weight[0] = 1.0;
    for (std::size_t d = 1; d < depth_weight.size(); ++d) {
        depth_weight[d] = depth_weight[d - 1] * config.growth.depth_decay;
    }

    std::size_t conv_index = 0;
    for (std::size_t pi = 0; pi < config.profiles.size(); ++pi) {
        const StyleProfile& profile = config.profiles[pi].profile;
        auto n_convs = static_cast<std::size_t>(
            std::llround(static_cast<double>(config.conversations) * profile.root_post_rate));
        for (std::size_t c = 0; c < n_convs; ++c, ++conv_index) {
            const std::string& root_author = profile_authors[pi][c % profile_authors[pi].size()];
            std::int64_t t0 = kBaseEpoch + static_cast<std::int64_t>(conv_index) * 86400;
            char conv_buf[32];
            std::snprintf(conv_buf, sizeof conv_buf, "c%06zu", conv_index + 1);
            std::string conv_id = conv_buf;

            std::size_t n_replies = rng::poisson(gen, profile.attractiveness * config.growth.size_scale);
            n_replies = std::min(n_replies, config.growth.max_posts - 1);

            std::vector<PendingPost> posts;
            posts.reserve(n_replies + 1);

            PendingPost root;
            root.id = conv_id + "-p000000";
            root.author = root_author;
            root.created_at = t0;
            {
                std::string lead = config.topic_word;
                if (rng::uniform(gen) < profile.mention_rate) {
                    lead = "@" + audience[rng::below(gen, audience.size())] + " " + lead;
                }
                root.text = make_text(gen, profile.mean_text_len, lead);
                if (rng::uniform(gen) < profile.link_rate) {
                    root.text += " https://example.org/" + conv_id + "/0";
                }
            }
            posts.push_back(std::move(root));

            std::vector<double> weights;
            std::vector<char> root_answered(1, 0);
            for (std::size_t j = 1; j <= n_replies; ++j) {
                bool root_reenters = rng::uniform(gen) < profile.reply_propensity;
                auto base_weight = [&](const PendingPost& p) {
                    return attractiveness_of(p.author) *
                           std::pow(1.0 + p.out_degree, config.growth.pa_exponent) *
                           depth_weight[std::min<std::size_t>(p.depth, depth_weight.size() - 1)];
                };
                weights.assign(posts.size(), 0.0);
                bool any_candidate = false;
                if (root_reenters) {
                    // Turn-taking: the root author answers other voices,
                    // preferring posts they have not replied to yet.
                    for (std::size_t q = 0; q < posts.size(); ++q) {
                        if (posts[q].author != root_author && !root_answered[q]) {
                            weights[q] = base_weight(posts[q]);
                            any_candidate = any_candidate || weights[q] > 0;
                        }
                    }
                    if (!any_candidate) {
                        for (std::size_t q = 0; q < posts.size(); ++q) {
                            if (posts[q].author != root_author) {
                                weights[q] = base_weight(posts[q]);
                                any_candidate = any_candidate || weights[q] > 0;
                            }
                        }
                    }
                }
                if (!any_candidate) {
                    root_reenters = false;
                    for (std::size_t q = 0; q < posts.size(); ++q) {
                        weights[q] = base_weight(posts[q]);
                    }
                }
                std::size_t parent = rng::weighted_choice(gen, weights);
                if (root_reenters) {
                    root_answered[parent] = 1;
                }

                PendingPost reply;
                char id_buf[32];
                std::snprintf(id_buf, sizeof id_buf, "-p%06zu", j);
                reply.id = conv_id + id_buf;
                reply.parent = static_cast<int>(parent);
                reply.created_at = t0 + static_cast<std::int64_t>(j) * 60;
                reply.depth = posts[parent].depth + 1;

                double link_rate;
                double mention_rate;
                int mean_len;
                if (root_reenters) {
                    reply.author = root_author;
                    link_rate = profile.link_rate;
                    mention_rate = profile.mention_rate;
                    mean_len = profile.mean_text_len;
                } else {
                    reply.author = audience[rng::below(gen, audience.size())];
                    link_rate = 0.05;
                    mention_rate = 0.10;
                    mean_len = 80;
                }
                std::string lead;
                if (rng::uniform(gen) < mention_rate) {
                    lead = "@" + posts[parent].author + " ";
                }
                reply.text = make_text(gen, mean_len, lead);
                if (rng::uniform(gen) < link_rate) {
                    reply.text += " https://example.org/" + conv_id + "/" + std::to_string(j);
                }
                posts[parent].out_degree += 1;
                posts.push_back(std::move(reply));
                root_answered.push_back(0);
            }

            for (const PendingPost& p : posts) {
                Post post;
                post.id = p.id;
                if (p.parent >= 0) {
                    post.parent = posts[static_cast<std::size_t>(p.parent)].id;
                }
                post.author = p.author;
                post.created_at = p.created_at;
                post.text = p.text;
                corpus_text += post_to_json(post, conv_id);
                corpus_text += '\n';
            }
            output.posts += posts.size();
            ++output.conversations;
        }
    }

    output.corpus_path = out_dir / "corpus.jsonl";
    output.registry_path = out_dir / "registry.csv";
    std::ofstream corpus(output.corpus_path, std::ios::binary);
    std::ofstream registry(output.registry_path, std::ios::binary);
    if (!corpus || !registry) {
        throw Error(ErrorKind::IoError, "cannot write into '" + out_dir.string() + "'");
    }
    corpus << corpus_text;
    registry << registry_text;
    return output;
}

} // namespace convoscope

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "convoscope/model.hpp"

namespace convoscope {

// Communication-style parameters for one group of synthetic authors.
struct StyleProfile {
    std::string name;
    double root_post_rate = 1.0;   // multiplier on conversations started by the group
    double reply_propensity = 0.0; // probability the root author writes the next reply
    double link_rate = 0.0;
    double mention_rate = 0.0;
    int mean_text_len = 120;       // characters
    double attractiveness = 4.0;   // expected replies drawn per post (weight + size driver)
    ActorGroup group = ActorGroup::Unknown;
    std::string language = "en";
};

struct TreeGrowth {
    // Parent weight: attractiveness * (1 + out-degree)^pa_exponent *
    // depth_decay^depth. The default exponent of 0 keeps attachment purely
    // attractiveness- and depth-driven.
    double pa_exponent = 0.0;
    double depth_decay = 0.85;
    double size_scale = 7.0; // conversation size ~ 1 + Poisson(attractiveness * size_scale)
    std::size_t max_posts = 2000;
};

struct ProfileSpec {
    StyleProfile profile;
    std::size_t authors = 4;
};

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::vector<ProfileSpec> profiles;
    std::size_t audience_size = 100;
    // Conversations started per profile; scaled by the profile's
    // root_post_rate and split round-robin over its authors.
    std::size_t conversations = 10;
    TreeGrowth growth;
    std::string topic_word = "climate"; // planted in every root text

    void validate() const; // throws InvalidConfig
};

GeneratorConfig load_generator_config(const std::filesystem::path& path);
GeneratorConfig parse_generator_config(const std::string& json_text);
std::string generator_config_to_json(const GeneratorConfig& config);

// Built-in presets: "broadcast", "debate", "sharing" (single profile each)
// and "three-styles" (all three). Throws InvalidConfig for other names.
GeneratorConfig preset_config(std::string_view name);

struct SynthOutput {
    std::filesystem::path corpus_path;
    std::filesystem::path registry_path;
    std::size_t conversations = 0;
    std::size_t posts = 0;
};

// Writes corpus.jsonl and registry.csv into out_dir. Identical configs give
// byte-identical files.
SynthOutput generate(const GeneratorConfig& config, const std::filesystem::path& out_dir);

// Deterministic sampling helpers shared by the generator and its tests. The
// raw engine is std::mt19937_64; all value mapping is done here so output
// never depends on the standard library's distribution implementations.
namespace rng {
double uniform(std::mt19937_64& gen);                       // [0, 1)
std::uint64_t below(std::mt19937_64& gen, std::uint64_t n); // [0, n)
std::size_t poisson(std::mt19937_64& gen, double lambda);
std::size_t weighted_choice(std::mt19937_64& gen, const std::vector<double>& weights);
} // namespace rng

} // namespace convoscope

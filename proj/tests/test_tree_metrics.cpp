#include <doctest.h>

#include <random>

#include "convoscope/tree_metrics.hpp"
#include "support.hpp"

using namespace convoscope;
using testsupport::make_post;

namespace {

Conversation chain(std::size_t n) {
    std::vector<Post> posts{make_post("p0", "", "a0", 100)};
    for (std::size_t i = 1; i < n; ++i) {
        posts.push_back(make_post("p" + std::to_string(i), "p" + std::to_string(i - 1),
                                  "a" + std::to_string(i), 100 + 10 * static_cast<int>(i)));
    }
    return build_conversation(posts);
}

Conversation star(std::size_t leaves) {
    std::vector<Post> posts{make_post("root", "", "hub", 100)};
    for (std::size_t i = 0; i < leaves; ++i) {
        posts.push_back(make_post("leaf" + std::to_string(i), "root", "a" + std::to_string(i),
                                  110 + static_cast<int>(i)));
    }
    return build_conversation(posts);
}

} // namespace

TEST_CASE("depth basics") {
    CHECK(depth(chain(1)) == 0);
    CHECK(depth(chain(4)) == 3);
    CHECK(depth(star(7)) == 1);
}

TEST_CASE("branching factor closed forms") {
    CHECK(branching_factor(star(4)) == doctest::Approx(4.0));
    CHECK(branching_factor(chain(4)) == doctest::Approx(1.0));
    CHECK(branching_factor(chain(1)) == 0.0);

    // root with 2 replies, one reply has 2 replies -> (2+2)/2
    auto conv = build_conversation({
        make_post("r", "", "a", 100),
        make_post("x", "r", "b", 110),
        make_post("y", "r", "c", 120),
        make_post("x1", "x", "d", 130),
        make_post("x2", "x", "e", 140),
    });
    CHECK(branching_factor(conv) == doctest::Approx(2.0));
}

TEST_CASE("root dominance is the root author's share") {
    std::vector<Post> posts{make_post("p0", "", "root_author", 100)};
    for (int i = 1; i < 10; ++i) {
        posts.push_back(make_post("p" + std::to_string(i), "p0",
                                  i < 3 ? "root_author" : "other" + std::to_string(i), 100 + i));
    }
    CHECK(root_dominance(build_conversation(posts)) == doctest::Approx(0.3));
    CHECK(root_dominance(chain(1)) == doctest::Approx(1.0));

    std::vector<Post> lone{make_post("p0", "", "solo", 100)};
    for (int i = 1; i < 5; ++i) {
        lone.push_back(make_post("p" + std::to_string(i), "p0", "other" + std::to_string(i), 100 + i));
    }
    CHECK(root_dominance(build_conversation(lone)) == doctest::Approx(0.2));
}

TEST_CASE("path distance basics") {
    auto conv = build_conversation({
        make_post("r", "", "a", 100),
        make_post("x", "r", "b", 110),
        make_post("y", "r", "c", 120),
    });
    CHECK(path_distance(conv, "r", "r") == 0);
    CHECK(path_distance(conv, "r", "x") == 1);
    CHECK(path_distance(conv, "x", "y") == 2); // siblings via their parent
    CHECK_THROWS_AS(path_distance(conv, "r", "ghost"), Error);
}

TEST_CASE("path distance matches the BFS oracle and is a metric") {
    std::mt19937_64 gen(123);
    for (int round = 0; round < 60; ++round) {
        auto posts = testsupport::random_tree(gen, 2 + gen() % 49, 5);
        auto conv = build_conversation(posts);
        // distances against BFS, symmetry, identity
        for (std::size_t a = 0; a < conv.size(); ++a) {
            auto oracle = testsupport::bfs_distances(posts, conv.post(a).id);
            for (std::size_t b = 0; b < conv.size(); ++b) {
                int d = path_distance_by_index(conv, a, b);
                CHECK(d == oracle.at(conv.post(b).id));
                CHECK(d == path_distance_by_index(conv, b, a));
                CHECK((d == 0) == (a == b));
            }
        }
        // triangle inequality on sampled triples
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t a = gen() % conv.size();
            std::size_t b = gen() % conv.size();
            std::size_t c = gen() % conv.size();
            CHECK(path_distance_by_index(conv, a, c) <=
                  path_distance_by_index(conv, a, b) + path_distance_by_index(conv, b, c));
        }
    }
}

TEST_CASE("depth equals the max distance from the root") {
    std::mt19937_64 gen(321);
    for (int round = 0; round < 40; ++round) {
        auto conv = build_conversation(testsupport::random_tree(gen, 1 + gen() % 50, 4));
        int max_dist = 0;
        for (std::size_t i = 0; i < conv.size(); ++i) {
            max_dist = std::max(max_dist, path_distance_by_index(conv, conv.root_index(), i));
        }
        CHECK(depth(conv) == max_dist);
    }
}

TEST_CASE("out-degrees sum to size minus one") {
    std::mt19937_64 gen(77);
    for (int round = 0; round < 40; ++round) {
        auto conv = build_conversation(testsupport::random_tree(gen, 1 + gen() % 50, 4));
        std::size_t total = 0;
        for (std::size_t i = 0; i < conv.size(); ++i) {
            total += conv.children_of(i).size();
        }
        CHECK(total == conv.size() - 1);
        CHECK(root_out_degree(conv) == static_cast<int>(conv.children_of(conv.root_index()).size()));
    }
}

TEST_CASE("tree_metrics bundles the fields consistently") {
    auto conv = star(5);
    TreeMetrics m = tree_metrics(conv);
    CHECK(m.size == 6);
    CHECK(m.depth == 1);
    CHECK(m.branching_factor == doctest::Approx(5.0));
    CHECK(m.root_out_degree == 5);
    CHECK(m.root_dominance == doctest::Approx(1.0 / 6.0));
    CHECK(m.depth <= static_cast<int>(m.size) - 1);
}

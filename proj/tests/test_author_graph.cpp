#include <doctest.h>

#include <algorithm>
#include <random>

#include "convoscope/author_graph.hpp"
#include "support.hpp"

using namespace convoscope;
using testsupport::make_post;

TEST_CASE("graph derivation: replies become directed edges") {
    auto conv = build_conversation({
        make_post("r", "", "A", 100),
        make_post("x", "r", "B", 110),
        make_post("y", "r", "C", 120),
    });
    AuthorGraph g = derive_author_graph(conv);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    auto a = static_cast<std::int32_t>(*g.index_of("A"));
    auto b = static_cast<std::int32_t>(*g.index_of("B"));
    auto c = static_cast<std::int32_t>(*g.index_of("C"));
    CHECK(g.edge_weights.count({b, a}) == 1);
    CHECK(g.edge_weights.count({c, a}) == 1);
}

TEST_CASE("graph derivation: self-replies make no edge, multiplicity folds") {
    auto self_reply = build_conversation({
        make_post("r", "", "A", 100),
        make_post("x", "r", "A", 110),
    });
    CHECK(derive_author_graph(self_reply).edge_count() == 0);

    auto doubled = build_conversation({
        make_post("r", "", "A", 100),
        make_post("x", "r", "B", 110),
        make_post("y", "r", "B", 120),
    });
    AuthorGraph g = derive_author_graph(doubled);
    CHECK(g.edge_count() == 1);
    auto a = static_cast<std::int32_t>(*g.index_of("A"));
    auto b = static_cast<std::int32_t>(*g.index_of("B"));
    CHECK(g.edge_weights.at({b, a}) == 2);
}

TEST_CASE("betweenness closed forms") {
    testsupport::Digraph path;
    path.n = 3;
    path.edges = {{0, 1}, {1, 2}};
    auto g = testsupport::to_author_graph(path);
    auto scores = betweenness(g);
    CHECK(scores.at("n001") == doctest::Approx(1.0));
    CHECK(scores.at("n000") == 0.0);
    CHECK(scores.at("n002") == 0.0);

    testsupport::Digraph star;
    star.n = 4;
    star.edges = {{1, 0}, {2, 0}, {3, 0}}; // all edges point at the center
    auto star_scores = betweenness(testsupport::to_author_graph(star));
    for (const auto& [node, score] : star_scores) {
        CHECK(score == 0.0);
    }

    testsupport::Digraph empty;
    empty.n = 5;
    auto empty_scores = betweenness(testsupport::to_author_graph(empty));
    for (const auto& [node, score] : empty_scores) {
        CHECK(score == 0.0);
    }
}

TEST_CASE("betweenness is zero in graphs with fewer than three nodes") {
    testsupport::Digraph two;
    two.n = 2;
    two.edges = {{0, 1}, {1, 0}};
    for (const auto& [node, score] : betweenness(testsupport::to_author_graph(two))) {
        CHECK(score == 0.0);
    }
}

TEST_CASE("betweenness matches the brute-force oracle") {
    std::mt19937_64 gen(888);
    for (int round = 0; round < 300; ++round) {
        auto digraph = testsupport::random_digraph(gen, 8, 0.35);
        auto scores = betweenness(testsupport::to_author_graph(digraph));
        auto oracle = testsupport::betweenness_oracle(digraph);
        for (std::size_t v = 0; v < digraph.n; ++v) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "n%03zu", v);
            CHECK(scores.at(buf) == doctest::Approx(oracle[v]).epsilon(1e-9));
        }
    }
}

TEST_CASE("harmonic closeness closed forms") {
    testsupport::Digraph pair;
    pair.n = 2;
    pair.edges = {{0, 1}};
    auto scores = closeness(testsupport::to_author_graph(pair));
    CHECK(scores.at("n000") == doctest::Approx(1.0));
    CHECK(scores.at("n001") == 0.0);

    testsupport::Digraph lonely;
    lonely.n = 1;
    CHECK(closeness(testsupport::to_author_graph(lonely)).at("n000") == 0.0);

    testsupport::Digraph triangle;
    triangle.n = 3;
    triangle.edges = {{0, 1}, {1, 2}, {2, 0}};
    for (const auto& [node, score] : closeness(testsupport::to_author_graph(triangle))) {
        CHECK(score == doctest::Approx(1.5)); // 1/1 + 1/2
    }
}

TEST_CASE("harmonic closeness matches BFS on random graphs") {
    std::mt19937_64 gen(999);
    for (int round = 0; round < 60; ++round) {
        auto digraph = testsupport::random_digraph(gen, 64, 0.08);
        auto scores = closeness(testsupport::to_author_graph(digraph));
        auto oracle = testsupport::closeness_oracle(digraph);
        for (std::size_t v = 0; v < digraph.n; ++v) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "n%03zu", v);
            CHECK(scores.at(buf) == doctest::Approx(oracle[v]).epsilon(1e-12));
        }
    }
}

TEST_CASE("katz: empty edge set gives a uniform unit vector") {
    testsupport::Digraph empty;
    empty.n = 4;
    auto scores = katz(testsupport::to_author_graph(empty), {});
    for (const auto& [node, score] : scores) {
        CHECK(score == doctest::Approx(0.5)); // 1/sqrt(4)
    }
}

TEST_CASE("katz: two nodes, closed-form ratio") {
    testsupport::Digraph pair;
    pair.n = 2;
    pair.edges = {{0, 1}};
    KatzConfig cfg;
    cfg.alpha = 0.1;
    auto g = testsupport::to_author_graph(pair);
    auto raw = katz_raw(g, cfg);
    CHECK(raw[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(raw[1] == doctest::Approx(1.1).epsilon(1e-9));
    auto scores = katz(g, cfg);
    CHECK(scores.at("n001") / scores.at("n000") == doctest::Approx(1.1).epsilon(1e-9));
    double norm = scores.at("n000") * scores.at("n000") + scores.at("n001") * scores.at("n001");
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("katz: directed cycles score uniformly") {
    for (std::size_t n : {3u, 5u, 8u}) {
        testsupport::Digraph cycle;
        cycle.n = n;
        for (std::size_t i = 0; i < n; ++i) {
            cycle.edges.insert({static_cast<int>(i), static_cast<int>((i + 1) % n)});
        }
        auto scores = katz(testsupport::to_author_graph(cycle), {});
        double expected = 1.0 / std::sqrt(static_cast<double>(n));
        for (const auto& [node, score] : scores) {
            CHECK(score == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("katz residual is below tolerance at convergence") {
    std::mt19937_64 gen(4242);
    KatzConfig cfg; // default alpha, tol 1e-10
    for (int round = 0; round < 50; ++round) {
        auto digraph = testsupport::random_digraph(gen, 12, 0.3);
        auto g = testsupport::to_author_graph(digraph);
        auto x = katz_raw(g, cfg);
        double alpha = katz_default_alpha(g);
        double residual = 0;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            double acc = 0;
            for (std::int32_t j : g.in[i]) {
                acc += x[static_cast<std::size_t>(j)];
            }
            residual = std::max(residual, std::abs(x[i] - (alpha * acc + cfg.beta)));
        }
        CHECK(residual < cfg.tol);
    }
}

TEST_CASE("katz rejects bad parameters and reports divergence") {
    testsupport::Digraph pair;
    pair.n = 2;
    pair.edges = {{0, 1}, {1, 0}};
    auto g = testsupport::to_author_graph(pair);
    KatzConfig bad_alpha;
    bad_alpha.alpha = -1.0;
    CHECK_THROWS_AS(katz(g, bad_alpha), Error);

    KatzConfig diverges;
    diverges.alpha = 2.0; // spectral radius is 1
    diverges.max_iter = 200;
    try {
        katz(g, diverges);
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoConvergence);
    }
}

TEST_CASE("centralities are invariant under node relabeling") {
    std::mt19937_64 gen(5150);
    for (int round = 0; round < 20; ++round) {
        auto digraph = testsupport::random_digraph(gen, 10, 0.3);
        auto g = testsupport::to_author_graph(digraph);

        // relabel node i -> permuted name, rebuild, compare scores per node
        std::vector<std::size_t> perm(digraph.n);
        for (std::size_t i = 0; i < digraph.n; ++i) {
            perm[i] = i;
        }
        std::shuffle(perm.begin(), perm.end(), gen);
        testsupport::Digraph relabeled;
        relabeled.n = digraph.n;
        for (auto [a, b] : digraph.edges) {
            relabeled.edges.insert({static_cast<int>(perm[static_cast<std::size_t>(a)]),
                                    static_cast<int>(perm[static_cast<std::size_t>(b)])});
        }
        auto g2 = testsupport::to_author_graph(relabeled);

        auto scores1 = centralities(g);
        auto scores2 = centralities(g2);
        for (std::size_t v = 0; v < digraph.n; ++v) {
            char original[16], renamed[16];
            std::snprintf(original, sizeof original, "n%03zu", v);
            std::snprintf(renamed, sizeof renamed, "n%03zu", perm[v]);
            CHECK(scores1.betweenness.at(original) ==
                  doctest::Approx(scores2.betweenness.at(renamed)).epsilon(1e-9));
            CHECK(scores1.closeness.at(original) ==
                  doctest::Approx(scores2.closeness.at(renamed)).epsilon(1e-12));
            CHECK(scores1.katz.at(original) ==
                  doctest::Approx(scores2.katz.at(renamed)).epsilon(1e-9));
        }
    }
}

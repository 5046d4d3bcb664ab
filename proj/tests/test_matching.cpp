#include <doctest.h>

#include "kcover/bits.hpp"
#include "kcover/matching.hpp"

using namespace kcover;

TEST_CASE("matching: odd cycle") {
    Graph g{3, {{0, 1}, {1, 2}, {0, 2}}};
    CHECK(max_matching(g).edges.size() == 1);
}

TEST_CASE("matching: path on four vertices") {
    Graph g{4, {{0, 1}, {1, 2}, {2, 3}}};
    CHECK(max_matching(g).edges.size() == 2);
}

TEST_CASE("matching: petersen graph is perfectly matchable") {
    Graph g{10, {}};
    for (int i = 0; i < 5; ++i) {
        g.edges.emplace_back(i, (i + 1) % 5);      // outer cycle
        g.edges.emplace_back(i, i + 5);            // spokes
        g.edges.emplace_back(i + 5, 5 + (i + 2) % 5);  // inner pentagram
    }
    Matching m = max_matching(g);
    CHECK(is_valid_matching(g, m));
    CHECK(m.edges.size() == 5);
    CHECK(max_matching_bruteforce(g).edges.size() == 5);
}

TEST_CASE("matching: empty and single edge") {
    CHECK(max_matching_bruteforce({0, {}}).edges.empty());
    CHECK(max_matching_bruteforce({2, {{0, 1}}}).edges.size() == 1);
}

TEST_CASE("matching: random graphs agree with brute force") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 3 + int(rng.below(10));  // up to 12 vertices
        Graph g{n, {}};
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (rng.below(100) < 30) g.edges.emplace_back(a, b);
        Matching fast = max_matching(g);
        CHECK(is_valid_matching(g, fast));
        CHECK(fast.edges.size() == max_matching_bruteforce(g).edges.size());
    }
}

TEST_CASE("matching: deterministic output") {
    Graph g{6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}}};
    Matching a = max_matching(g), b = max_matching(g);
    CHECK(a.edges == b.edges);
}

TEST_CASE("matching: bruteforce size guard") {
    CHECK_THROWS(max_matching_bruteforce({17, {}}));
}

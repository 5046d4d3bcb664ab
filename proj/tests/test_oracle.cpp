#include <doctest.h>

#include "kcover/generators.hpp"
#include "kcover/oracle.hpp"
#include "kcover/packing.hpp"

using namespace kcover;

TEST_CASE("oracle: perfect partition") {
    Instance inst = parse_instance_text("p setcover 8 2 4\ns 1 2 3 4\ns 5 6 7 8\n");
    auto res = min_cover_exact(inst);
    CHECK(res.b == 2);
    CHECK(res.b1 == 0);
    CHECK(res.b1_global == 0);
    CHECK(res.simultaneous);
}

TEST_CASE("oracle: isolated singletons") {
    Instance inst = parse_instance_text("p setcover 3 3 4\ns 1\ns 2\ns 3\n");
    auto res = min_cover_exact(inst);
    CHECK(res.b == 3);
    CHECK(res.b1 == 3);
    CHECK(res.b1_global == 3);
    CHECK(res.simultaneous);
}

TEST_CASE("oracle: size and ones can trade off, lemma still holds") {
    // Covering with 2 sets forces a singleton; 0 singletons needs 2 sets too
    // ({1,2} + {3,4]), so (b, b1_global) is simultaneously achievable here.
    Instance inst = parse_instance_text("p setcover 4 3 3\ns 1 2 3\ns 3 4\ns 1 2\n");
    auto res = min_cover_exact(inst);
    CHECK(res.b == 2);
    CHECK(res.b1_global == 0);
    CHECK(res.simultaneous);
}

TEST_CASE("oracle: simultaneous (b, b1_global) cover exists on random instances") {
    for (uint64_t seed = 1; seed <= 60; ++seed) {
        auto g = gen_random(5 + int(seed % 11), 4, 16, 0.6, seed * 131);
        auto res = min_cover_exact(g.instance);
        CHECK(res.simultaneous);
        CoverStats st = validate_cover(g.instance, res.witness_min);
        CHECK(st.total == res.b);
        CHECK(st.ones == res.b1);
    }
}

TEST_CASE("oracle: budget guard") {
    auto g = gen_random(21, 4, 30, 0.5, 3);
    CHECK_THROWS_AS(min_cover_exact(g.instance, OracleBudget{20, 1'000'000}), DomainError);
}

TEST_CASE("oracle: max packing basics") {
    Instance inst = parse_instance_text("p setcover 8 2 4\ns 1 2 3 4\ns 5 6 7 8\n");
    CHECK(max_packing_exact(inst, 4).size == 2);
    CHECK(max_packing_exact(inst, 5).size == 0);
}

TEST_CASE("oracle: packing dominates the local search") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        auto g = gen_random(12, 4, 20, 0.7, seed * 17);
        auto exact = max_packing_exact(g.instance, 4);
        Packing p = improve_packing(g.instance, maximal_packing(g.instance, 4), {4, 4, false});
        CHECK(exact.size >= int(p.members.size()));
    }
}

TEST_CASE("oracle: min ones agrees with trivial cases") {
    Instance inst = parse_instance_text("p setcover 6 2 3\ns 1 2 3\ns 4 5 6\n");
    CHECK(min_ones_exact(inst) == 0);
    Instance lone = parse_instance_text("p setcover 4 2 3\ns 1 2 3\ns 4\n");
    CHECK(min_ones_exact(lone) == 1);
}
